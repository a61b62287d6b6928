"""qpulse: pulse-driven dissipative few-level quantum systems.

Lindblad dynamics under Gaussian photon-pulse trains, with first-law and
entropy bookkeeping for a driven two-level system and a four-level
donor-acceptor photocell.
"""

from ._backend import backend_name
from .core import (
    DensityOperator,
    DissipationChannel,
    SystemModel,
    commutator,
    dissipator_apply,
    gibbs_state,
    hermitian_eigen,
    liouvillian_apply,
    relative_entropy,
    von_neumann_entropy,
)
from .dynamics import IntegrationConfig, evolve, step_rk4
from .pulses import (
    GaussianPulse,
    PulseSequence,
    build_continuum,
    build_irregular,
    build_regular,
    pulse_value,
    sequence_derivative,
    sequence_value,
)
from .twolevel import (
    TwoLevelParams,
    analytic_decay,
    bose_occupation,
    build_two_level,
    spontaneous_emission_rate,
)
from .photocell import (
    ElectricalRecord,
    PhotocellParams,
    build_photocell,
    donor_acceptor_split,
    electrical,
    run_photocell_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "DensityOperator", "DissipationChannel", "SystemModel",
    "commutator", "dissipator_apply", "liouvillian_apply",
    "hermitian_eigen", "von_neumann_entropy", "relative_entropy",
    "gibbs_state", "GaussianPulse", "PulseSequence", "pulse_value",
    "sequence_value", "sequence_derivative", "build_regular",
    "build_irregular", "build_continuum", "IntegrationConfig", "evolve",
    "step_rk4", "TwoLevelParams", "bose_occupation",
    "spontaneous_emission_rate", "build_two_level", "analytic_decay",
    "PhotocellParams", "build_photocell", "donor_acceptor_split",
    "electrical", "ElectricalRecord", "run_photocell_scenario",
    "backend_name",
]
