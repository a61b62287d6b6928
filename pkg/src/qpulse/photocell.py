"""Four-level donor-acceptor photocell: model assembly, donor/acceptor
thermodynamic split, and the electrical observables I, V, P_out, eta.

Level layout (energies in eV, E0 = 0 reference):
    |0> donor ground, |1> donor excited (E1 - E0 = donor gap, the driven
    transition), |2> acceptor top, |3> acceptor bottom (E2 - E3 = acceptor
    gap). Phonons carry the E1-E2 and E3-E0 steps; the load channel takes
    |2> -> |3>. Internally energies are divided by the donor gap so that
    omega0 = 1 stays the driven transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .constants import KB_EV_PER_K
from .core import (
    DissipationChannel,
    SystemModel,
    drive_hamiltonian,
    hermitian_eigen,
    hermitize,
    entropy_of_spectrum,
    ketbra,
    square_matrix,
)
from .errors import ConfigError, ModelViolationError
from .thermo import _trace_product
from .twolevel import bose_occupation

BLOCK_COHERENCE_TOL = 1e-10
EPS_POPULATION = 1e-9     # voltage defined only above this occupation
EPS_POWER = 1e-9          # efficiency defined only above this drive power


@dataclass(frozen=True)
class PhotocellParams:
    """Gaps in eV, rates in omega0 units (omega0 = donor gap), bath in K.

    phonon_energy_ev defaults to (donor - acceptor)/2 so that
    E1-E2 = E3-E0; nbar overrides force channel occupations (None = exact
    Bose values at each channel's own gap).
    """

    donor_gap_ev: float = 1.8
    acceptor_gap_ev: float = 1.6
    gamma01: float = 1e-3
    gamma12: float = 1e-2
    gamma30: float = 1e-2
    big_gamma: float = 0.1
    tc_kelvin: float = 300.0
    phonon_energy_ev: float | None = None
    nbar_c_override: float | None = None
    nbar_ph_override: float | None = None

    def __post_init__(self):
        if not self.donor_gap_ev > self.acceptor_gap_ev > 0:
            raise ConfigError("need donor_gap_ev > acceptor_gap_ev > 0")
        for name in ("gamma01", "gamma12", "gamma30", "big_gamma"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if not self.tc_kelvin > 0:
            raise ConfigError("tc_kelvin must be positive")
        if self.phonon_energy_ev is not None and not self.phonon_energy_ev > 0:
            raise ConfigError("phonon_energy_ev must be positive")

    @property
    def phonon_energy(self):
        if self.phonon_energy_ev is not None:
            return self.phonon_energy_ev
        return 0.5 * (self.donor_gap_ev - self.acceptor_gap_ev)

    @property
    def energies_ev(self):
        """(E0, E1, E2, E3) with E0 = 0."""
        p = self.phonon_energy
        return (0.0, self.donor_gap_ev, p + self.acceptor_gap_ev, p)

    @property
    def kt_ev(self):
        return KB_EV_PER_K * self.tc_kelvin

    def nbar_cold(self):
        if self.nbar_c_override is not None:
            return self.nbar_c_override
        return bose_occupation(self.donor_gap_ev, self.tc_kelvin)

    def nbar_phonon(self, gap_ev):
        if self.nbar_ph_override is not None:
            return self.nbar_ph_override
        return bose_occupation(gap_ev, self.tc_kelvin)


def build_photocell(params):
    """Dim-4 model: pulse-driven donor, cold bath, two phonon channels, load.

    All lowering operators move population down in energy: |0><1| (radiative),
    |2><1| (donor to acceptor transfer), |0><3| (return), |3><2| (load,
    occupation 0).
    """
    e0, e1, e2, e3 = params.energies_ev
    scale = params.donor_gap_ev
    h0 = np.diag(np.array([e0, e1, e2, e3]) / scale).astype(complex)
    gap12 = e1 - e2
    gap30 = e3 - e0
    if gap12 <= 0 or gap30 <= 0:
        raise ConfigError("level layout must keep E1 > E2 and E3 > E0")
    channels = (
        DissipationChannel(ketbra(4, 0, 1), params.gamma01, params.nbar_cold()),
        DissipationChannel(ketbra(4, 2, 1), params.gamma12, params.nbar_phonon(gap12)),
        DissipationChannel(ketbra(4, 0, 3), params.gamma30, params.nbar_phonon(gap30)),
        DissipationChannel(ketbra(4, 3, 2), params.big_gamma, 0.0),
    )
    return SystemModel(
        h0=h0,
        drive_lower=ketbra(4, 0, 1),
        drive_rate=params.gamma01,
        channels=channels,
    )


class DonorAcceptorSplit(NamedTuple):
    e_donor: float
    e_acceptor: float
    j_donor: float
    j_acceptor: float
    p_donor: float
    s_donor: float
    s_acceptor: float


def donor_acceptor_split(rho, model, g, dg_dt, rho_dot):
    """Partition E, J, P, S into donor (levels 0,1) and acceptor (2,3) parts.

    Blocks are kept unnormalized so that S = S_D + S_A holds exactly for the
    direct sum. The split is only defined while the state stays
    block-diagonal; additivity of E, J, and S is verified to 1e-9.
    """
    rho = square_matrix(rho)
    rho_dot = square_matrix(rho_dot)
    if rho.shape != (4, 4):
        raise ModelViolationError("donor/acceptor split needs a 4-level state")
    cross = float(np.max(np.abs(rho[:2, 2:])))
    if cross > BLOCK_COHERENCE_TOL:
        raise ModelViolationError(
            f"inter-block coherence {cross:.3e} exceeds {BLOCK_COHERENCE_TOL}"
        )
    h = model.h0 + drive_hamiltonian(model, g)
    h_d = h[:2, :2]
    h_a = h[2:, 2:]
    dh1 = drive_hamiltonian(model, dg_dt)

    e_d = _trace_product(rho[:2, :2], h_d)
    e_a = _trace_product(rho[2:, 2:], h_a)
    j_d = _trace_product(rho_dot[:2, :2], h_d)
    j_a = _trace_product(rho_dot[2:, 2:], h_a)
    p_d = _trace_product(rho[:2, :2], dh1[:2, :2])

    w_d, _ = hermitian_eigen(hermitize(rho[:2, :2]))
    w_a, _ = hermitian_eigen(hermitize(rho[2:, 2:]))
    s_d = entropy_of_spectrum(w_d)
    s_a = entropy_of_spectrum(w_a)

    w_full, _ = hermitian_eigen(hermitize(rho))
    s_full = entropy_of_spectrum(w_full)
    e_full = _trace_product(rho, h)
    j_full = _trace_product(rho_dot, h)
    for name, lhs, rhs in (
        ("energy", e_d + e_a, e_full),
        ("heat current", j_d + j_a, j_full),
        ("entropy", s_d + s_a, s_full),
    ):
        if abs(lhs - rhs) > 1e-9:
            raise ModelViolationError(
                f"donor/acceptor {name} additivity broken: {lhs!r} vs {rhs!r}"
            )
    return DonorAcceptorSplit(e_d, e_a, j_d, j_a, p_d, s_d, s_a)


@dataclass(frozen=True)
class ElectricalRecord:
    """Load observables; NaN marks undefined voltage / efficiency."""

    current: float               # e * omega0 units
    voltage_ev: float            # eV per unit charge
    output_power: float          # hbar*omega0*omega0 units
    donor_power: float = math.nan
    efficiency: float = math.nan


def electrical(rho, params, kt_ev=None):
    """I = Gamma * rho22, V from the quasi-Fermi-level split, P_out = I*V.

    The voltage needs both acceptor populations above 1e-9; below that the
    record carries NaN sentinels instead of raising.
    """
    rho = square_matrix(rho)
    if kt_ev is None:
        kt_ev = params.kt_ev
    p22 = max(float(rho[2, 2].real), 0.0)
    p33 = max(float(rho[3, 3].real), 0.0)
    current = params.big_gamma * p22
    if min(p22, p33) > EPS_POPULATION:
        voltage = params.acceptor_gap_ev + kt_ev * math.log(p22 / p33)
        out_power = current * voltage / params.donor_gap_ev
    else:
        voltage = math.nan
        out_power = 0.0 if current == 0.0 else math.nan
    return ElectricalRecord(current, voltage, out_power)


def run_photocell_scenario(preset, overrides=None):
    """Run a bundled photocell scenario (fig7, fig8a, fig8b) or a custom one.

    overrides is an optional {kebab-case dotted key: value} mapping applied to
    the preset configuration; returns the full record streams as a RunResult.
    """
    from .config import apply_overrides, preset_config
    from .runner import run_scenario

    cfg = preset_config(preset)
    if cfg.system != "photocell":
        raise ConfigError(f"preset {preset!r} is not a photocell scenario")
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    return run_scenario(cfg)
