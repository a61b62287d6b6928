"""Two-level system in a cold bath driven by photon pulses.

Conventions: sigma_z = |0><0| - |1><1| and h0 = -(1/2) sigma_z in units of
hbar*omega0, so |1> is the higher-energy state; sigma_- = |0><1| lowers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_SI, EPS0_SI, HBAR_SI, KB_EV_PER_K
from .core import DensityOperator, DissipationChannel, SystemModel, ketbra


def sigma_z():
    return np.diag([1.0 + 0.0j, -1.0 + 0.0j])


def sigma_minus():
    return ketbra(2, 0, 1)


def sigma_plus():
    return ketbra(2, 1, 0)


def ground_state():
    return DensityOperator(ketbra(2, 0, 0))


def excited_state():
    return DensityOperator(ketbra(2, 1, 1))


def superposition_state():
    """(|0> + |1>)/sqrt(2) as a density operator."""
    return DensityOperator.from_ket([1.0, 1.0])


def bose_occupation(energy_ev, temperature_k):
    """Thermal occupation 1/(exp(E/kBT) - 1); underflows to 0."""
    if not energy_ev > 0 or not temperature_k > 0:
        raise ValueError("energy and temperature must be positive")
    x = energy_ev / (KB_EV_PER_K * temperature_k)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def spontaneous_emission_rate(dipole_cm, omega0_rad_s):
    """Free-space spontaneous decay rate of a dipole transition [1/s].

    gamma = omega0^3 d^2 / (3 pi eps0 hbar c^3); scales as omega0^3.
    """
    if dipole_cm < 0 or omega0_rad_s < 0:
        raise ValueError("dipole and frequency must be nonnegative")
    return omega0_rad_s**3 * dipole_cm**2 / (3.0 * math.pi * EPS0_SI * HBAR_SI * C_SI**3)


@dataclass(frozen=True)
class TwoLevelParams:
    """Transition gap [eV], decay rate [omega0 units], bath temperature [K].

    nbar_override forces the channel occupation (0 gives the optical-limit
    dissipator); None uses the exact Bose value, which at 1 eV / 300 K is
    ~1.6e-17 and indistinguishable from 0 in practice.
    """

    gap_ev: float = 1.0
    gamma: float = 1e-2
    tc_kelvin: float = 300.0
    nbar_override: float | None = None

    def __post_init__(self):
        if not self.gap_ev > 0:
            raise ValueError("gap_ev must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if not self.tc_kelvin > 0:
            raise ValueError("tc_kelvin must be positive")

    @property
    def nbar(self):
        if self.nbar_override is not None:
            return self.nbar_override
        return bose_occupation(self.gap_ev, self.tc_kelvin)

    @property
    def beta(self):
        """Dimensionless hbar*omega0/(kB*Tc)."""
        return self.gap_ev / (KB_EV_PER_K * self.tc_kelvin)


def build_two_level(params):
    """Model with h0 = -(1/2) sigma_z, pulse-driven sigma_-, one cold channel."""
    h0 = -0.5 * sigma_z()
    channel = DissipationChannel(sigma_minus(), params.gamma, params.nbar)
    return SystemModel(
        h0=h0,
        drive_lower=sigma_minus(),
        drive_rate=params.gamma,
        channels=(channel,),
    )


def analytic_decay(rho0, gamma, t, carrier=1.0):
    """Closed-form amplitude-damping evolution at occupation 0, no drive.

    rho11(t) = rho11(0) e^{-gamma t}; the coherence decays at half that rate
    and rotates with the h0 phase e^{+i omega0 t}; populations stay
    normalized. Serves as the integration oracle.
    """
    m0 = rho0.matrix if isinstance(rho0, DensityOperator) else np.asarray(rho0, dtype=complex)
    if m0.shape != (2, 2):
        raise ValueError("analytic_decay needs a two-level state")
    p1 = m0[1, 1].real * math.exp(-gamma * t)
    c01 = m0[0, 1] * math.exp(-gamma * t / 2.0) * np.exp(1j * carrier * t)
    out = np.array([[1.0 - p1, c01], [np.conj(c01), p1]], dtype=complex)
    return DensityOperator(out)
