"""Physical constants (SI unless noted) and internal unit conventions.

Internal units throughout the package: hbar = 1 and omega0 = 1, where omega0
is the driven transition frequency. Energies are multiples of hbar*omega0,
rates are multiples of omega0, time is measured in 1/omega0. Temperature only
enters through the dimensionless ratio hbar*omega0 / (kB*T).
"""

import math

KB_EV_PER_K = 8.617333e-5          # Boltzmann constant [eV/K]
HBAR_SI = 1.054571817e-34          # [J s]
C_SI = 2.99792458e8                # [m/s]
EPS0_SI = 8.8541878128e-12         # [F/m]
EV_SI = 1.602176634e-19            # [J]
DEBYE_SI = 3.33564e-30             # [C m]

TWO_PI = 2.0 * math.pi


def omega_from_ev(energy_ev):
    """Angular frequency [rad/s] of a transition with the given energy [eV]."""
    return energy_ev * EV_SI / HBAR_SI


def beta_internal(gap_ev, temperature_k):
    """Dimensionless inverse temperature hbar*omega0/(kB*T) for a gap in eV."""
    return gap_ev / (KB_EV_PER_K * temperature_k)
