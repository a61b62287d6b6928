"""Quantum-thermodynamic observables computed from (t, rho, g, dg/dt)
snapshots: internal energy, drive power, heat current, entropy bookkeeping,
and cumulative work/heat integrals on the record grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    drive_hamiltonian,
    hermitian_eigen,
    hermitize,
    square_matrix,
)
from .errors import PositivityError, UnsupportedConfigurationError

LOG_EIG_FLOOR = 1e-12        # eigenvalues below this use a clamped logarithm
PURITY_PURE = 1.0 - 1e-9     # entropy-rate switches to finite differences
SPOHN_SLACK = -1e-6


@dataclass(frozen=True)
class ThermoRecord:
    """One record-grid snapshot of every thermodynamic observable."""

    t: float
    energy: float
    power: float
    heat_current: float
    work: float
    heat: float
    entropy: float
    entropy_rate: float
    entropy_production: float
    first_law_residual: float


def _trace_product(a, b):
    """Re tr(a @ b) without forming the product matrix."""
    return float(np.real(np.einsum("ij,ji->", a, b)))


def energy(rho, model, g):
    """E = Re tr[rho (h0 + h1(g))], in hbar*omega0 units."""
    h = model.h0
    if model.drive_rate != 0.0 and g != 0.0:
        h = h + drive_hamiltonian(model, g)
    return _trace_product(square_matrix(rho), h)


def power(rho, model, dg_dt):
    """P = Re tr[rho dH1/dt]; dH1/dt has the H1 form with dg/dt for g."""
    if model.drive_rate == 0.0 or dg_dt == 0.0:
        return 0.0
    return _trace_product(square_matrix(rho), drive_hamiltonian(model, dg_dt))


def heat_current(rho_dot, rho, model, g):
    """J = Re tr[rho_dot (h0 + h1(g))]; rho_dot is the generator output."""
    h = model.h0
    if model.drive_rate != 0.0 and g != 0.0:
        h = h + drive_hamiltonian(model, g)
    return _trace_product(square_matrix(rho_dot), h)


def energy_rate_independent(rho_dot, rho, model, g, dg_dt):
    """dE/dt evaluated directly as tr(rho_dot H) + tr(rho dH/dt).

    Kept as a separate code path so the first-law residual
    |dE/dt - J - P| is a genuine cross-check of the observables.
    """
    h = model.h0
    if model.drive_rate != 0.0 and g != 0.0:
        h = h + drive_hamiltonian(model, g)
    out = float(np.real(np.trace(square_matrix(rho_dot) @ h)))
    if model.drive_rate != 0.0 and dg_dt != 0.0:
        out += float(np.real(np.trace(square_matrix(rho) @ drive_hamiltonian(model, dg_dt))))
    return out


def entropy_rate(rho_dot, rho):
    """dS/dt = -Re tr[rho_dot ln rho] in the eigenbasis of rho.

    Eigenvalues below 1e-12 contribute through a clamped ln(1e-12); this
    estimator degrades near pure states (ln rho singular), where callers
    should fall back to finite differences of S.
    """
    rho = square_matrix(rho)
    w, v = hermitian_eigen(hermitize(rho))
    if w[0] < -1e-9:
        raise PositivityError(f"entropy rate of non-positive state (min eig {w[0]:.3e})")
    weights = np.real(np.diag(v.conj().T @ square_matrix(rho_dot) @ v))
    logs = np.log(np.clip(w, LOG_EIG_FLOOR, None))
    return float(-(weights @ logs))


def purity(rho):
    """tr(rho^2), used to detect near-pure states."""
    rho = square_matrix(rho)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def entropy_production(rho_dot, rho, model, g, beta):
    """sigma = dS/dt - beta * J for a single thermal bath; Spohn-nonnegative.

    Models with more than one dissipation channel are rejected: the
    single-bath entropy flow beta*J is not defined for them.
    """
    if len(model.channels) != 1:
        raise UnsupportedConfigurationError(
            "entropy production is defined here only for single-bath models"
        )
    return entropy_rate(rho_dot, rho) - beta * heat_current(rho_dot, rho, model, g)


def accumulate(t, p, j):
    """Cumulative trapezoidal W(t) and Q(t) on a uniform record grid."""
    t = np.asarray(t, dtype=float)
    p = np.asarray(p, dtype=float)
    j = np.asarray(j, dtype=float)
    if t.ndim != 1 or t.size < 1 or p.shape != t.shape or j.shape != t.shape:
        raise ValueError("t, p, j must be 1-d arrays of equal length")
    w = np.zeros_like(p)
    q = np.zeros_like(j)
    if t.size == 1:
        return w, q
    dt = np.diff(t)
    h = dt[0]
    if np.max(np.abs(dt - h)) > 1e-9 * max(abs(h), 1.0):
        raise ValueError("record grid is not uniform")
    w[1:] = np.cumsum(0.5 * h * (p[:-1] + p[1:]))
    q[1:] = np.cumsum(0.5 * h * (j[:-1] + j[1:]))
    return w, q


def entropy_rate_series(t, entropies, purities, pointwise):
    """Per-record dS/dt: eigenbasis estimator, finite differences near purity.

    pointwise holds the eigenbasis estimator values; records whose purity
    exceeds 1 - 1e-9 are replaced by central (one-sided at the ends)
    differences of S on the record grid.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(entropies, dtype=float)
    out = np.array(pointwise, dtype=float)
    n = t.size
    if n < 2:
        return out
    for k in range(n):
        if purities[k] > PURITY_PURE:
            if 0 < k < n - 1:
                out[k] = (s[k + 1] - s[k - 1]) / (t[k + 1] - t[k - 1])
            elif k == 0:
                out[k] = (s[1] - s[0]) / (t[1] - t[0])
            else:
                out[k] = (s[-1] - s[-2]) / (t[-1] - t[-2])
    return out
