"""Dense complex linear algebra for small Hilbert spaces (dim <= 8) and the
algebraic building blocks of the Lindblad generator.

Matrices are plain numpy complex128 arrays; the wrapper types below carry the
physical invariants (Hermiticity, unit trace, positivity, channel rates).
All operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import jacobi_eigh
from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    PositivityError,
    SupportError,
)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-9     # density-operator positivity tolerance
EIGEN_INPUT_TOL = 1e-10      # hermitian_eigen input tolerance
SUPPORT_TOL = 1e-12          # relative-entropy support threshold


def square_matrix(m):
    """Validate and return m as a square complex128 array."""
    a = np.ascontiguousarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def ketbra(dim, i, j):
    """|i><j| in a dim-dimensional space."""
    m = np.zeros((dim, dim), dtype=complex)
    m[i, j] = 1.0
    return m


def hermitize(m):
    return (m + m.conj().T) / 2.0


def hermiticity_deviation(m):
    return float(np.max(np.abs(m - m.conj().T)))


def _require_same_dim(a, b):
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


@dataclass(frozen=True)
class DensityOperator:
    """Unit-trace positive Hermitian matrix; the simulation state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = square_matrix(self.matrix)
        dev = hermiticity_deviation(m)
        if dev > HERMITICITY_TOL:
            raise NotHermitianError(f"density matrix not Hermitian: deviation {dev:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise PositivityError(f"density matrix trace {tr!r} differs from 1 beyond tolerance")
        w, _ = hermitian_eigen(hermitize(m))
        if w[0] < EIGENVALUE_FLOOR:
            raise PositivityError(f"density matrix has eigenvalue {w[0]:.3e} < {EIGENVALUE_FLOOR}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @staticmethod
    def from_ket(ket):
        ket = np.asarray(ket, dtype=complex).reshape(-1)
        ket = ket / np.linalg.norm(ket)
        return DensityOperator(np.outer(ket, ket.conj()))


@dataclass(frozen=True)
class DissipationChannel:
    """One thermal Lindblad channel built from a lowering operator.

    A channel with occupation nbar expands into the pair of terms
    (rate/2)(nbar+1) on the lowering operator and (rate/2)*nbar on its
    adjoint; occupation 0 disables the heating term.
    """

    jump: np.ndarray
    rate: float
    occupation: float = 0.0

    def __post_init__(self):
        j = square_matrix(self.jump)
        j.setflags(write=False)
        object.__setattr__(self, "jump", j)
        if self.rate < 0:
            raise ValueError("channel rate must be nonnegative")
        if self.occupation < 0:
            raise ValueError("channel occupation must be nonnegative")

    @property
    def dim(self):
        return self.jump.shape[0]


@dataclass(frozen=True)
class SystemModel:
    """Static Hamiltonian, drive coupling, and dissipation channels.

    h0 is Hermitian (energies in units of hbar*omega0); drive_lower is a pure
    lowering operator in the energy eigenbasis of h0; drive_rate is the gamma
    whose square root couples the drive amplitude.
    """

    h0: np.ndarray
    drive_lower: np.ndarray
    drive_rate: float
    channels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        h0 = square_matrix(self.h0)
        ld = square_matrix(self.drive_lower)
        _require_same_dim(h0, ld)
        dev = hermiticity_deviation(h0)
        if dev > HERMITICITY_TOL:
            raise NotHermitianError(f"h0 not Hermitian: deviation {dev:.3e}")
        if self.drive_rate < 0:
            raise ValueError("drive_rate must be nonnegative")
        channels = tuple(self.channels)
        for ch in channels:
            _require_same_dim(h0, ch.jump)
        _check_pure_lowering(h0, ld)
        h0.setflags(write=False)
        ld.setflags(write=False)
        object.__setattr__(self, "h0", h0)
        object.__setattr__(self, "drive_lower", ld)
        object.__setattr__(self, "channels", channels)

    @property
    def dim(self):
        return self.h0.shape[0]


def _check_pure_lowering(h0, lower):
    """Every nonzero entry of lower must move population down in energy."""
    scale = float(np.max(np.abs(lower)))
    if scale == 0.0:
        return
    w, v = hermitian_eigen(hermitize(h0))
    b = v.conj().T @ lower @ v
    tol = 1e-9 * (1.0 + scale)
    gap_tol = 1e-9 * (1.0 + float(np.max(np.abs(w))))
    for i in range(b.shape[0]):
        for j in range(b.shape[1]):
            if abs(b[i, j]) > tol and not w[i] < w[j] - gap_tol:
                raise ValueError(
                    "drive_lower is not a pure lowering operator in the "
                    "energy eigenbasis of h0"
                )


def commutator(a, b):
    """[a, b] = ab - ba."""
    a = square_matrix(a)
    b = square_matrix(b)
    _require_same_dim(a, b)
    return a @ b - b @ a


def dissipator_apply(channel, rho):
    """Channel contribution to drho/dt in standard Lindblad form.

    (rate/2)(nbar+1)(2 L rho L+ - L+L rho - rho L+L)
      + (rate/2) nbar (2 L+ rho L - L L+ rho - rho L L+)
    """
    rho = square_matrix(rho)
    _require_same_dim(channel.jump, rho)
    lo = channel.jump
    lh = lo.conj().T
    k1 = 0.5 * channel.rate * (channel.occupation + 1.0)
    k2 = 0.5 * channel.rate * channel.occupation
    m1 = lh @ lo
    out = k1 * (2.0 * (lo @ rho @ lh) - m1 @ rho - rho @ m1)
    if k2 != 0.0:
        m2 = lo @ lh
        out += k2 * (2.0 * (lh @ rho @ lo) - m2 @ rho - rho @ m2)
    return out


def drive_hamiltonian(model, g):
    """H1(g) = i*sqrt(gamma) (g* L - g L+), the Jaynes-Cummings coupling.

    The same expression with dg/dt in place of g yields dH1/dt.
    """
    sq = math.sqrt(model.drive_rate)
    ld = model.drive_lower
    return 1j * sq * (np.conj(g) * ld - g * ld.conj().T)


def liouvillian_apply(model, drive_amp, rho):
    """Full generator: -i[h0 + h1(g), rho] + sum of channel dissipators."""
    rho = square_matrix(rho)
    _require_same_dim(model.h0, rho)
    h = model.h0
    if model.drive_rate != 0.0 and drive_amp != 0.0:
        h = h + drive_hamiltonian(model, drive_amp)
    out = -1j * (h @ rho - rho @ h)
    for ch in model.channels:
        out += dissipator_apply(ch, rho)
    return out


def hermitian_eigen(m):
    """Eigendecomposition m = V diag(w) V+ by cyclic Jacobi rotations.

    Returns eigenvalues ascending and the unitary V whose columns are the
    eigenvectors. Input must be Hermitian within 1e-10.
    """
    m = square_matrix(m)
    dev = hermiticity_deviation(m)
    scale = 1.0 + float(np.max(np.abs(m)))
    if dev > EIGEN_INPUT_TOL * scale:
        raise NotHermitianError(f"matrix not Hermitian: deviation {dev:.3e}")
    return jacobi_eigh(m)


def entropy_of_spectrum(eigenvalues, floor=EIGENVALUE_FLOOR):
    """-sum(lam * ln lam) with 0 ln 0 = 0; small negatives are clamped.

    Works for unnormalized spectra too (block entropies of a direct sum).
    """
    s = 0.0
    for lam in np.asarray(eigenvalues, dtype=float):
        if lam < floor:
            raise PositivityError(f"eigenvalue {lam:.3e} below positivity tolerance")
        if lam > 0.0:
            s -= lam * math.log(lam)
    return max(s, 0.0)


def von_neumann_entropy(rho):
    """S = -tr(rho ln rho) in nats; eigenvalues in [-1e-9, 0) count as 0."""
    m = rho.matrix if isinstance(rho, DensityOperator) else square_matrix(rho)
    w, _ = hermitian_eigen(hermitize(m))
    return entropy_of_spectrum(w)


def relative_entropy(rho, sigma):
    """S(rho || sigma) = tr[rho (ln rho - ln sigma)] in nats.

    Requires the support of rho to lie inside the support of sigma: every
    rho-eigenvector with weight > 1e-12 must have sigma-expectation > 1e-12.
    """
    mr = rho.matrix if isinstance(rho, DensityOperator) else square_matrix(rho)
    ms = sigma.matrix if isinstance(sigma, DensityOperator) else square_matrix(sigma)
    _require_same_dim(mr, ms)
    wr, vr = hermitian_eigen(hermitize(mr))
    ws, vs = hermitian_eigen(hermitize(ms))
    for i in range(len(wr)):
        if wr[i] > SUPPORT_TOL:
            vec = vr[:, i]
            expect = float(np.real(vec.conj() @ ms @ vec))
            if expect <= SUPPORT_TOL:
                raise SupportError(
                    "support of rho is not contained in support of sigma "
                    f"(eigenvalue {wr[i]:.3e} with sigma-expectation {expect:.3e})"
                )
    term_rho = -entropy_of_spectrum(wr)
    log_ws = np.log(np.clip(ws, 1e-300, None))
    overlap = np.abs(vs.conj().T @ vr) ** 2    # overlap[j, i] = |<s_j|r_i>|^2
    wr_pos = np.clip(wr, 0.0, None)
    term_sigma = float(wr_pos @ (overlap.T @ log_ws))
    return term_rho - term_sigma


def gibbs_state(h, beta):
    """Canonical state exp(-beta h)/Z as a DensityOperator."""
    h = square_matrix(h)
    if not beta > 0:
        raise ValueError("beta must be positive")
    w, v = hermitian_eigen(h)
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    return DensityOperator(hermitize((v * p) @ v.conj().T))
