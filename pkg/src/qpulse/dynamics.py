"""Fixed-step RK4 integration of the master equation with record callbacks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pulses as pulse_mod
from ._backend import evolve_steps, jacobi_eigh
from .core import DensityOperator, hermitize, liouvillian_apply
from .errors import ConfigError, IntegrationUnstableError

MAX_OMEGA0_DT = 0.05        # dt must resolve the carrier oscillation
RENORM_TOL = 1e-12          # trace renormalization trigger
RECORD_POSITIVITY_TOL = -1e-6


@dataclass(frozen=True)
class IntegrationConfig:
    """Fixed-step grid: dt in 1/omega0, records every record_every steps."""

    dt: float
    t_start: float
    t_end: float
    record_every: int = 10

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.dt > MAX_OMEGA0_DT:
            raise ConfigError(f"omega0*dt must not exceed {MAX_OMEGA0_DT}")
        if self.t_end < self.t_start:
            raise ConfigError("t_end must not precede t_start")
        if self.record_every < 1:
            raise ConfigError("record_every must be a positive integer")
        span = self.t_end - self.t_start
        n = span / self.dt
        if n > 2**62:
            raise ConfigError("step count does not fit in a 64-bit counter")
        n_round = round(n)
        if abs(n - n_round) > 1e-6 * max(1.0, n_round):
            raise ConfigError("(t_end - t_start) must be a whole number of steps")
        if n_round % self.record_every != 0:
            raise ConfigError("step count must be a multiple of record_every")

    @property
    def n_steps(self):
        return int(round((self.t_end - self.t_start) / self.dt))

    @property
    def n_records(self):
        return self.n_steps // self.record_every


def _kernel_args(model, seq):
    """Pack model and pulse data into the flat arrays the kernels expect."""
    dim = model.dim
    n_ch = len(model.channels)
    ls = np.zeros((n_ch, dim, dim), dtype=complex)
    k1s = np.zeros(n_ch)
    k2s = np.zeros(n_ch)
    kanti = np.zeros((dim, dim), dtype=complex)
    for i, ch in enumerate(model.channels):
        ls[i] = ch.jump
        k1s[i] = 0.5 * ch.rate * (ch.occupation + 1.0)
        k2s[i] = 0.5 * ch.rate * ch.occupation
        lh = ch.jump.conj().T
        kanti += k1s[i] * (lh @ ch.jump)
        if k2s[i] != 0.0:
            kanti += k2s[i] * (ch.jump @ lh)
    bw, carrier = seq.uniform_bandwidth_carrier()
    peaks = np.ascontiguousarray(seq.peak_times, dtype=float)
    trunc = pulse_mod.TRUNCATION_RADIUS / bw
    return {
        "h0": np.ascontiguousarray(model.h0),
        "ld": np.ascontiguousarray(model.drive_lower),
        "sqrt_rate": math.sqrt(model.drive_rate),
        "amp": complex(seq.amplitude),
        "peaks": peaks,
        "bw": float(bw),
        "carrier": float(carrier),
        "trunc": float(trunc),
        "ls": ls,
        "k1s": k1s,
        "k2s": k2s,
        "kanti": kanti,
    }


def step_rk4(model, seq, rho, t, dt):
    """One classic RK4 step of drho/dt = L[rho] with exact stage-time drive.

    Pure stage arithmetic (no hermitization); exposed separately so the
    convergence order can be probed directly.
    """
    g1 = pulse_mod.sequence_value(seq, t)
    g2 = pulse_mod.sequence_value(seq, t + dt / 2.0)
    g3 = pulse_mod.sequence_value(seq, t + dt)
    k1 = liouvillian_apply(model, g1, rho)
    k2 = liouvillian_apply(model, g2, rho + (dt / 2.0) * k1)
    k3 = liouvillian_apply(model, g2, rho + (dt / 2.0) * k2)
    k4 = liouvillian_apply(model, g3, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve(model, seq, rho0, cfg, observer=None, stats=None):
    """Integrate the master equation from t_start to t_end.

    After every step the state is hermitized and its trace renormalized if it
    drifted beyond 1e-12. The observer, if given, is called as
    observer(t, rho_copy, g, dg_dt) at t_start, every record_every steps, and
    at t_end exactly. Returns the final state as a DensityOperator.

    stats, if a dict, receives diagnostics: max trace drift seen before
    renormalization and the smallest record-point eigenvalue.
    """
    rho = np.array(
        rho0.matrix if isinstance(rho0, DensityOperator) else rho0,
        dtype=complex,
        order="C",
    )
    if rho.shape != model.h0.shape:
        raise ConfigError("initial state dimension does not match the model")
    args = _kernel_args(model, seq)
    n_rec = cfg.n_records
    chunk = cfg.record_every
    max_drift = 0.0
    min_eig = math.inf

    def record(t):
        nonlocal min_eig
        if not np.all(np.isfinite(rho)):
            raise IntegrationUnstableError(f"non-finite state at t={t!r}")
        w, _ = jacobi_eigh(hermitize(rho))
        if w[0] < min_eig:
            min_eig = float(w[0])
        if w[0] < RECORD_POSITIVITY_TOL:
            raise IntegrationUnstableError(
                f"positivity violation at t={t!r}: min eigenvalue {w[0]:.3e}"
            )
        if observer is not None:
            g = pulse_mod.sequence_value(seq, t)
            dg = pulse_mod.sequence_derivative(seq, t)
            observer(t, rho.copy(), g, dg)

    record(cfg.t_start)
    for k in range(n_rec):
        t0 = cfg.t_start + k * chunk * cfg.dt
        drift = evolve_steps(
            rho, args["h0"], args["ld"], args["sqrt_rate"], args["amp"],
            args["peaks"], args["bw"], args["carrier"], args["trunc"],
            args["ls"], args["k1s"], args["k2s"], args["kanti"],
            t0, cfg.dt, chunk, RENORM_TOL,
        )
        if drift > max_drift:
            max_drift = drift
        t_now = cfg.t_start + (k + 1) * chunk * cfg.dt if k + 1 < n_rec else cfg.t_end
        record(t_now)

    if stats is not None:
        stats["max_trace_drift"] = max_drift
        stats["min_record_eigenvalue"] = min_eig
        stats["n_steps"] = cfg.n_steps
    tr = np.trace(rho).real
    if abs(tr - 1.0) > RENORM_TOL:
        rho /= tr
    return DensityOperator(hermitize(rho))
