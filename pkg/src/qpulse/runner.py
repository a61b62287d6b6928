"""Scenario orchestration: integrate, compute observables per record, and
write the CSV contract (one row per record, full double precision)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import thermo
from ._backend import jacobi_eigh
from .config import build_pulse_sequence, build_system, integration_config
from .constants import TWO_PI
from .core import (
    entropy_of_spectrum,
    hermiticity_deviation,
    hermitize,
    liouvillian_apply,
)
from .dynamics import evolve
from .photocell import EPS_POWER, donor_acceptor_split, electrical

TWO_LEVEL_COLUMNS = [
    "t", "rho00_re", "rho01_re", "rho01_im", "rho11_re", "g_re", "g_im",
    "E", "P", "J", "W", "Q", "S", "dSdt", "sigma", "residual",
]
PHOTOCELL_EXTRA_COLUMNS = [
    "I", "V", "Pout", "PD", "eta", "E_D", "E_A", "J_D", "J_A",
    "S_D", "S_A", "rho00", "rho11", "rho22", "rho33", "eta_inst",
]
ETA_SMOOTHING_PERIODS = 10.0   # sliding-average window for Pout and PD


@dataclass
class RunResult:
    """Everything a scenario run produced: states, observables, diagnostics."""

    config: object
    model: object
    sequence: object
    t: np.ndarray
    states: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    columns: dict = field(default_factory=dict)
    column_order: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def system(self):
        return self.config.system


def _moving_average_nan(x, window):
    """Centered sliding mean ignoring NaN; windows shrink at the edges."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if window <= 1 or n == 0:
        return x.copy()
    half = window // 2
    valid = np.isfinite(x)
    fill = np.where(valid, x, 0.0)
    csum = np.concatenate(([0.0], np.cumsum(fill)))
    ccnt = np.concatenate(([0], np.cumsum(valid.astype(np.int64))))
    idx = np.arange(n)
    lo = np.clip(idx - half, 0, n)
    hi = np.clip(idx + half + 1, 0, n)
    sums = csum[hi] - csum[lo]
    cnts = ccnt[hi] - ccnt[lo]
    out = np.full(n, np.nan)
    nz = cnts > 0
    out[nz] = sums[nz] / cnts[nz]
    return out


def run_scenario(cfg):
    """Run one configured scenario and compute every exported observable."""
    seq = build_pulse_sequence(cfg)
    model, rho0 = build_system(cfg)
    icfg = integration_config(cfg)

    times, states, gs, dgs = [], [], [], []

    def observer(t, rho, g, dg):
        times.append(t)
        states.append(rho)
        gs.append(g)
        dgs.append(dg)

    stats = {}
    evolve(model, seq, rho0, icfg, observer=observer, stats=stats)

    t = np.array(times)
    states_arr = np.array(states)
    g_arr = np.array(gs, dtype=complex)
    dg_arr = np.array(dgs, dtype=complex)
    result = RunResult(cfg, model, seq, t, states_arr, g_arr, dg_arr)
    _compute_columns(result, stats)
    return result


def _compute_columns(result, stats):
    cfg = result.config
    model = result.model
    t, states, g_arr, dg_arr = result.t, result.states, result.g, result.dg
    n = t.size
    is_photocell = cfg.system == "photocell"
    params = cfg.photocell if is_photocell else cfg.two_level

    e = np.zeros(n)
    p = np.zeros(n)
    j = np.zeros(n)
    s = np.zeros(n)
    dsdt_point = np.zeros(n)
    purities = np.zeros(n)
    residual = np.zeros(n)
    min_eig = math.inf
    max_herm = 0.0

    if is_photocell:
        split_cols = {k: np.zeros(n) for k in
                      ("E_D", "E_A", "J_D", "J_A", "PD", "S_D", "S_A")}
        cur = np.zeros(n)
        volt = np.zeros(n)
        pout = np.zeros(n)
        pops = np.zeros((n, 4))
        max_block_coh = 0.0
        max_power_split_dev = 0.0

    for k in range(n):
        rho = states[k]
        gk = complex(g_arr[k])
        dgk = complex(dg_arr[k])
        rho_dot = liouvillian_apply(model, gk, rho)
        e[k] = thermo.energy(rho, model, gk)
        p[k] = thermo.power(rho, model, dgk)
        j[k] = thermo.heat_current(rho_dot, rho, model, gk)
        dedt = thermo.energy_rate_independent(rho_dot, rho, model, gk, dgk)
        residual[k] = abs(dedt - j[k] - p[k])
        w, _ = jacobi_eigh(hermitize(rho))
        s[k] = entropy_of_spectrum(w)
        purities[k] = float(np.sum(w * w))
        dsdt_point[k] = thermo.entropy_rate(rho_dot, rho)
        if w[0] < min_eig:
            min_eig = float(w[0])
        dev = hermiticity_deviation(rho)
        if dev > max_herm:
            max_herm = dev
        if is_photocell:
            split = donor_acceptor_split(rho, model, gk, dgk, rho_dot)
            split_cols["E_D"][k] = split.e_donor
            split_cols["E_A"][k] = split.e_acceptor
            split_cols["J_D"][k] = split.j_donor
            split_cols["J_A"][k] = split.j_acceptor
            split_cols["PD"][k] = split.p_donor
            split_cols["S_D"][k] = split.s_donor
            split_cols["S_A"][k] = split.s_acceptor
            elec = electrical(rho, params)
            cur[k] = elec.current
            volt[k] = elec.voltage_ev
            pout[k] = elec.output_power
            pops[k] = np.diag(rho).real
            coh = float(np.max(np.abs(rho[:2, 2:])))
            if coh > max_block_coh:
                max_block_coh = coh
            dev_p = abs(p[k] - split.p_donor)
            if dev_p > max_power_split_dev:
                max_power_split_dev = dev_p

    w_cum, q_cum = thermo.accumulate(t, p, j)
    dsdt = thermo.entropy_rate_series(t, s, purities, dsdt_point)
    if is_photocell:
        sigma = np.full(n, np.nan)
    else:
        sigma = dsdt - params.beta * j

    cols = {
        "t": t,
        "rho00_re": states[:, 0, 0].real.copy(),
        "rho01_re": states[:, 0, 1].real.copy(),
        "rho01_im": states[:, 0, 1].imag.copy(),
        "rho11_re": states[:, 1, 1].real.copy(),
        "g_re": g_arr.real.copy(),
        "g_im": g_arr.imag.copy(),
        "E": e, "P": p, "J": j, "W": w_cum, "Q": q_cum,
        "S": s, "dSdt": dsdt, "sigma": sigma, "residual": residual,
    }
    order = list(TWO_LEVEL_COLUMNS)

    diagnostics = dict(stats)
    diagnostics.update(
        min_record_eigenvalue=min(min_eig, stats.get("min_record_eigenvalue", math.inf)),
        max_hermiticity_deviation=max_herm,
        max_first_law_residual=float(np.max(residual)) if n else 0.0,
        final_work=float(w_cum[-1]) if n else 0.0,
        final_heat=float(q_cum[-1]) if n else 0.0,
        final_entropy=float(s[-1]) if n else 0.0,
    )
    if not is_photocell:
        diagnostics["min_sigma"] = float(np.min(sigma)) if n else math.nan

    if is_photocell:
        h = t[1] - t[0] if n > 1 else 1.0
        window = max(1, int(round(ETA_SMOOTHING_PERIODS * TWO_PI / h)))
        pout_s = _moving_average_nan(pout, window)
        pd_s = _moving_average_nan(split_cols["PD"], window)
        eta = np.full(n, np.nan)
        ok = np.isfinite(pout_s) & np.isfinite(pd_s) & (pd_s > EPS_POWER)
        eta[ok] = pout_s[ok] / pd_s[ok]
        eta_inst = np.full(n, np.nan)
        ok_i = np.isfinite(pout) & (np.abs(split_cols["PD"]) > EPS_POWER)
        eta_inst[ok_i] = pout[ok_i] / split_cols["PD"][ok_i]

        cols.update(
            I=cur, V=volt, Pout=pout, PD=split_cols["PD"], eta=eta,
            E_D=split_cols["E_D"], E_A=split_cols["E_A"],
            J_D=split_cols["J_D"], J_A=split_cols["J_A"],
            S_D=split_cols["S_D"], S_A=split_cols["S_A"],
            rho00=pops[:, 0], rho11=pops[:, 1],
            rho22=pops[:, 2], rho33=pops[:, 3],
            eta_inst=eta_inst,
        )
        order += PHOTOCELL_EXTRA_COLUMNS
        defined = eta[np.isfinite(eta)]
        diagnostics.update(
            max_block_coherence=max_block_coh,
            max_power_split_deviation=max_power_split_dev,
            max_entropy_additivity_gap=float(
                np.max(np.abs(s - split_cols["S_D"] - split_cols["S_A"]))
            ) if n else 0.0,
            final_eta=float(defined[-1]) if defined.size else math.nan,
        )

    result.columns = cols
    result.column_order = order
    result.diagnostics = diagnostics


def _format(x):
    if isinstance(x, float) and math.isnan(x):
        return ""
    return format(x, ".17g")


def write_csv(result, path):
    """One header row plus one record per line, 17 significant digits."""
    order = result.column_order
    cols = [result.columns[name] for name in order]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(order) + "\n")
        for k in range(result.t.size):
            fh.write(",".join(_format(float(c[k])) for c in cols) + "\n")


def summary_text(result):
    d = result.diagnostics
    lines = [
        f"system: {result.config.system}",
        f"records: {result.t.size}",
        f"final W: {d['final_work']:.6g}",
        f"final Q: {d['final_heat']:.6g}",
        f"final S: {d['final_entropy']:.6g}",
        f"max first-law residual: {d['max_first_law_residual']:.3e}",
        f"max trace drift: {d.get('max_trace_drift', 0.0):.3e}",
        f"min record eigenvalue: {d['min_record_eigenvalue']:.3e}",
    ]
    if result.config.system == "two-level":
        lines.append(f"min sigma: {d['min_sigma']:.6g}")
    else:
        lines.append(f"final eta: {d['final_eta']:.6g}")
    return "\n".join(lines)
