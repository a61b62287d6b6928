"""Acceptance criteria: every checkable number and sign claim the package
commits to, run end-to-end at pinned tolerances.

Each criterion returns a CheckResult so both `qpulse check` and the pytest
suite can consume the same implementations. Scenario runs are cached and
shared between criteria.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import config as config_mod
from . import pulses as pulse_mod
from . import runner as runner_mod
from .constants import TWO_PI
from .core import DensityOperator
from .dynamics import IntegrationConfig, evolve
from .pulses import PulseSequence
from .twolevel import (
    TwoLevelParams,
    analytic_decay,
    bose_occupation,
    build_two_level,
    superposition_state,
)

SLOW_CRITERIA = (8, 9, 10)     # multi-minute photocell / multi-seed runs


@dataclass
class CheckResult:
    index: int
    name: str
    passed: bool
    expected: str
    got: str
    tolerance: str
    runtime_s: float = 0.0


class RunCache:
    """Memoized preset runs shared by the criteria."""

    def __init__(self):
        self._runs = {}

    def preset(self, name):
        if name not in self._runs:
            self._runs[name] = runner_mod.run_scenario(config_mod.preset_config(name))
        return self._runs[name]


def _no_pulse_sequence():
    return PulseSequence(0.0, (), mode="regular")


def _decay_error(dt, t_target, gamma=1e-2):
    """Max-norm error of evolve against the closed-form decay at t_target."""
    model = build_two_level(TwoLevelParams(gamma=gamma, nbar_override=0.0))
    rho0 = superposition_state()
    n = int(round(t_target / dt))
    cfg = IntegrationConfig(dt=dt, t_start=0.0, t_end=n * dt, record_every=n)
    final = evolve(model, _no_pulse_sequence(), rho0, cfg)
    exact = analytic_decay(rho0, gamma, n * dt)
    return float(np.max(np.abs(final.matrix - exact.matrix)))


def criterion_01_bose_occupations(cache):
    """Quoted thermal occupations at (1 eV, 300 K) and (1.8 eV, 5800 K)."""
    got_a = bose_occupation(1.0, 300.0)
    got_b = bose_occupation(1.8, 5800.0)
    ok_a = 6.5e-31 / 1.1 <= got_a <= 6.5e-31 * 1.1
    ok_b = abs(got_b - 0.0317) <= 5e-4
    return CheckResult(
        1, "bose occupations",
        ok_a and ok_b,
        "n(1 eV,300 K)=6.5e-31; n(1.8 eV,5800 K)=0.0317",
        f"n(1 eV,300 K)={got_a:.4g}; n(1.8 eV,5800 K)={got_b:.4g}",
        "factor 1.1; +-5e-4",
    )


def criterion_02_analytic_decay(cache):
    """Integrator against the closed-form amplitude-damping solution."""
    errs = [_decay_error(0.02, t) for t in (50.0, 100.0, 200.0)]
    worst = max(errs)
    return CheckResult(
        2, "analytic decay oracle",
        worst <= 1e-6,
        "max-norm error <= 1e-6 at gamma*t in {0.5,1,2}",
        f"errors {errs[0]:.3g}, {errs[1]:.3g}, {errs[2]:.3g}",
        "1e-6",
    )


def criterion_03_rk4_order(cache):
    """Global-error slope of the integrator over dt in {0.04, 0.02, 0.01}."""
    dts = np.array([0.04, 0.02, 0.01])
    errs = np.array([_decay_error(dt, 100.0) for dt in dts])
    slope = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])
    return CheckResult(
        3, "rk4 convergence order",
        abs(slope - 4.0) <= 0.3,
        "log-log slope 4 +- 0.3",
        f"slope {slope:.3f} (errors {errs[0]:.2e}, {errs[1]:.2e}, {errs[2]:.2e})",
        "0.3",
    )


def criterion_04_first_law(cache):
    """Pointwise |dE/dt - J - P| on the fig2 and fig7 presets."""
    worst = max(
        cache.preset("fig2").diagnostics["max_first_law_residual"],
        cache.preset("fig7").diagnostics["max_first_law_residual"],
    )
    return CheckResult(
        4, "first-law closure",
        worst <= 1e-8,
        "max residual <= 1e-8",
        f"max residual {worst:.3g}",
        "1e-8",
    )


def criterion_05_second_law(cache):
    """Entropy production nonnegative over the single-bath fig2 run."""
    got = cache.preset("fig2").diagnostics["min_sigma"]
    return CheckResult(
        5, "second law (Spohn positivity)",
        got >= -1e-6,
        "min sigma >= -1e-6",
        f"min sigma {got:.3g}",
        "-1e-6",
    )


def criterion_06_heat_current_sign(cache):
    """Cold-bath heat current never flows into the system on fig2."""
    got = float(np.max(cache.preset("fig2").columns["J"]))
    return CheckResult(
        6, "heat current sign",
        got <= 1e-12,
        "max J <= 1e-12",
        f"max J {got:.3g}",
        "1e-12",
    )


def criterion_07_entropy_additivity(cache):
    """S = S_D + S_A at every fig7 record."""
    got = cache.preset("fig7").diagnostics["max_entropy_additivity_gap"]
    return CheckResult(
        7, "donor/acceptor entropy additivity",
        got <= 1e-9,
        "max |S - S_D - S_A| <= 1e-9",
        f"max gap {got:.3g}",
        "1e-9",
    )


def _last_quarter_eta(result):
    eta = result.columns["eta"]
    t = result.t
    sel = np.isfinite(eta) & (t > 0.75 * t[-1])
    vals = eta[sel]
    return float(vals.mean()), float(vals.max() - vals.min())


def criterion_08_continuum_efficiency(cache):
    """Continuum-mode efficiency plateau and its pulse-energy independence."""
    mean_b, p2p_b = _last_quarter_eta(cache.preset("fig8b"))
    mean_7, _ = _last_quarter_eta(cache.preset("fig7"))
    ok_value = abs(mean_b - 0.36) <= 0.05
    ok_flat = p2p_b < 0.05
    ok_same = abs(mean_7 - mean_b) <= 0.05
    return CheckResult(
        8, "continuum efficiency plateau",
        ok_value and ok_flat and ok_same,
        "fig8b eta = 0.36 +- 0.05, peak-to-peak < 0.05, fig7 within 0.05",
        f"fig8b eta {mean_b:.4f} (p2p {p2p_b:.4f}), fig7 eta {mean_7:.4f}",
        "0.05",
    )


def criterion_09_discrete_oscillation(cache):
    """Discrete-mode efficiency oscillates below 0.25 and above 0.55."""
    res = cache.preset("fig8a")
    eta = res.columns["eta"]
    sel = np.isfinite(eta)
    lo = float(np.min(eta[sel]))
    hi = float(np.max(eta[sel]))
    return CheckResult(
        9, "discrete-mode eta oscillation",
        lo < 0.25 and hi > 0.55,
        "excursions below 0.25 and above 0.55",
        f"eta range [{lo:.4f}, {hi:.4f}]",
        "band 0.2..0.6 +- 0.05",
    )


def criterion_10_work_ordering(cache, n_seeds=20):
    """Regular pulse train delivers more work than 30%-jittered trains."""
    w_reg = cache.preset("fig4").columns["W"][-1]
    base = config_mod.preset_config("fig5")
    wins = 0
    for seed in range(n_seeds):
        cfg = config_mod.apply_overrides(base, {"pulse.seed": seed})
        w_irr = runner_mod.run_scenario(cfg).columns["W"][-1]
        if w_reg > w_irr:
            wins += 1
    need = math.ceil(0.75 * n_seeds)
    return CheckResult(
        10, "work ordering regular > irregular",
        wins >= need,
        f">= {need}/{n_seeds} seeds",
        f"{wins}/{n_seeds} seeds (regular W {w_reg:.5f})",
        f"{need}/{n_seeds}",
    )


def criterion_11_invariant_suite(cache):
    """State invariants on every preset; pulse norm; analytic dg/dt."""
    problems = []
    for name in config_mod.PRESET_NAMES:
        d = cache.preset(name).diagnostics
        if d.get("max_trace_drift", 0.0) > 1e-9:
            problems.append(f"{name}: trace drift {d['max_trace_drift']:.2e}")
        if d["max_hermiticity_deviation"] > 1e-12:
            problems.append(f"{name}: hermiticity {d['max_hermiticity_deviation']:.2e}")
        if d["min_record_eigenvalue"] < -1e-6:
            problems.append(f"{name}: min eigenvalue {d['min_record_eigenvalue']:.2e}")

    # single-pulse norm by trapezoid, step 0.01/Omega over +-8/Omega
    bw = config_mod.DEFAULT_BANDWIDTH
    pulse = pulse_mod.GaussianPulse(0.0, bw)
    grid = np.arange(-8.0 / bw, 8.0 / bw + 0.005 / bw, 0.01 / bw)
    norm = float(np.trapezoid(np.abs(pulse_mod.pulse_value(pulse, grid)) ** 2, grid))
    if abs(norm - 1.0) > 1e-6:
        problems.append(f"pulse norm {norm!r}")

    # analytic derivative against central differences over one pulse
    seq = config_mod.build_pulse_sequence(config_mod.preset_config("fig2"))
    times = np.linspace(50 * TWO_PI - 3 / bw, 50 * TWO_PI + 3 / bw, 400)
    h = 1e-4
    g_max = max(abs(pulse_mod.sequence_value(seq, t)) for t in times)
    fd_err = max(
        abs(
            pulse_mod.sequence_derivative(seq, t)
            - (pulse_mod.sequence_value(seq, t + h) - pulse_mod.sequence_value(seq, t - h)) / (2 * h)
        )
        for t in times
    )
    if fd_err > 1e-5 * g_max:
        problems.append(f"dg/dt fd error {fd_err:.2e} vs scale {g_max:.2e}")

    return CheckResult(
        11, "invariant suite",
        not problems,
        "drift<=1e-9, herm<=1e-12, eig>=-1e-6, norm 1+-1e-6, dg/dt fd<=1e-5 rel",
        "; ".join(problems) if problems else "all invariants hold",
        "per-invariant",
    )


def criterion_12_open_circuit(cache):
    """Open circuit (load off, phonon occupation zeroed): no level-3 population."""
    cfg = config_mod.ScenarioConfig(
        system="photocell",
        photocell=config_mod.PhotocellParams(big_gamma=0.0, nbar_ph_override=0.0),
        pulse=config_mod.PulseConfig(mode="continuum", mean_photons=1.0,
                                     first_peak_periods=50.0, spacing_periods=2.0,
                                     duration_periods=120.0),
        integration=config_mod.IntegrationSection(t_end_periods=150.0),
    )
    res = runner_mod.run_scenario(cfg)
    max_i = float(np.max(np.abs(res.columns["I"])))
    max_p3 = float(np.max(np.abs(res.columns["rho33"])))
    p2_end = float(res.columns["rho22"][-1])
    return CheckResult(
        12, "open circuit",
        max_i == 0.0 and max_p3 <= 1e-12 and p2_end > 0.0,
        "I == 0, rho33 <= 1e-12, population piles at acceptor top",
        f"max I {max_i:.3g}, max rho33 {max_p3:.3g}, final rho22 {p2_end:.3g}",
        "1e-12",
    )


CRITERIA = (
    criterion_01_bose_occupations,
    criterion_02_analytic_decay,
    criterion_03_rk4_order,
    criterion_04_first_law,
    criterion_05_second_law,
    criterion_06_heat_current_sign,
    criterion_07_entropy_additivity,
    criterion_08_continuum_efficiency,
    criterion_09_discrete_oscillation,
    criterion_10_work_ordering,
    criterion_11_invariant_suite,
    criterion_12_open_circuit,
)


def run_all(skip_slow=False, cache=None):
    cache = cache or RunCache()
    results = []
    for fn in CRITERIA:
        index = int(fn.__name__.split("_")[1])
        if skip_slow and index in SLOW_CRITERIA:
            continue
        start = time.perf_counter()
        result = fn(cache)
        result.runtime_s = time.perf_counter() - start
        results.append(result)
    return results


def format_table(results):
    lines = []
    header = f"{'#':>2}  {'status':6}  {'criterion':34}  {'got':44}  {'expected'}"
    lines.append(header)
    lines.append("-" * len(header))
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{r.index:>2}  {status:6}  {r.name:34.34}  {r.got:44.44}  "
            f"{r.expected} [tol {r.tolerance}] ({r.runtime_s:.1f}s)"
        )
    return "\n".join(lines)
