"""Benchmark the compiled stepping kernel against the pure-numpy fallback.

Usage: python benchmarks/bench_backends.py [--steps N]

Workloads: the two bundled system sizes (driven two-level with one channel,
driven four-level photocell with four channels) plus the Jacobi eigensolver
on record-sized matrices.
"""

import argparse
import importlib
import time

import numpy as np

from qpulse import config as config_mod
from qpulse.dynamics import _kernel_args


def load_backends():
    backends = {}
    try:
        backends["compiled"] = importlib.import_module("qpulse._kernel")
    except ImportError:
        pass
    backends["python"] = importlib.import_module("qpulse._kernel_py")
    return backends


def payload(preset):
    cfg = config_mod.preset_config(preset)
    seq = config_mod.build_pulse_sequence(cfg)
    model, rho0 = config_mod.build_system(cfg)
    a = _kernel_args(model, seq)
    flat = (a["h0"], a["ld"], a["sqrt_rate"], a["amp"], a["peaks"], a["bw"],
            a["carrier"], a["trunc"], a["ls"], a["k1s"], a["k2s"], a["kanti"])
    return np.array(rho0.matrix, dtype=complex), flat


def time_stepping(kernel, rho0, flat, steps):
    rho = rho0.copy()
    start = time.perf_counter()
    kernel.evolve_steps(rho, *flat, 300.0, 0.02, steps, 1e-12)
    return steps / (time.perf_counter() - start)


def time_jacobi(kernel, dim, reps):
    rng = np.random.default_rng(7)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    a = (a + a.conj().T) / 2
    start = time.perf_counter()
    for _ in range(reps):
        kernel.jacobi_eigh(a)
    return reps / (time.perf_counter() - start)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=20000,
                        help="RK4 steps per stepping workload")
    args = parser.parse_args()

    backends = load_backends()
    if "compiled" not in backends:
        print("note: compiled extension not importable; python backend only")

    rows = []
    for preset, label in (("fig2", "rk4 2x2 (1 channel)"),
                          ("fig7", "rk4 4x4 (4 channels)")):
        rho0, flat = payload(preset)
        rates = {}
        for name, kernel in backends.items():
            steps = args.steps if name == "compiled" else max(args.steps // 20, 500)
            rates[name] = time_stepping(kernel, rho0, flat, steps)
        rows.append((label, rates))
    jrates = {name: time_jacobi(kernel, 4, 2000 if name == "compiled" else 200)
              for name, kernel in backends.items()}
    rows.append(("jacobi eigen 4x4", jrates))

    unit = {"rk4 2x2 (1 channel)": "steps/s", "rk4 4x4 (4 channels)": "steps/s",
            "jacobi eigen 4x4": "calls/s"}
    print(f"{'workload':24} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, rates in rows:
        py = rates.get("python", float('nan'))
        cc = rates.get("compiled")
        speed = f"{cc / py:8.0f}x" if cc else "      n/a"
        cc_text = f"{cc:12.3g}" if cc else "         n/a"
        print(f"{label:24} {py:12.3g} {cc_text} {speed}  [{unit[label]}]")


if __name__ == "__main__":
    main()
