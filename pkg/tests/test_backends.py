"""Parity between the compiled kernel and the pure-numpy fallback."""

import numpy as np
import pytest

from qpulse import _kernel_py
from qpulse import config as config_mod
from qpulse.dynamics import _kernel_args

_kernel = pytest.importorskip("qpulse._kernel")

from conftest import random_hermitian


def kernel_payload(preset):
    cfg = config_mod.preset_config(preset)
    seq = config_mod.build_pulse_sequence(cfg)
    model, rho0 = config_mod.build_system(cfg)
    args = _kernel_args(model, seq)
    flat = (args["h0"], args["ld"], args["sqrt_rate"], args["amp"],
            args["peaks"], args["bw"], args["carrier"], args["trunc"],
            args["ls"], args["k1s"], args["k2s"], args["kanti"])
    return np.array(rho0.matrix, dtype=complex), flat


@pytest.mark.parametrize("preset,t0", [("fig2", 300.0), ("fig7", 300.0)])
def test_evolve_steps_parity(preset, t0):
    rho_c, flat = kernel_payload(preset)
    rho_p = rho_c.copy()
    drift_c = _kernel.evolve_steps(rho_c, *flat, t0, 0.02, 3000, 1e-12)
    drift_p = _kernel_py.evolve_steps(rho_p, *flat, t0, 0.02, 3000, 1e-12)
    assert np.max(np.abs(rho_c - rho_p)) <= 1e-12
    assert drift_c == pytest.approx(drift_p, abs=1e-14)


@pytest.mark.parametrize("dim", [2, 3, 4, 6, 8])
def test_jacobi_parity(rng, dim):
    m = random_hermitian(rng, dim)
    wc, vc = _kernel.jacobi_eigh(m)
    wp, vp = _kernel_py.jacobi_eigh(m)
    np.testing.assert_allclose(wc, wp, atol=1e-12)
    for w, v in ((wc, vc), (wp, vp)):
        assert np.max(np.abs((v * w) @ v.conj().T - m)) <= 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10


def test_backend_name_reports():
    from qpulse import backend_name
    assert backend_name() in ("compiled", "python")
