import math

import numpy as np
import pytest

from qpulse.core import DensityOperator, DissipationChannel, SystemModel
from qpulse.dynamics import IntegrationConfig, evolve, step_rk4
from qpulse.errors import ConfigError, IntegrationUnstableError
from qpulse.pulses import PulseSequence, build_regular
from qpulse.twolevel import (
    TwoLevelParams,
    analytic_decay,
    build_two_level,
    excited_state,
    sigma_minus,
    sigma_z,
    superposition_state,
)

NO_PULSES = PulseSequence(0.0, ())


def decay_model(gamma=1e-2):
    return build_two_level(TwoLevelParams(gamma=gamma, nbar_override=0.0))


def grid(dt, t_end, record_every=10):
    return IntegrationConfig(dt=dt, t_start=0.0, t_end=t_end,
                             record_every=record_every)


# ---------------------------------------------------------------- validation

def test_config_validation():
    with pytest.raises(ConfigError):
        IntegrationConfig(dt=0.0, t_start=0.0, t_end=1.0)
    with pytest.raises(ConfigError):
        IntegrationConfig(dt=0.2, t_start=0.0, t_end=1.0)   # carrier unresolved
    with pytest.raises(ConfigError):
        IntegrationConfig(dt=0.02, t_start=0.0, t_end=0.03)  # fractional steps
    with pytest.raises(ConfigError):
        IntegrationConfig(dt=0.02, t_start=0.0, t_end=0.06, record_every=4)
    cfg = grid(0.02, 1.0, record_every=10)
    assert cfg.n_steps == 50 and cfg.n_records == 5


# -------------------------------------------------------------------- evolve

def test_stationary_eigenstate_is_preserved():
    model = SystemModel(h0=-0.5 * sigma_z(), drive_lower=sigma_minus(),
                        drive_rate=0.0, channels=())
    out = evolve(model, NO_PULSES, excited_state(), grid(0.02, 50.0))
    np.testing.assert_allclose(out.matrix, excited_state().matrix, atol=1e-10)


def test_population_decay_matches_exponential():
    gamma = 1e-2
    observed = []
    def obs(t, rho, g, dg):
        observed.append((t, rho[1, 1].real))
    evolve(decay_model(gamma), NO_PULSES, excited_state(),
           grid(0.02, 500.0), observer=obs)
    for t, p11 in observed:
        assert abs(p11 - math.exp(-gamma * t)) <= 1e-6


def test_coherence_decay_matches_half_rate():
    gamma = 1e-2
    observed = []
    def obs(t, rho, g, dg):
        observed.append((t, abs(rho[0, 1])))
    evolve(decay_model(gamma), NO_PULSES, superposition_state(),
           grid(0.02, 500.0), observer=obs)
    for t, c in observed:
        assert abs(c - 0.5 * math.exp(-gamma * t / 2.0)) <= 1e-6


def test_evolve_matches_analytic_decay_full_matrix():
    gamma = 1e-2
    out = evolve(decay_model(gamma), NO_PULSES, superposition_state(),
                 grid(0.02, 100.0))
    want = analytic_decay(superposition_state(), gamma, 100.0)
    assert np.max(np.abs(out.matrix - want.matrix)) <= 1e-6


def test_observer_times_monotone_and_final_exact():
    times = []
    cfg = grid(0.02, 10.0, record_every=50)
    evolve(decay_model(), NO_PULSES, excited_state(), cfg,
           observer=lambda t, r, g, dg: times.append(t))
    assert times[0] == 0.0
    assert times[-1] == cfg.t_end
    assert all(b > a for a, b in zip(times, times[1:]))
    assert len(times) == cfg.n_records + 1


def test_trace_drift_is_tiny():
    stats = {}
    evolve(decay_model(), NO_PULSES, superposition_state(),
           grid(0.02, 200.0), stats=stats)
    assert stats["max_trace_drift"] <= 1e-9


def test_unstable_run_raises():
    # an absurd rate makes RK4 blow up at the given step size
    model = SystemModel(
        h0=-0.5 * sigma_z(), drive_lower=sigma_minus(), drive_rate=0.0,
        channels=(DissipationChannel(sigma_minus(), 1e4, 0.0),),
    )
    with pytest.raises(IntegrationUnstableError):
        evolve(model, NO_PULSES, superposition_state(), grid(0.05, 5.0))


def test_initial_dimension_mismatch():
    with pytest.raises(ConfigError):
        evolve(decay_model(), NO_PULSES,
               np.eye(3, dtype=complex) / 3.0, grid(0.02, 1.0))


# ------------------------------------------------------------------ step_rk4

def driven_model_and_pulses():
    model = build_two_level(TwoLevelParams(gamma=1e-2, nbar_override=0.0))
    seq = build_regular(1, 10.0, 5.0, 0.5, 1.0)
    return model, seq


def run_steps(model, seq, rho0, dt, n):
    rho = rho0.copy()
    for i in range(n):
        rho = step_rk4(model, seq, rho, i * dt, dt)
    return rho


def test_richardson_fourth_order():
    model, seq = driven_model_and_pulses()
    rho0 = superposition_state().matrix.copy()
    dt = 0.02
    y1 = run_steps(model, seq, rho0, dt, 1000)
    y2 = run_steps(model, seq, rho0, dt / 2, 2000)
    y4 = run_steps(model, seq, rho0, dt / 4, 4000)
    d1 = np.max(np.abs(y1 - y2))
    d2 = np.max(np.abs(y2 - y4))
    assert d2 <= d1 / 15.0


def test_single_step_euler_limit():
    from qpulse.core import liouvillian_apply
    from qpulse.pulses import sequence_value
    model, seq = driven_model_and_pulses()
    rho = superposition_state().matrix.copy()
    t = 10.0
    errs = []
    for dt in (2e-3, 1e-3):
        euler = rho + dt * liouvillian_apply(model, sequence_value(seq, t), rho)
        errs.append(np.max(np.abs(step_rk4(model, seq, rho, t, dt) - euler)))
    ratio = errs[0] / errs[1]
    assert 3.5 <= ratio <= 4.5        # leftover error is O(dt^2)


def test_zero_generator_is_identity_step():
    model = SystemModel(h0=np.zeros((2, 2), dtype=complex),
                        drive_lower=np.zeros((2, 2), dtype=complex),
                        drive_rate=0.0, channels=())
    rho = superposition_state().matrix.copy()
    out = step_rk4(model, NO_PULSES, rho, 0.0, 0.02)
    np.testing.assert_array_equal(out, rho)


def test_evolve_agrees_with_repeated_step_rk4():
    model, seq = driven_model_and_pulses()
    rho0 = superposition_state()
    cfg = grid(0.02, 20.0, record_every=1000)
    out = evolve(model, seq, rho0, cfg)
    manual = run_steps(model, seq, rho0.matrix.copy(), 0.02, 1000)
    manual = (manual + manual.conj().T) / 2
    assert np.max(np.abs(out.matrix - manual)) <= 1e-12
