import math

import numpy as np
import pytest

from qpulse.config import IntegrationSection, PulseConfig, ScenarioConfig
from qpulse.constants import TWO_PI
from qpulse.dynamics import IntegrationConfig, evolve
from qpulse.pulses import PulseSequence
from qpulse.runner import run_scenario
from qpulse.thermo import energy
from qpulse.twolevel import (
    TwoLevelParams,
    analytic_decay,
    bose_occupation,
    build_two_level,
    excited_state,
    spontaneous_emission_rate,
    superposition_state,
)

KB = 8.617333e-5
NO_PULSES = PulseSequence(0.0, ())


# ----------------------------------------------------------- bose occupation

def bose_reference(e_ev, t_k):
    # independent scalar evaluation of the Bose factor
    return 1.0 / (math.exp(e_ev / (KB * t_k)) - 1.0)


@pytest.mark.parametrize("e_ev,t_k", [(1.0, 300.0), (1.8, 300.0),
                                      (1.8, 5800.0), (0.1, 300.0)])
def test_bose_matches_scalar_reference(e_ev, t_k):
    assert bose_occupation(e_ev, t_k) == pytest.approx(
        bose_reference(e_ev, t_k), rel=1e-12
    )


def test_bose_reference_points():
    # exact Bose values at the physically relevant corners; the photocell
    # phonon occupation rounds to 0.0214
    assert bose_occupation(1.0, 300.0) == pytest.approx(1.5876e-17, rel=1e-4)
    assert bose_occupation(1.8, 300.0) == pytest.approx(5.772e-31, rel=1e-3)
    assert bose_occupation(1.8, 5800.0) == pytest.approx(0.028051, rel=1e-4)
    assert bose_occupation(0.1, 300.0) == pytest.approx(0.0214, abs=1e-4)


def test_bose_classical_limit():
    e_ev, t_k = 1e-4, 300.0
    classical = KB * t_k / e_ev
    assert bose_occupation(e_ev, t_k) == pytest.approx(classical, rel=1e-2)


def test_bose_underflow_returns_zero():
    assert bose_occupation(100.0, 1.0) == 0.0


def test_bose_rejects_nonpositive_inputs():
    with pytest.raises(ValueError):
        bose_occupation(0.0, 300.0)
    with pytest.raises(ValueError):
        bose_occupation(1.0, 0.0)


# ------------------------------------------------------ spontaneous emission

def test_emission_rate_zero_dipole():
    assert spontaneous_emission_rate(0.0, 1.5e15) == 0.0


def test_emission_rate_cubic_frequency_scaling():
    d = 3.33564e-30
    w = 1.5e15
    ratio = spontaneous_emission_rate(d, 2 * w) / spontaneous_emission_rate(d, w)
    assert ratio == pytest.approx(8.0, rel=1e-12)


def test_emission_rate_si_value():
    # independent constants-table evaluation for 1 debye at hbar*omega = 1 eV
    hbar, c, eps0, ev = 1.054571817e-34, 2.99792458e8, 8.8541878128e-12, 1.602176634e-19
    debye = 3.33564e-30
    omega = ev / hbar
    want = omega**3 * debye**2 / (3 * math.pi * eps0 * hbar * c**3)
    got = spontaneous_emission_rate(debye, omega)
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(1.6455e5, rel=1e-3)


def test_emission_rate_nanosecond_regime_for_quantum_dot_dipole():
    # tens-of-debye dipoles (quantum-dot scale) put the lifetime in ns
    omega = 1.602176634e-19 / 1.054571817e-34
    rate = spontaneous_emission_rate(20 * 3.33564e-30, omega)
    lifetime = 1.0 / rate
    assert 1e-9 < lifetime < 1e-7


# ------------------------------------------------------------ model assembly

def test_build_two_level_defaults():
    model = build_two_level(TwoLevelParams())
    assert model.dim == 2
    assert len(model.channels) == 1
    ch = model.channels[0]
    # exact Bose occupation at 1 eV / 300 K; utterly negligible but nonzero
    assert ch.occupation == pytest.approx(1.5876e-17, rel=1e-4)
    assert ch.occupation < 1e-12
    assert model.drive_rate == pytest.approx(1e-2)


def test_nbar_override_passthrough():
    model = build_two_level(TwoLevelParams(nbar_override=0.0))
    assert model.channels[0].occupation == 0.0


def test_closed_system_conserves_energy():
    model = build_two_level(TwoLevelParams(gamma=0.0))
    cfg = IntegrationConfig(dt=0.02, t_start=0.0, t_end=100.0, record_every=100)
    energies = []
    evolve(model, NO_PULSES, superposition_state(), cfg,
           observer=lambda t, rho, g, dg: energies.append(energy(rho, model, g)))
    assert max(energies) - min(energies) <= 1e-12


def test_params_validation():
    with pytest.raises(ValueError):
        TwoLevelParams(gap_ev=0.0)
    with pytest.raises(ValueError):
        TwoLevelParams(gamma=-1.0)
    with pytest.raises(ValueError):
        TwoLevelParams(tc_kelvin=0.0)


# ------------------------------------------------------------ analytic decay

def test_analytic_decay_at_zero_time():
    rho0 = superposition_state()
    out = analytic_decay(rho0, 1e-2, 0.0)
    np.testing.assert_allclose(out.matrix, rho0.matrix, atol=1e-15)


def test_analytic_decay_long_time_limit():
    out = analytic_decay(superposition_state(), 1e-2, 1e5)
    np.testing.assert_allclose(out.matrix, np.diag([1.0, 0.0]), atol=1e-12)


@pytest.mark.parametrize("gamma_t", [0.5, 1.0, 2.0])
def test_analytic_decay_matches_evolution(gamma_t):
    gamma = 1e-2
    t_end = gamma_t / gamma
    model = build_two_level(TwoLevelParams(gamma=gamma, nbar_override=0.0))
    n = int(round(t_end / 0.02))
    cfg = IntegrationConfig(dt=0.02, t_start=0.0, t_end=n * 0.02, record_every=n)
    got = evolve(model, NO_PULSES, superposition_state(), cfg)
    want = analytic_decay(superposition_state(), gamma, n * 0.02)
    assert np.max(np.abs(got.matrix - want.matrix)) <= 1e-6


# ------------------------------------------------- scenario-shape properties

def lead_in_scenario(first_peak_periods, t_end_periods, mean_photons=1.0,
                     count=1, spacing=140.0):
    return ScenarioConfig(
        system="two-level",
        pulse=PulseConfig(count=count, first_peak_periods=first_peak_periods,
                          spacing_periods=spacing, mean_photons=mean_photons),
        integration=IntegrationSection(t_end_periods=t_end_periods),
    )


def test_equilibration_before_a_late_first_pulse():
    # decaying from the superposition at gamma = 1e-2, the excited population
    # needs ~99 periods to fall below 1e-3; with the first pulse at period 125
    # the state is ground to that accuracy before the pulse support begins
    res = run_scenario(lead_in_scenario(125.0, 150.0))
    t_per = res.t / TWO_PI
    k_before = int(np.searchsorted(t_per, 105.0))
    p11 = res.columns["rho11_re"]
    assert p11[k_before] < 1e-3
    assert np.all(np.diff(p11[: k_before + 1]) <= 1e-12)


def test_each_pulse_excites_then_relaxes():
    # two well-separated pulses: a population maximum within 3/Omega after
    # each peak, relaxation below 1e-3 before the next pulse's support
    bw = 1.0 / (4.0 * math.pi)
    res = run_scenario(lead_in_scenario(125.0, 380.0, count=2, spacing=140.0))
    t = res.t
    p11 = res.columns["rho11_re"]
    for peak_per in (125.0, 265.0):
        peak = peak_per * TWO_PI
        win = (t >= peak - 5.0) & (t <= peak + 4.0 / bw)
        k_star = np.flatnonzero(win)[np.argmax(p11[win])]
        assert 0.0 <= t[k_star] - peak <= 3.0 / bw
        assert p11[k_star] > 0.05
    k_quiet = int(np.searchsorted(t, (265.0 - 22.0) * TWO_PI))
    assert p11[k_quiet] < 1e-3


def count_sign_changes(x, threshold):
    signs = np.sign(np.where(np.abs(x) < threshold, 0.0, x))
    signs = signs[signs != 0]
    return int(np.sum(signs[1:] != signs[:-1]))


def test_stronger_pulse_oscillates_more():
    # <n> = 10 drives the transition through more than a half Rabi flop, so
    # the drive power changes sign mid-pulse; <n> = 1 never does
    changes = {}
    for n_photons in (1.0, 10.0):
        cfg = ScenarioConfig(
            system="two-level",
            initial_state="ground",
            pulse=PulseConfig(count=1, first_peak_periods=50.0,
                              mean_photons=n_photons),
            integration=IntegrationSection(t_end_periods=80.0),
        )
        res = run_scenario(cfg)
        p = res.columns["P"]
        changes[n_photons] = count_sign_changes(p, 1e-9 * np.max(np.abs(p)))
    assert changes[10.0] > changes[1.0]
