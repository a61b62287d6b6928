"""Gaussian photon-pulse trains and the complex drive amplitude g(t).

The drive is g(t) = alpha * sum_i xi(t; t_i), where xi is a normalized
Gaussian wave packet with bandwidth parameter Omega riding on the resonant
carrier exp(-i*omega0*t), and |alpha|^2 is the mean photon number per pulse.
The exact time derivative dg/dt is evaluated analytically because the power
observable needs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# envelope is below 1e-10 beyond this many 1/Omega from the peak; sequence
# evaluation may skip pulses outside the window
TRUNCATION_RADIUS = 10.0

_MODES = ("regular", "irregular", "continuum")


@dataclass(frozen=True)
class GaussianPulse:
    """A single Gaussian wave packet: peak time, bandwidth Omega, carrier."""

    peak_time: float
    bandwidth: float
    carrier: float = 1.0

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ConfigError("pulse bandwidth must be positive")


def pulse_envelope(pulse, t):
    """Real envelope (Omega^2/2pi)^(1/4) exp(-Omega^2 (t-t_i)^2 / 4)."""
    om = pulse.bandwidth
    u = t - pulse.peak_time
    return (om * om / (2.0 * math.pi)) ** 0.25 * np.exp(-om * om * u * u / 4.0)


def pulse_value(pulse, t):
    """Complex wave packet value xi(t; t_i) including the carrier phase."""
    return pulse_envelope(pulse, t) * np.exp(-1j * pulse.carrier * t)


def pulse_derivative(pulse, t):
    """Exact d(xi)/dt = [-Omega^2 (t-t_i)/2 - i*omega0] * xi."""
    om = pulse.bandwidth
    u = t - pulse.peak_time
    return (-om * om * u / 2.0 - 1j * pulse.carrier) * pulse_value(pulse, t)


@dataclass(frozen=True)
class PulseSequence:
    """Ordered train of Gaussian pulses sharing one coherent amplitude.

    mode is descriptive metadata only; the evaluation is identical for all
    modes.
    """

    amplitude: complex
    pulses: tuple
    mode: str = "regular"

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ConfigError(f"unknown pulse mode {self.mode!r}")
        object.__setattr__(self, "pulses", tuple(self.pulses))
        peaks = np.array([p.peak_time for p in self.pulses], dtype=float)
        if peaks.size > 1 and not np.all(np.diff(peaks) > 0):
            raise ConfigError("pulse peak times must be strictly increasing")
        object.__setattr__(self, "_peaks", peaks)

    @property
    def peak_times(self):
        return self._peaks

    @property
    def mean_photon_number(self):
        return abs(self.amplitude) ** 2

    def uniform_bandwidth_carrier(self):
        """(bandwidth, carrier) shared by every pulse; error if mixed."""
        if not self.pulses:
            return 1.0, 1.0
        bw = self.pulses[0].bandwidth
        car = self.pulses[0].carrier
        for p in self.pulses:
            if p.bandwidth != bw or p.carrier != car:
                raise ConfigError("sequence mixes bandwidths or carriers")
        return bw, car


def _active_slice(seq, t):
    """Index range of pulses whose truncation window contains t."""
    if not seq.pulses:
        return 0, 0
    radius = max(TRUNCATION_RADIUS / p.bandwidth for p in seq.pulses)
    peaks = seq.peak_times
    lo = int(np.searchsorted(peaks, t - radius, side="left"))
    hi = int(np.searchsorted(peaks, t + radius, side="right"))
    return lo, hi


def sequence_value(seq, t):
    """g(t) = alpha * sum_i xi(t; t_i), skipping far-away pulses."""
    lo, hi = _active_slice(seq, t)
    total = 0.0 + 0.0j
    for p in seq.pulses[lo:hi]:
        if abs(t - p.peak_time) <= TRUNCATION_RADIUS / p.bandwidth:
            total += pulse_value(p, t)
    return seq.amplitude * total


def sequence_derivative(seq, t):
    """dg/dt evaluated analytically (no finite differencing)."""
    lo, hi = _active_slice(seq, t)
    total = 0.0 + 0.0j
    for p in seq.pulses[lo:hi]:
        if abs(t - p.peak_time) <= TRUNCATION_RADIUS / p.bandwidth:
            total += pulse_derivative(p, t)
    return seq.amplitude * total


def build_regular(n_pulses, first_peak, spacing, bandwidth, amplitude,
                  carrier=1.0):
    """Evenly spaced train: peaks at first_peak + k*spacing."""
    if n_pulses < 1:
        raise ConfigError("n_pulses must be at least 1")
    if not spacing > 0:
        raise ConfigError("pulse spacing must be positive")
    pulses = tuple(
        GaussianPulse(first_peak + k * spacing, bandwidth, carrier)
        for k in range(n_pulses)
    )
    return PulseSequence(complex(amplitude), pulses, mode="regular")


def build_irregular(n_pulses, first_peak, nominal_spacing, jitter_fraction,
                    seed, bandwidth, amplitude, carrier=1.0):
    """Regular train with each peak displaced by a seeded uniform offset.

    Offsets are drawn in +-jitter_fraction*nominal_spacing. jitter_fraction
    must stay below 0.5 so ordering is preserved; any residual ordering
    violation is repaired by deterministic clamping.
    """
    if n_pulses < 1:
        raise ConfigError("n_pulses must be at least 1")
    if not 0.0 <= jitter_fraction < 0.5:
        raise ConfigError("jitter_fraction must lie in [0, 0.5)")
    if not nominal_spacing > 0:
        raise ConfigError("nominal_spacing must be positive")
    rng = np.random.default_rng(seed)
    width = jitter_fraction * nominal_spacing
    offsets = rng.uniform(-width, width, size=n_pulses)
    peaks = first_peak + nominal_spacing * np.arange(n_pulses) + offsets
    min_gap = 1e-9 * nominal_spacing
    for k in range(1, n_pulses):
        if peaks[k] <= peaks[k - 1]:
            peaks[k] = peaks[k - 1] + min_gap
    pulses = tuple(GaussianPulse(float(tp), bandwidth, carrier) for tp in peaks)
    return PulseSequence(complex(amplitude), pulses, mode="irregular")


def build_continuum(first_peak, duration, spacing, bandwidth, amplitude,
                    carrier=1.0):
    """Overlapping pulses tiling [first_peak, first_peak + duration]."""
    if not spacing > 0:
        raise ConfigError("pulse spacing must be positive")
    if spacing > 2.0 / bandwidth:
        raise ConfigError("continuum mode needs spacing <= 2/bandwidth")
    if duration < 0:
        raise ConfigError("duration must be nonnegative")
    n_pulses = int(math.floor(duration / spacing + 1e-12)) + 1
    pulses = tuple(
        GaussianPulse(first_peak + k * spacing, bandwidth, carrier)
        for k in range(n_pulses)
    )
    return PulseSequence(complex(amplitude), pulses, mode="continuum")
