import numpy as np
import pytest

from sstkit import ComponentSpec, ConstantAmplitude, LinearPhase, synthesize


def rel_l2(actual, expected):
    expected = np.asarray(expected)
    return float(np.linalg.norm(np.asarray(actual) - expected) / np.linalg.norm(expected))


def tone_signal(freq=5.0, rate=128.0, duration=8.0, amplitude=1.0):
    spec = ComponentSpec(ConstantAmplitude(amplitude), LinearPhase(freq))
    return synthesize([spec], rate, duration)


def random_band_modes(rng, duration, f_lo=4.0, f_hi=24.0, n_modes=12):
    """Random trigonometric-polynomial modes with on-grid frequencies."""
    freqs = rng.choice(np.arange(int(f_lo * duration), int(f_hi * duration)), size=n_modes,
                       replace=False) / duration
    coeffs = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    return freqs, coeffs


def signal_from_modes(freqs, coeffs, rate, duration):
    """Sample the trigonometric polynomial exactly at the requested rate."""
    n = int(round(rate * duration))
    t = np.arange(n) / rate
    samples = np.zeros(n, dtype=complex)
    for f, c in zip(freqs, coeffs):
        samples += c * np.exp(2j * np.pi * f * t)
    from sstkit import SampledSignal

    return SampledSignal(samples, rate)


def random_band_signal(rng, rate, duration, f_lo=4.0, f_hi=24.0, n_modes=12):
    """Trigonometric polynomial with on-grid frequencies: exact at any rate."""
    freqs, coeffs = random_band_modes(rng, duration, f_lo, f_hi, n_modes)
    return signal_from_modes(freqs, coeffs, rate, duration)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
