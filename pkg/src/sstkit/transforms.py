"""Wavelet and windowed transforms of sampled signals, with exact derivatives.

Both transforms are evaluated in the frequency domain on a reflect-padded,
power-of-two extension of the input: each output row is the inverse FFT of
the signal spectrum times a real filter (the dilated wavelet response, or
the window transform shifted to the analysis frequency). Time derivatives
multiply the same filters by ``2 pi i xi`` (differentiation theorem), never
by finite-differencing the planes. For the windowed transform this is
identical to subtracting a derivative-window pass from the modulation term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelets import WaveletSpec, frequency_response, support_radius
from .windows import WindowSpec, window_transform

# envelope thresholds: the looser one bounds usable scale against the padded
# length, the tighter one defines the boundary-contamination (COI) radius
CORE_ENVELOPE_TOL = 5e-2
COI_ENVELOPE_TOL = 1e-3


def _freeze(arr):
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeScalePlane:
    """Complex matrix indexed by (scale, time) with a boundary-effect mask."""

    values: np.ndarray  # (n_scales, n_times)
    scales: np.ndarray  # strictly increasing, constant ratio
    times: np.ndarray
    coi_mask: np.ndarray  # True where the analyzing kernel overlaps an endpoint

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        scales = np.asarray(self.scales, dtype=float)
        times = np.asarray(self.times, dtype=float)
        coi = np.asarray(self.coi_mask, dtype=bool)
        if values.shape != (len(scales), len(times)) or coi.shape != values.shape:
            raise ValueError("plane arrays have inconsistent shapes")
        if len(scales) < 2 or np.any(np.diff(scales) <= 0):
            raise ValueError("scales must be strictly increasing")
        ratios = scales[1:] / scales[:-1]
        if np.max(ratios) - np.min(ratios) > 1e-9 * np.max(ratios):
            raise ValueError("scales must be geometrically spaced")
        for name, arr in (("values", values), ("scales", scales), ("times", times), ("coi_mask", coi)):
            object.__setattr__(self, name, _freeze(arr.copy()))

    @property
    def log_ratio(self) -> float:
        return float(np.log(self.scales[1] / self.scales[0]))


@dataclass(frozen=True, eq=False)
class TimeFrequencyPlane:
    """Complex matrix indexed by (frequency, time) with a boundary-effect mask."""

    values: np.ndarray  # (n_freqs, n_times)
    freqs: np.ndarray  # strictly increasing, positive
    times: np.ndarray
    coi_mask: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        freqs = np.asarray(self.freqs, dtype=float)
        times = np.asarray(self.times, dtype=float)
        coi = np.asarray(self.coi_mask, dtype=bool)
        if values.shape != (len(freqs), len(times)) or coi.shape != values.shape:
            raise ValueError("plane arrays have inconsistent shapes")
        if len(freqs) < 2 or np.any(np.diff(freqs) <= 0) or freqs[0] <= 0:
            raise ValueError("freqs must be positive and strictly increasing")
        for name, arr in (("values", values), ("freqs", freqs), ("times", times), ("coi_mask", coi)):
            object.__setattr__(self, name, _freeze(arr.copy()))


def reflect_pad_pow2(samples: np.ndarray) -> tuple[np.ndarray, int]:
    """Reflect-pad to the next power of two; no-op for power-of-two lengths.

    Returns the padded array and the offset of the original first sample.
    """
    samples = np.asarray(samples, dtype=complex)
    n = len(samples)
    p = 1 << (n - 1).bit_length()
    if p == n:
        return samples, 0
    left = (p - n) // 2
    right = p - n - left
    out = np.empty(p, dtype=complex)
    out[left:left + n] = samples
    if left:
        out[:left] = samples[1:left + 1][::-1]
    if right:
        out[left + n:] = samples[-2:-right - 2:-1]
    return out, left


def _spectral_rows(signal, filters: np.ndarray, derivative: bool) -> np.ndarray:
    """Inverse-FFT each filtered spectrum row back to the original time span."""
    padded, offset = reflect_pad_pow2(signal.samples)
    p = len(padded)
    xi = np.fft.fftfreq(p, d=1.0 / signal.sample_rate)
    spectrum = np.fft.fft(padded)
    if derivative:
        spectrum = spectrum * (2j * np.pi * xi)
    rows = np.fft.ifft(spectrum[None, :] * filters, axis=1)
    return rows[:, offset:offset + len(signal.samples)]


def _edge_distance(times: np.ndarray) -> np.ndarray:
    return np.minimum(times - times[0], times[-1] - times)


def default_scale_range(signal, wavelet: WaveletSpec) -> tuple[float, float]:
    """Scale limits: top of the response at Nyquist, core support within padding.

    The default largest scale is half the hard limit (at which the dilated
    core would span the whole padded record), trading a little low-frequency
    reach for columns that the boundaries cannot touch.
    """
    nyquist = signal.sample_rate / 2.0
    a_min = (1.0 + wavelet.delta) / nyquist
    p = 1 << (len(signal.samples) - 1).bit_length()
    padded_span = p / signal.sample_rate
    a_max = padded_span / (4.0 * support_radius(wavelet, CORE_ENVELOPE_TOL))
    return a_min, a_max


def _scale_grid(a_min: float, a_max: float, n_voices: int) -> np.ndarray:
    count = int(np.ceil(n_voices * np.log2(a_max / a_min)))
    count = max(count, 2)
    return a_min * (a_max / a_min) ** (np.arange(count) / (count - 1))


def _cwt_impl(signal, wavelet, n_voices, scale_range, derivative) -> TimeScalePlane:
    if n_voices < 4:
        raise ValueError(f"n_voices must be at least 4, got {n_voices}")
    if len(signal.samples) < 8:
        raise ValueError("signal must have at least 8 samples")
    if scale_range is None:
        a_min, a_max = default_scale_range(signal, wavelet)
    else:
        a_min, a_max = float(scale_range[0]), float(scale_range[1])
    if not 0.0 < a_min < a_max:
        raise ValueError(f"invalid scale range [{a_min}, {a_max}]")
    p = 1 << (len(signal.samples) - 1).bit_length()
    padded_span = p / signal.sample_rate
    core = support_radius(wavelet, CORE_ENVELOPE_TOL)
    limit = padded_span / (2.0 * core)
    if a_max > limit:
        raise ValueError(
            f"scale {a_max} dilates the wavelet beyond the padded signal span; "
            f"largest usable scale is {limit:.6g}"
        )
    scales = _scale_grid(a_min, a_max, n_voices)
    filters = np.sqrt(scales)[:, None] * frequency_response(
        wavelet, scales[:, None] * np.fft.fftfreq(p, d=1.0 / signal.sample_rate)[None, :]
    )
    values = _spectral_rows(signal, filters, derivative)
    times = signal.times
    coi_radius = support_radius(wavelet, COI_ENVELOPE_TOL) * scales
    coi = _edge_distance(times)[None, :] < coi_radius[:, None]
    return TimeScalePlane(values, scales, times, coi)


def cwt(signal, wavelet: WaveletSpec = WaveletSpec(), n_voices: int = 32,
        scale_range: tuple[float, float] | None = None) -> TimeScalePlane:
    """Wavelet transform on a geometric scale grid (``n_voices`` per octave).

    Row j holds ``a_j^{-1/2} integral f(u) conj(psi((u - t)/a_j)) du``
    evaluated per time column; for a pure tone at frequency ``xi`` the row
    magnitudes are ``sqrt(a) response(a xi)``, peaking at ``a = 1/xi``.
    """
    return _cwt_impl(signal, wavelet, n_voices, scale_range, derivative=False)


def cwt_time_derivative(signal, wavelet: WaveletSpec = WaveletSpec(), n_voices: int = 32,
                        scale_range: tuple[float, float] | None = None) -> TimeScalePlane:
    """Exact time derivative of :func:`cwt` on the same grid."""
    return _cwt_impl(signal, wavelet, n_voices, scale_range, derivative=True)


def default_freq_range(signal) -> tuple[float, float]:
    """A few cycles over the record up to a margin below Nyquist."""
    duration = len(signal.samples) / signal.sample_rate
    return 4.0 / duration, 0.45 * signal.sample_rate


def _mstft_impl(signal, window, freq_range, n_freqs, derivative) -> TimeFrequencyPlane:
    n = len(signal.samples)
    if n < 8:
        raise ValueError("signal must have at least 8 samples")
    duration = n / signal.sample_rate
    if window.half_width > duration / 2.0:
        raise ValueError(
            f"window half_width {window.half_width} exceeds half the signal duration "
            f"{duration / 2.0}"
        )
    if freq_range is None:
        z_min, z_max = default_freq_range(signal)
    else:
        z_min, z_max = float(freq_range[0]), float(freq_range[1])
    if not 0.0 < z_min < z_max:
        raise ValueError(f"invalid frequency range [{z_min}, {z_max}]: lower end must be positive")
    if n_freqs is None:
        n_freqs = max(8, n // 2)
    if n_freqs < 8:
        raise ValueError(f"n_freqs must be at least 8, got {n_freqs}")
    freqs = np.linspace(z_min, z_max, int(n_freqs))
    p = 1 << (n - 1).bit_length()
    xi = np.fft.fftfreq(p, d=1.0 / signal.sample_rate)
    filters = window_transform(window, freqs[:, None] - xi[None, :])
    values = _spectral_rows(signal, filters, derivative)
    times = signal.times
    coi = (_edge_distance(times) < window.half_width)[None, :].repeat(len(freqs), axis=0)
    return TimeFrequencyPlane(values, freqs, times, coi)


def mstft(signal, window: WindowSpec = WindowSpec(),
          freq_range: tuple[float, float] | None = None,
          n_freqs: int | None = None) -> TimeFrequencyPlane:
    """Windowed transform with phase referenced to the window center.

    Row m holds ``integral f(u) G(u - t) exp(-2 pi i z_m (u - t)) du`` per
    time column: a filter bank sliding the window across frequencies, so a
    pure tone at ``xi`` gives ``exp(2 pi i xi t) Ghat(z - xi)``.
    """
    return _mstft_impl(signal, window, freq_range, n_freqs, derivative=False)


def mstft_time_derivative(signal, window: WindowSpec = WindowSpec(),
                          freq_range: tuple[float, float] | None = None,
                          n_freqs: int | None = None) -> TimeFrequencyPlane:
    """Exact time derivative of :func:`mstft` on the same grid.

    Equals ``2 pi i z`` times the window pass minus a derivative-window pass;
    both collapse to multiplying each spectral component by its frequency.
    """
    return _mstft_impl(signal, window, freq_range, n_freqs, derivative=True)


def bin_widths(freqs: np.ndarray) -> np.ndarray:
    """Cell widths from midpoints between neighbors, symmetric at the ends."""
    freqs = np.asarray(freqs, dtype=float)
    edges = np.empty(len(freqs) + 1)
    edges[1:-1] = 0.5 * (freqs[1:] + freqs[:-1])
    edges[0] = freqs[0] - 0.5 * (freqs[1] - freqs[0])
    edges[-1] = freqs[-1] + 0.5 * (freqs[-1] - freqs[-2])
    return np.diff(edges)
