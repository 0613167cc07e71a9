"""Component recovery by band-limited inversion of a squeezed plane.

Summing the squeezed plane times the bin widths over a narrow frequency band
around a ridge, then dividing by the analysis kernel's normalization (the
wavelet admissibility constant, or the window energy), returns the complex
component on the signal's time grid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ridges import Ridge, RidgeSet
from .transforms import TimeFrequencyPlane, bin_widths
from .wavelets import WaveletSpec, admissibility_constant
from .windows import WindowSpec, window_energy

# adaptive band caps: one octave for log-structured bins, and a floor of ten
# bins widened to three window-bandwidth stds for arithmetic ones
_STFT_CAP_BINS = 10


@dataclass(frozen=True, eq=False)
class ComponentSet:
    """Recovered components aligned with the input grid, plus band accounting."""

    components: tuple[np.ndarray, ...]
    backend: str
    band_policy: str
    absent_flags: tuple[np.ndarray, ...]  # True where the ridge was missing
    overlap_flags: np.ndarray  # True per column where requested bands overlapped

    def __len__(self) -> int:
        return len(self.components)


def _prefactor(kernel) -> float:
    if isinstance(kernel, WaveletSpec):
        return admissibility_constant(kernel)
    if isinstance(kernel, WindowSpec):
        return window_energy(kernel)
    raise TypeError(f"kernel must be a WaveletSpec or WindowSpec, not {type(kernel).__name__}")


def _band_sum(squeezed: TimeFrequencyPlane, freq_per_col: np.ndarray,
              half_width_per_col: np.ndarray, log_band: bool):
    """Sum plane * bin width over the band around the per-column frequency."""
    eta = squeezed.freqs
    widths = bin_widths(eta)
    n_times = squeezed.values.shape[1]
    out = np.zeros(n_times, dtype=complex)
    absent = ~np.isfinite(freq_per_col)
    if log_band:
        log_eta = np.log(eta)
        with np.errstate(invalid="ignore"):
            sel = np.abs(log_eta[:, None] - np.log(freq_per_col)[None, :]) < half_width_per_col[None, :]
    else:
        sel = np.abs(eta[:, None] - freq_per_col[None, :]) < half_width_per_col[None, :]
    sel[:, absent] = False
    out = np.sum(squeezed.values * widths[:, None] * sel, axis=0)
    out[absent] = 0.0
    return out, absent, sel


def reconstruct_component(squeezed: TimeFrequencyPlane, ridge: Ridge, band_half_width: float,
                          kernel) -> np.ndarray:
    """Recover one component from the band around a single ridge.

    ``band_half_width`` is in frequency units; ``kernel`` selects the
    normalization (wavelet admissibility constant or window energy).
    Columns where the ridge is absent come back as zero.
    """
    if band_half_width <= 0.0:
        raise ValueError("band_half_width must be positive")
    freq_per_col = ridge.freq_at(squeezed.values.shape[1])
    hw = np.full_like(freq_per_col, float(band_half_width))
    values, _, _ = _band_sum(squeezed, freq_per_col, hw, log_band=False)
    return values / _prefactor(kernel)


def reconstruct_all(squeezed: TimeFrequencyPlane, ridge_set: RidgeSet, kernel,
                    band_policy: str = "adaptive",
                    band_half_width: float | None = None) -> ComponentSet:
    """Recover every ridge's component under a band policy.

    ``"fixed"`` uses ``band_half_width`` everywhere. ``"adaptive"`` uses half
    the per-column gap to the nearest other ridge, capped at one octave for
    geometric (wavelet-side) grids and at max(10 bins, 3 window-bandwidth
    stds) for arithmetic grids. Columns where requested bands overlap are
    flagged (with a warning) but still reconstructed.
    """
    if not len(ridge_set.ridges):
        raise ValueError("ridge set is empty")
    if band_policy not in ("fixed", "adaptive"):
        raise ValueError(f"unknown band policy {band_policy!r}")
    if band_policy == "fixed" and (band_half_width is None or band_half_width <= 0.0):
        raise ValueError("fixed band policy requires a positive band_half_width")

    eta = squeezed.freqs
    n_times = squeezed.values.shape[1]
    ratios = eta[1:] / eta[:-1]
    log_grid = np.max(ratios) - np.min(ratios) <= 1e-9 * np.max(ratios)
    backend = "cwt" if log_grid else "stft"
    prefactor = _prefactor(kernel)

    freq_tracks = [r.freq_at(n_times) for r in ridge_set.ridges]
    components = []
    absent_flags = []
    selections = []
    for k, track in enumerate(freq_tracks):
        log_band = log_grid
        if band_policy == "fixed":
            if log_grid:
                with np.errstate(divide="ignore", invalid="ignore"):
                    hw_cols = np.abs(np.log1p(band_half_width / track))
            else:
                hw_cols = np.full(n_times, float(band_half_width))
        else:
            if log_grid:
                cap = np.log(2.0)  # one octave
            else:
                dz = float(eta[1] - eta[0])
                cap = _STFT_CAP_BINS * dz
                if isinstance(kernel, WindowSpec):
                    # widen to the window's squeezed-mass spread when coarser
                    sigma_f = 3.0 / (2.0 * np.pi * kernel.half_width)
                    cap = max(cap, 3.0 * sigma_f)
            gaps = np.full(n_times, np.inf)
            for j, other in enumerate(freq_tracks):
                if j == k:
                    continue
                with np.errstate(invalid="ignore", divide="ignore"):
                    if log_grid:
                        sep = np.abs(np.log(other) - np.log(track))
                    else:
                        sep = np.abs(other - track)
                sep = np.where(np.isfinite(sep), sep, np.inf)
                gaps = np.minimum(gaps, sep)
            hw_cols = np.minimum(0.5 * gaps, cap)
        values, absent, sel = _band_sum(squeezed, track, hw_cols, log_band)
        components.append(values / prefactor)
        absent_flags.append(absent)
        selections.append(sel)

    overlap = np.zeros(n_times, dtype=bool)
    for i in range(len(selections)):
        for j in range(i + 1, len(selections)):
            overlap |= np.any(selections[i] & selections[j], axis=0)
    if np.any(overlap):
        warnings.warn(
            f"reconstruction bands overlap on {int(np.count_nonzero(overlap))} columns",
            stacklevel=2,
        )
    return ComponentSet(
        tuple(components),
        backend,
        band_policy,
        tuple(absent_flags),
        overlap,
    )


def reconstruct_real(component: np.ndarray) -> np.ndarray:
    """Real-signal convention: a real input's cosine component of amplitude A
    appears in the positive-frequency analysis with amplitude A/2, so the
    real component is twice the real part."""
    return 2.0 * np.real(np.asarray(component))
