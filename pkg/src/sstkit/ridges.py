"""Maximum-energy frequency curves through a time-frequency plane.

Each ridge is the dynamic-programming optimum of column magnitude minus a
squared log-frequency jump penalty, extracted greedily: after each curve the
plane is cleared one bin around it and the next curve is sought. A curve is
truncated where its cells stay below the magnitude threshold for more than
a few consecutive columns, so ridges are born and die with their component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# a ridge survives at most this many consecutive sub-threshold columns
_MAX_DEAD_RUN = 3


@dataclass(frozen=True, eq=False)
class Ridge:
    """One extracted curve over a contiguous run of time columns."""

    start: int  # first time-column index
    bins: np.ndarray  # frequency-bin index per column
    freqs: np.ndarray
    magnitudes: np.ndarray

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=int).copy()
        freqs = np.asarray(self.freqs, dtype=float).copy()
        mags = np.asarray(self.magnitudes, dtype=float).copy()
        if not len(bins) or len(freqs) != len(bins) or len(mags) != len(bins):
            raise ValueError("ridge arrays must be nonempty and share one length")
        for name, arr in (("bins", bins), ("freqs", freqs), ("magnitudes", mags)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def stop(self) -> int:
        return self.start + len(self.bins)

    @property
    def energy(self) -> float:
        return float(np.sum(self.magnitudes))

    @property
    def mean_freq(self) -> float:
        return float(np.mean(self.freqs))

    def freq_at(self, n_times: int) -> np.ndarray:
        """Frequency per global column; NaN where the ridge is absent."""
        out = np.full(n_times, np.nan)
        out[self.start:self.stop] = self.freqs
        return out


@dataclass(frozen=True)
class RidgeExtractionParams:
    count: int
    penalty: float
    max_jump: int
    min_energy_fraction: float
    threshold: float


@dataclass(frozen=True, eq=False)
class RidgeSet:
    """Ridges ordered by mean frequency, plus the parameters that made them."""

    ridges: tuple[Ridge, ...]
    params: RidgeExtractionParams
    n_times: int

    def __len__(self) -> int:
        return len(self.ridges)


def default_penalty(magnitudes: np.ndarray, log_freqs: np.ndarray) -> float:
    """Penalty making a one-bin jump cost 2% of the median column maximum."""
    col_max = np.max(magnitudes, axis=0)
    step = float(np.median(np.diff(log_freqs)))
    if step == 0.0:
        return 0.0
    return 0.02 * float(np.median(col_max)) / step**2


def _viterbi_path(mag: np.ndarray, log_freqs: np.ndarray, penalty: float, max_jump: int) -> np.ndarray:
    """Argmax path of sum(mag) - penalty * sum(squared log-frequency jumps)."""
    n_bins, n_times = mag.shape
    jump = min(max_jump, n_bins - 1)
    score = mag[:, 0].copy()
    back = np.zeros((n_bins, n_times), dtype=np.int32)
    offsets = np.arange(-jump, jump + 1)
    for col in range(1, n_times):
        best = np.full(n_bins, -np.inf)
        arg = np.zeros(n_bins, dtype=np.int32)
        for off in offsets:
            src_lo = max(0, -off)
            src_hi = min(n_bins, n_bins - off)
            src = np.arange(src_lo, src_hi)
            dst = src + off
            cand = score[src] - penalty * (log_freqs[dst] - log_freqs[src]) ** 2
            better = cand > best[dst]
            sel = dst[better]
            best[sel] = cand[better]
            arg[sel] = src[better]
        score = best + mag[:, col]
        back[:, col] = arg
    path = np.empty(n_times, dtype=np.int32)
    path[-1] = int(np.argmax(score))
    for col in range(n_times - 1, 0, -1):
        path[col - 1] = back[path[col], col]
    return path


def _alive_segments(alive: np.ndarray):
    """Contiguous index ranges treating dead runs of <= _MAX_DEAD_RUN as alive."""
    n = len(alive)
    segments = []
    start = None
    dead = 0
    for i in range(n):
        if alive[i]:
            if start is None:
                start = i
            dead = 0
        elif start is not None:
            dead += 1
            if dead > _MAX_DEAD_RUN:
                segments.append((start, i - dead + 1))
                start = None
                dead = 0
    if start is not None:
        end = n
        while end > start and not alive[end - 1]:
            end -= 1
        segments.append((start, end))
    return segments


def extract_ridges(plane, count: int = 1, penalty: float | None = None, max_jump: int = 5,
                   min_energy_fraction: float = 0.05,
                   threshold: float | None = None) -> RidgeSet:
    """Greedily extract up to ``count`` ridges from a time-frequency plane.

    Each extraction runs the jump-penalized dynamic program over all columns,
    truncates the path to its strongest above-threshold segment, and clears
    the path plus one bin on each side before the next extraction. Curves
    with total magnitude below ``min_energy_fraction`` of the first curve's
    are discarded. An all-zero plane yields an empty set.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if penalty is not None and penalty < 0.0:
        raise ValueError("penalty must be nonnegative")
    mag = np.abs(plane.values)
    n_bins, n_times = mag.shape
    freqs = plane.freqs
    log_freqs = np.log(freqs)
    if threshold is None:
        threshold = 1e-6 * float(mag.max())
    if penalty is None:
        penalty = default_penalty(mag, log_freqs)
    params = RidgeExtractionParams(count, float(penalty), int(max_jump),
                                   float(min_energy_fraction), float(threshold))
    if not np.any(mag > 0.0):
        return RidgeSet((), params, n_times)

    work = mag.copy()
    cols = np.arange(n_times)
    ridges: list[Ridge] = []
    reference_energy = None
    for _ in range(count):
        if not np.any(work > threshold):
            break
        path = _viterbi_path(work, log_freqs, penalty, max_jump)
        alive = work[path, cols] > threshold
        segments = _alive_segments(alive)
        # clear the whole path so later extractions cannot rediscover it
        for off in (-1, 0, 1):
            rows = np.clip(path + off, 0, n_bins - 1)
            work[rows, cols] = 0.0
        if not segments:
            break
        start, stop = max(
            segments, key=lambda seg: float(np.sum(mag[path[seg[0]:seg[1]], cols[seg[0]:seg[1]]]))
        )
        seg_bins = path[start:stop]
        ridge = Ridge(start, seg_bins, freqs[seg_bins], mag[seg_bins, cols[start:stop]])
        if reference_energy is None:
            reference_energy = ridge.energy
            ridges.append(ridge)
        elif reference_energy > 0.0 and ridge.energy >= min_energy_fraction * reference_energy:
            ridges.append(ridge)
    ridges.sort(key=lambda r: r.mean_freq)
    return RidgeSet(tuple(ridges), params, n_times)


def density_index(ridge_set: RidgeSet) -> np.ndarray:
    """Per-column sum of |frequency| over the ridges alive there.

    Doubles when a second component appears, so jumps mark structural
    changes; columns with no live ridge contribute zero.
    """
    out = np.zeros(ridge_set.n_times)
    for ridge in ridge_set.ridges:
        out[ridge.start:ridge.stop] += np.abs(ridge.freqs)
    return out
