"""File formats: signal/plane/ridge CSV, PGM renders, JSON reports.

All float fields are written with ``repr`` (shortest exact round-trip), so
fixed inputs produce byte-identical files across runs and platforms.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .ridges import RidgeSet
from .signal_model import SampledSignal
from .transforms import TimeFrequencyPlane, TimeScalePlane


def _fmt(x: float) -> str:
    return repr(float(x))


def write_signal_csv(signal: SampledSignal, path) -> None:
    """Write ``time,real,imag`` rows for a sampled signal."""
    times = signal.times
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "real", "imag"])
        for t, v in zip(times, signal.samples):
            writer.writerow([_fmt(t), _fmt(v.real), _fmt(v.imag)])


def _recover_rate(times: np.ndarray) -> float:
    """Exact-rate recovery: try float candidates that reproduce the time column."""
    n = len(times)
    if n < 2:
        return 1.0
    estimate = (n - 1) / (times[-1] - times[0])
    candidates = [estimate]
    lo = hi = estimate
    for _ in range(4):
        lo = np.nextafter(lo, -np.inf)
        hi = np.nextafter(hi, np.inf)
        candidates.extend([lo, hi])
    rounded = round(estimate)
    if rounded > 0 and abs(estimate - rounded) < 1e-6 * estimate:
        candidates.append(float(rounded))
    start = times[0]
    idx = np.arange(n)
    for rate in candidates:
        if np.array_equal(start + idx / rate, times):
            return float(rate)
    return float(estimate)


def read_signal_csv(path) -> SampledSignal:
    """Parse a signal CSV; a missing ``imag`` column is read as zero."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        header = [h.strip().lower() for h in header]
        if header[:2] != ["time", "real"]:
            raise ValueError(f"{path}: expected header starting 'time,real', got {header}")
        has_imag = len(header) > 2 and header[2] == "imag"
        times = []
        values = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t = float(row[0])
                re = float(row[1])
                im = float(row[2]) if has_imag and len(row) > 2 and row[2] != "" else 0.0
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed row {row!r}") from exc
            times.append(t)
            values.append(complex(re, im))
    if len(times) < 2:
        raise ValueError(f"{path}: need at least two samples")
    times = np.asarray(times)
    steps = np.diff(times)
    if np.any(steps <= 0) or np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
        raise ValueError(f"{path}: time column must be uniformly increasing")
    rate = _recover_rate(times)
    return SampledSignal(np.asarray(values), rate, float(times[0]))


def write_plane_csv(plane, path) -> None:
    """One row per scale/frequency: the axis value, then the complex cells."""
    axis = plane.scales if isinstance(plane, TimeScalePlane) else plane.freqs
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis"] + [_fmt(t) for t in plane.times])
        for value, row in zip(axis, plane.values):
            writer.writerow([_fmt(value)] + [repr(complex(v)) for v in row])


def read_plane_csv(path):
    """Read back a plane CSV as (axis, times, values)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[0] != "axis":
            raise ValueError(f"{path}: expected 'axis' header")
        times = np.asarray([float(t) for t in header[1:]])
        axis = []
        rows = []
        for row in reader:
            axis.append(float(row[0]))
            rows.append([complex(v) for v in row[1:]])
    return np.asarray(axis), times, np.asarray(rows)


def render_pgm(plane) -> bytes:
    """8-bit log-magnitude render, min-max normalized over non-COI cells.

    Binary (P5) format, row-major, frequency increasing downward.
    """
    values = np.abs(plane.values)
    coi = plane.coi_mask
    if isinstance(plane, TimeScalePlane):
        # rows ordered by increasing frequency = decreasing scale
        values = values[::-1]
        coi = coi[::-1]
    interior = values[~coi]
    ref = float(interior.max()) if interior.size else float(values.max())
    if ref <= 0.0:
        data = np.zeros(values.shape, dtype=np.uint8)
    else:
        floor = ref * 1e-12
        logs = np.log10(np.maximum(values, floor))
        band = logs[~coi] if interior.size else logs
        lo, hi = float(band.min()), float(band.max())
        if hi <= lo:
            data = np.zeros(values.shape, dtype=np.uint8)
        else:
            scaled = np.clip((logs - lo) / (hi - lo), 0.0, 1.0)
            data = np.rint(scaled * 255.0).astype(np.uint8)
    h, w = data.shape
    return b"P5\n%d %d\n255\n" % (w, h) + data.tobytes()


def write_pgm(plane, path) -> None:
    Path(path).write_bytes(render_pgm(plane))


def write_ridges_csv(ridge_set: RidgeSet, times: np.ndarray, path) -> None:
    """``ridge_id,time,frequency,magnitude`` rows, one per live ridge column."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ridge_id", "time", "frequency", "magnitude"])
        for rid, ridge in enumerate(ridge_set.ridges):
            for col, (freq, magnitude) in enumerate(zip(ridge.freqs, ridge.magnitudes)):
                writer.writerow([
                    rid,
                    _fmt(times[ridge.start + col]),
                    _fmt(freq),
                    _fmt(magnitude),
                ])


def write_density_csv(times: np.ndarray, density: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "density"])
        for t, d in zip(times, density):
            writer.writerow([_fmt(t), _fmt(d)])


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
