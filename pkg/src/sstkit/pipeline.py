"""End-to-end analysis driver shared by the CLI and the test suite.

A single JSON-shaped config document controls both backends; unknown keys
are rejected so typos fail loudly. The driver runs transform -> phase
transform -> reassignment -> ridge extraction -> density index -> band
inversion and hands structured results to the writers.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as sstio
from .reconstruct import ComponentSet, reconstruct_all, reconstruct_real
from .ridges import RidgeSet, density_index, extract_ridges
from .signal_model import (
    ComponentSpec,
    ConstantAmplitude,
    ChirpPhase,
    LinearPhase,
    PolySinPhase,
    SampledSignal,
    add_white_noise,
    ground_truth_if,
    impulse_train,
    synthesize,
    validate_class,
)
from .synchrosqueeze import (
    PhasePlane,
    SqueezeConfig,
    SqueezeReport,
    default_epsilon,
    mad_epsilon,
    phase_transform,
    squeeze,
)
from .transforms import TimeFrequencyPlane, TimeScalePlane, cwt, cwt_time_derivative, mstft, mstft_time_derivative
from .wavelets import WaveletSpec
from .windows import WindowSpec

DEFAULT_CONFIG = {
    "backend": "both",  # cwt | stft | both
    "wavelet": {"family": "bump", "delta": 0.25},
    "window": {"family": "gaussian", "half_width": None},  # None -> 32 samples
    "cwt": {"n_voices": 32, "scale_min": None, "scale_max": None},
    "stft": {"n_freqs": None, "freq_min": None, "freq_max": None},
    "squeeze": {"epsilon": None, "epsilon_mode": "auto", "band_limit": None},
    "ridge": {"count": 1, "penalty": None, "max_jump": 5, "min_energy_fraction": 0.05},
    "reconstruct": {"band_policy": "adaptive", "band_half_width": None},
    "noise": {"power": 0.0, "seed": 0},
}

_EPSILON_MODES = ("auto", "absolute", "mad")


def default_config() -> dict:
    return copy.deepcopy(DEFAULT_CONFIG)


def _check_keys(config: dict, reference: dict, prefix: str = "") -> None:
    for key, value in config.items():
        path = f"{prefix}{key}"
        if key not in reference:
            raise ValueError(f"unknown config key '{path}'")
        if isinstance(reference[key], dict):
            if not isinstance(value, dict):
                raise ValueError(f"config key '{path}' must be a mapping")
            _check_keys(value, reference[key], prefix=f"{path}.")


def merge_config(base: dict, overrides: dict) -> dict:
    """Deep-merge ``overrides`` into a copy of ``base``, rejecting unknown keys."""
    _check_keys(overrides, base)
    out = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict):
            out[key] = merge_config(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def apply_setting(config: dict, dotted: str, raw: str) -> dict:
    """Apply one ``section.key=value`` override; values parse as JSON first."""
    if "=" in dotted:
        raise ValueError("pass the key and value separately")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = dotted.split(".")
    override: dict = {parts[-1]: value}
    for part in reversed(parts[:-1]):
        override = {part: override}
    return merge_config(config, override)


def validate_config(config: dict) -> dict:
    merged = merge_config(DEFAULT_CONFIG, config)
    if merged["backend"] not in ("cwt", "stft", "both"):
        raise ValueError(f"config backend must be cwt, stft or both, got {merged['backend']!r}")
    if merged["squeeze"]["epsilon_mode"] not in _EPSILON_MODES:
        raise ValueError(
            f"config squeeze.epsilon_mode must be one of {_EPSILON_MODES}, "
            f"got {merged['squeeze']['epsilon_mode']!r}"
        )
    if merged["squeeze"]["epsilon_mode"] == "absolute" and merged["squeeze"]["epsilon"] is None:
        raise ValueError("config squeeze.epsilon is required when epsilon_mode is 'absolute'")
    return merged


# --------------------------------------------------------------------------
# named synthetic presets
# --------------------------------------------------------------------------

PRESET_NAMES = ("fig1", "two-tone", "chirp", "impulse-train")

_PRESET_DEFAULTS = {
    "fig1": (100.0, 10.0),
    "two-tone": (128.0, 8.0),
    "chirp": (128.0, 8.0),
    "impulse-train": (128.0, 8.0),
}


@dataclass(frozen=True, eq=False)
class Preset:
    name: str
    signal: SampledSignal
    if_tracks: np.ndarray | None  # (K, n) ground-truth IFs, when analytic
    report: str | None


def make_preset(name: str, sample_rate: float | None = None,
                duration: float | None = None) -> Preset:
    """Build a named test signal with its analytic ground truth, if any."""
    if name not in PRESET_NAMES:
        raise ValueError(
            f"unknown signal preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        )
    rate0, dur0 = _PRESET_DEFAULTS[name]
    rate = float(sample_rate) if sample_rate is not None else rate0
    duration = float(duration) if duration is not None else dur0

    if name == "impulse-train":
        spacing = 1.0 / 6.0
        events = np.arange(0.0, duration + 1e-12, spacing)
        events = events[events <= duration]
        signal = impulse_train(events, np.ones_like(events), rate, duration)
        return Preset(name, signal, None, f"{len(events)} impulses at spacing {spacing!r}")

    if name == "fig1":
        specs = [
            ComponentSpec(
                ConstantAmplitude(1.0),
                PolySinPhase(terms=((2.6, 0.1), (1.0, 10.0)), sin_amp=3.0, sin_omega=2.0),
            )
        ]
        complex_signal = synthesize(specs, rate, duration)
        signal = SampledSignal(complex_signal.samples.real, rate, 0.0)
        report = None
    elif name == "two-tone":
        specs = [
            ComponentSpec(ConstantAmplitude(1.0), LinearPhase(5.0)),
            ComponentSpec(ConstantAmplitude(1.0), LinearPhase(12.0)),
        ]
        signal = synthesize(specs, rate, duration)
        cls = validate_class(specs, rate, duration)
        report = (
            f"separation d = {cls.d_measured!r}, "
            f"slow-variation epsilon = {cls.epsilon_measured!r}"
        )
    else:  # chirp
        specs = [ComponentSpec(ConstantAmplitude(1.0), ChirpPhase(5.0, 1.5))]
        signal = synthesize(specs, rate, duration)
        report = None
    tracks = np.vstack([ground_truth_if(s, signal.times) for s in specs])
    return Preset(name, signal, tracks, report)


# --------------------------------------------------------------------------
# analysis
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BackendResult:
    backend: str
    plane: TimeScalePlane | TimeFrequencyPlane
    phase: PhasePlane
    squeezed: TimeFrequencyPlane
    squeeze_report: SqueezeReport
    ridge_set: RidgeSet
    density: np.ndarray
    component_set: ComponentSet | None


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    signal: SampledSignal
    config: dict
    backends: dict


def _resolve_epsilon(plane, squeeze_cfg: dict) -> float:
    mode = squeeze_cfg["epsilon_mode"]
    if mode == "absolute":
        return float(squeeze_cfg["epsilon"])
    if mode == "mad":
        return mad_epsilon(plane)
    if squeeze_cfg["epsilon"] is not None:
        return float(squeeze_cfg["epsilon"])
    return default_epsilon(plane)


def _window_for(signal: SampledSignal, config: dict) -> WindowSpec:
    half_width = config["window"]["half_width"]
    if half_width is None:
        half_width = 32.0 / signal.sample_rate
    return WindowSpec(config["window"]["family"], float(half_width))


def run_backend(signal: SampledSignal, config: dict, backend: str) -> BackendResult:
    wavelet = WaveletSpec(config["wavelet"]["family"], config["wavelet"]["delta"])
    if backend == "cwt":
        scale_min = config["cwt"]["scale_min"]
        scale_max = config["cwt"]["scale_max"]
        scale_range = None if scale_min is None or scale_max is None else (scale_min, scale_max)
        n_voices = int(config["cwt"]["n_voices"])
        plane = cwt(signal, wavelet, n_voices, scale_range)
        dplane = cwt_time_derivative(signal, wavelet, n_voices, scale_range)
        kernel = wavelet
    elif backend == "stft":
        window = _window_for(signal, config)
        f_min = config["stft"]["freq_min"]
        f_max = config["stft"]["freq_max"]
        freq_range = None if f_min is None or f_max is None else (f_min, f_max)
        n_freqs = config["stft"]["n_freqs"]
        plane = mstft(signal, window, freq_range, n_freqs)
        dplane = mstft_time_derivative(signal, window, freq_range, n_freqs)
        kernel = window
    else:
        raise ValueError(f"unknown backend {backend!r}")

    epsilon = _resolve_epsilon(plane, config["squeeze"])
    phase = phase_transform(plane, dplane, epsilon)
    band_limit = config["squeeze"]["band_limit"]
    squeezed, report = squeeze(
        plane, phase, SqueezeConfig(epsilon=epsilon, band_limit=band_limit)
    )

    ridge_cfg = config["ridge"]
    ridge_set = extract_ridges(
        squeezed,
        count=int(ridge_cfg["count"]),
        penalty=ridge_cfg["penalty"],
        max_jump=int(ridge_cfg["max_jump"]),
        min_energy_fraction=float(ridge_cfg["min_energy_fraction"]),
        threshold=epsilon,
    )
    density = density_index(ridge_set)

    component_set = None
    if len(ridge_set):
        component_set = reconstruct_all(
            squeezed,
            ridge_set,
            kernel,
            band_policy=config["reconstruct"]["band_policy"],
            band_half_width=config["reconstruct"]["band_half_width"],
        )
    return BackendResult(backend, plane, phase, squeezed, report, ridge_set, density, component_set)


def run_analysis(signal: SampledSignal, config: dict | None = None) -> AnalysisResult:
    """Run the configured backends on a signal (after optional seeded noise)."""
    config = validate_config(config or {})
    if config["noise"]["power"]:
        signal = add_white_noise(signal, float(config["noise"]["power"]), int(config["noise"]["seed"]))
    backends = ("cwt", "stft") if config["backend"] == "both" else (config["backend"],)
    results = {name: run_backend(signal, config, name) for name in backends}
    return AnalysisResult(signal, config, results)


def write_outputs(result: AnalysisResult, outdir, figures: bool = False) -> list[str]:
    """Write CSV/PGM/JSON artifacts (and optional figures); returns file names."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    def emit(name: str) -> Path:
        written.append(name)
        return outdir / name

    signal = result.signal
    input_real = signal.is_real
    signal_energy = float(np.sum(np.abs(signal.samples) ** 2))
    manifest: dict = {"input_real": input_real, "config": result.config, "backends": {}}

    for name, res in result.backends.items():
        sstio.write_plane_csv(res.plane, emit(f"{name}_plane.csv"))
        sstio.write_pgm(res.plane, emit(f"{name}_plane.pgm"))
        sstio.write_plane_csv(res.squeezed, emit(f"{name}_squeezed.csv"))
        sstio.write_pgm(res.squeezed, emit(f"{name}_squeezed.pgm"))
        sstio.write_ridges_csv(res.ridge_set, res.squeezed.times, emit(f"{name}_ridges.csv"))
        sstio.write_density_csv(res.squeezed.times, res.density, emit(f"{name}_density.csv"))
        sstio.write_json(
            {
                "dropped_fraction": res.squeeze_report.dropped_fraction,
                "n_dropped_cells": res.squeeze_report.n_dropped_cells,
            },
            emit(f"{name}_dropped.json"),
        )
        components_meta = []
        if res.component_set is not None:
            for k, comp in enumerate(res.component_set.components):
                comp_signal = SampledSignal(comp, signal.sample_rate, signal.start_time)
                sstio.write_signal_csv(comp_signal, emit(f"{name}_component_{k}.csv"))
                emitted = comp
                if input_real:
                    real_part = reconstruct_real(comp)
                    emitted = real_part
                    sstio.write_signal_csv(
                        SampledSignal(real_part.astype(complex), signal.sample_rate, signal.start_time),
                        emit(f"{name}_component_{k}_real.csv"),
                    )
                energy = float(np.sum(np.abs(emitted) ** 2))
                components_meta.append(
                    {
                        "component_id": k,
                        "band_policy": res.component_set.band_policy,
                        "energy_fraction": energy / signal_energy if signal_energy else 0.0,
                        "overlap_flags": int(np.count_nonzero(res.component_set.overlap_flags)),
                        "absent_columns": int(np.count_nonzero(res.component_set.absent_flags[k])),
                    }
                )
        manifest["backends"][name] = {
            "n_ridges": len(res.ridge_set),
            "dropped_fraction": res.squeeze_report.dropped_fraction,
            "components": components_meta,
        }
    sstio.write_json(manifest, emit("manifest.json"))

    if figures:
        from . import report

        written.extend(report.render_figures(result, outdir))
    return written
