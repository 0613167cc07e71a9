"""Synchrosqueezing toolkit: sharpened, invertible time-frequency analysis.

Wavelet and windowed transforms with exact time derivatives, phase-transform
energy reassignment, ridge extraction, per-component band inversion, a
density-index instability measure, and synthetic signal generators with
closed-form ground truth.
"""

from .reconstruct import ComponentSet, reconstruct_all, reconstruct_component, reconstruct_real
from .ridges import Ridge, RidgeSet, density_index, extract_ridges
from .signal_model import (
    ChirpPhase,
    ClassReport,
    ComponentSpec,
    ConstantAmplitude,
    GaussianBumpAmplitude,
    LinearPhase,
    PolySinPhase,
    SampledSignal,
    TabulatedComponent,
    add_white_noise,
    ground_truth_if,
    impulse_train,
    make_class_member,
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
from .transforms import (
    TimeFrequencyPlane,
    TimeScalePlane,
    bin_widths,
    cwt,
    cwt_time_derivative,
    mstft,
    mstft_time_derivative,
)
from .wavelets import WaveletSpec, admissibility_constant, frequency_response, support_radius
from .windows import (
    WindowSpec,
    window_derivative,
    window_energy,
    window_peak,
    window_transform,
    window_value,
)

__version__ = "0.1.0"

__all__ = [
    "ChirpPhase",
    "ClassReport",
    "ComponentSet",
    "ComponentSpec",
    "ConstantAmplitude",
    "GaussianBumpAmplitude",
    "LinearPhase",
    "PhasePlane",
    "PolySinPhase",
    "Ridge",
    "RidgeSet",
    "SampledSignal",
    "SqueezeConfig",
    "SqueezeReport",
    "TabulatedComponent",
    "TimeFrequencyPlane",
    "TimeScalePlane",
    "WaveletSpec",
    "WindowSpec",
    "add_white_noise",
    "admissibility_constant",
    "bin_widths",
    "cwt",
    "cwt_time_derivative",
    "default_epsilon",
    "density_index",
    "extract_ridges",
    "frequency_response",
    "ground_truth_if",
    "impulse_train",
    "mad_epsilon",
    "make_class_member",
    "mstft",
    "mstft_time_derivative",
    "phase_transform",
    "reconstruct_all",
    "reconstruct_component",
    "reconstruct_real",
    "squeeze",
    "support_radius",
    "synthesize",
    "validate_class",
    "window_derivative",
    "window_energy",
    "window_peak",
    "window_transform",
    "window_value",
]
