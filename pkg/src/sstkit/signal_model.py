"""Sampled multicomponent signals and generators with known ground truth.

A signal is a superposition of components ``A_k(t) exp(2 pi i phi_k(t))``
with positive amplitude and strictly increasing phase. The analytic families
here carry closed-form derivatives so instantaneous-frequency oracles are
exact, never finite-differenced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Uniformly sampled complex (or real-valued) time series."""

    samples: np.ndarray
    sample_rate: float
    start_time: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-d sequence")
        if not float(self.sample_rate) > 0.0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", float(self.sample_rate))
        object.__setattr__(self, "start_time", float(self.start_time))

    def __len__(self) -> int:
        return len(self.samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampledSignal):
            return NotImplemented
        return (
            self.sample_rate == other.sample_rate
            and self.start_time == other.start_time
            and np.array_equal(self.samples, other.samples)
        )

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(len(self.samples)) / self.sample_rate

    @property
    def duration(self) -> float:
        return (len(self.samples) - 1) / self.sample_rate

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.samples.imag == 0.0))


# --------------------------------------------------------------------------
# analytic phase families (phase in cycles; ifreq in cycles per unit time)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearPhase:
    """phi(t) = freq * t + offset; a pure tone."""

    freq: float
    offset: float = 0.0

    def phase(self, t):
        t = np.asarray(t, dtype=float)
        return self.freq * t + self.offset

    def ifreq(self, t):
        return np.full_like(np.asarray(t, dtype=float), float(self.freq))

    def ifreq_slope(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ChirpPhase:
    """phi(t) = f0 * t + rate * t^2 / 2; instantaneous frequency f0 + rate * t."""

    f0: float
    rate: float

    def phase(self, t):
        t = np.asarray(t, dtype=float)
        return self.f0 * t + 0.5 * self.rate * t * t

    def ifreq(self, t):
        t = np.asarray(t, dtype=float)
        return self.f0 + self.rate * t

    def ifreq_slope(self, t):
        return np.full_like(np.asarray(t, dtype=float), float(self.rate))


@dataclass(frozen=True)
class PolySinPhase:
    """phi(t) = sum_j coeff_j * t^power_j + sin_amp * sin(sin_omega * t + sin_phase).

    Powers may be fractional (evaluated for t >= 0); the sinusoid argument is
    in radians per unit time.
    """

    terms: tuple[tuple[float, float], ...]  # (power, coefficient) pairs
    sin_amp: float = 0.0
    sin_omega: float = 0.0
    sin_phase: float = 0.0

    def phase(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for power, coeff in self.terms:
            out += coeff * t**power
        if self.sin_amp:
            out += self.sin_amp * np.sin(self.sin_omega * t + self.sin_phase)
        return out

    def ifreq(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for power, coeff in self.terms:
            if power != 0.0:
                out += coeff * power * t ** (power - 1.0)
        if self.sin_amp:
            out += self.sin_amp * self.sin_omega * np.cos(self.sin_omega * t + self.sin_phase)
        return out

    def ifreq_slope(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for power, coeff in self.terms:
            if power not in (0.0, 1.0):
                out += coeff * power * (power - 1.0) * t ** (power - 2.0)
        if self.sin_amp:
            out -= self.sin_amp * self.sin_omega**2 * np.sin(self.sin_omega * t + self.sin_phase)
        return out


# --------------------------------------------------------------------------
# amplitude families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantAmplitude:
    value: float = 1.0

    def amplitude(self, t):
        return np.full_like(np.asarray(t, dtype=float), float(self.value))

    def amplitude_slope(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class GaussianBumpAmplitude:
    """base + bump * exp(-(t - center)^2 / (2 width^2)); stays positive for base > 0."""

    base: float = 1.0
    bump: float = 0.5
    center: float = 0.0
    width: float = 1.0

    def amplitude(self, t):
        t = np.asarray(t, dtype=float)
        return self.base + self.bump * np.exp(-((t - self.center) ** 2) / (2 * self.width**2))

    def amplitude_slope(self, t):
        t = np.asarray(t, dtype=float)
        g = np.exp(-((t - self.center) ** 2) / (2 * self.width**2))
        return -self.bump * (t - self.center) / self.width**2 * g


@dataclass(frozen=True)
class ComponentSpec:
    """One analytic component: an amplitude family plus a phase family."""

    amplitude: object = field(default_factory=ConstantAmplitude)
    phase: object = field(default_factory=lambda: LinearPhase(1.0))


@dataclass(frozen=True, eq=False)
class TabulatedComponent:
    """Component given by samples on a fixed grid; the caller supplies the IF.

    ``amplitude_samples`` and ``phase_samples`` are values of A(t) and phi(t)
    on the synthesis grid; ``if_ground_truth`` holds phi'(t) in cycles per
    unit time on the same grid.
    """

    amplitude_samples: np.ndarray
    phase_samples: np.ndarray
    if_ground_truth: np.ndarray

    def __post_init__(self):
        for name in ("amplitude_samples", "phase_samples", "if_ground_truth"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = len(self.amplitude_samples)
        if len(self.phase_samples) != n or len(self.if_ground_truth) != n:
            raise ValueError("tabulated component arrays must share one length")


@dataclass(frozen=True)
class ClassReport:
    """Measured slow-variation and separation parameters of a component set.

    ``epsilon_measured`` is the smallest bound satisfying both
    |A'| <= eps * phi' and |phi''| <= eps * phi' at every sample;
    ``d_measured`` is the smallest relative separation between adjacent IF
    curves (None for a single component). ``crossing_time`` marks the first
    sample where adjacent IF curves touch or cross (membership then fails
    regardless of the requested parameters), and ``positivity_time`` the
    first sample where an amplitude or IF fails to be positive.
    """

    epsilon_measured: float
    d_measured: float | None
    crossing_time: float | None = None
    positivity_time: float | None = None

    def is_member(self, epsilon: float, d: float) -> bool:
        if self.crossing_time is not None or self.positivity_time is not None:
            return False
        if self.epsilon_measured > epsilon:
            return False
        if self.d_measured is None:
            return True
        return self.d_measured >= d


def _eval_component(spec, times):
    """Return (A, A', phi, phi', phi'') sampled on ``times``."""
    if isinstance(spec, TabulatedComponent):
        if len(spec.phase_samples) != len(times):
            raise ValueError(
                "tabulated component grid length does not match the requested grid"
            )
        dt = times[1] - times[0] if len(times) > 1 else 1.0
        a = spec.amplitude_samples
        da = np.gradient(a, dt)
        ifq = spec.if_ground_truth
        difq = np.gradient(ifq, dt)
        return a, da, spec.phase_samples, ifq, difq
    amp = spec.amplitude
    ph = spec.phase
    return (
        amp.amplitude(times),
        amp.amplitude_slope(times),
        ph.phase(times),
        ph.ifreq(times),
        ph.ifreq_slope(times),
    )


def synthesize(specs, sample_rate: float, duration: float, start_time: float = 0.0) -> SampledSignal:
    """Superpose components on a uniform grid covering [start, start + duration).

    The sample count is ``round(duration * sample_rate)`` and every component
    is evaluated exactly at the grid times. Rejects sample rates at or below
    twice the largest instantaneous frequency on the grid.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("no components")
    if not sample_rate > 0 or not duration > 0:
        raise ValueError("sample_rate and duration must be positive")
    n = int(round(duration * sample_rate))
    if n < 2:
        raise ValueError("duration too short for the requested sample rate")
    times = start_time + np.arange(n) / sample_rate
    out = np.zeros(n, dtype=complex)
    max_if = -np.inf
    for spec in specs:
        a, _, phase, ifq, _ = _eval_component(spec, times)
        max_if = max(max_if, float(np.max(ifq)))
        out += a * np.exp(2j * np.pi * phase)
    if sample_rate <= 2.0 * max_if:
        raise ValueError(
            f"sample rate {sample_rate} violates the Nyquist bound: "
            f"largest instantaneous frequency on the grid is {max_if}"
        )
    return SampledSignal(out, sample_rate, start_time)


def ground_truth_if(spec, times) -> np.ndarray:
    """Exact instantaneous frequency of an analytic component on ``times``."""
    if isinstance(spec, TabulatedComponent):
        raise ValueError(
            "tabulated components carry no closed-form derivative; "
            "use their if_ground_truth samples instead"
        )
    return spec.phase.ifreq(np.asarray(times, dtype=float))


def validate_class(specs, sample_rate: float, duration: float, start_time: float = 0.0) -> ClassReport:
    """Measure slow-variation and separation parameters on the sample grid.

    Components must be ordered by increasing instantaneous frequency;
    adjacent curves that touch or cross are reported via ``crossing_time``.
    Membership for requested (epsilon, d) is answered by
    ``ClassReport.is_member``.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("no components")
    n = int(round(duration * sample_rate))
    times = start_time + np.arange(n) / sample_rate

    eps_measured = 0.0
    positivity_time = None
    ifs = []
    for spec in specs:
        a, da, _, ifq, difq = _eval_component(spec, times)
        bad = (a <= 0.0) | (ifq <= 0.0)
        if positivity_time is None and np.any(bad):
            positivity_time = float(times[np.argmax(bad)])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.maximum(np.abs(da), np.abs(difq)) / np.abs(ifq)
        eps_measured = max(eps_measured, float(np.max(ratios)))
        ifs.append(ifq)

    d_measured = None
    crossing_time = None
    if len(ifs) > 1:
        d_measured = np.inf
        for k in range(1, len(ifs)):
            sep = (ifs[k] - ifs[k - 1]) / (ifs[k] + ifs[k - 1])
            if crossing_time is None and np.any(sep <= 0.0):
                crossing_time = float(times[np.argmax(sep <= 0.0)])
            d_measured = min(d_measured, float(np.min(sep)))
    return ClassReport(eps_measured, d_measured, crossing_time, positivity_time)


def make_class_member(epsilon: float, d: float, base_freq: float = 5.0, n_components: int = 2,
                      amplitudes=None) -> list[ComponentSpec]:
    """Build components whose measured class parameters equal the request.

    Component k is a linear chirp with start frequency ``base_freq * r^k``
    where ``r = (1 + d)/(1 - d)``, and chirp rate ``epsilon`` times the start
    frequency: the slow-variation ratio peaks at exactly ``epsilon`` (at
    t = 0) and the relative separation is exactly ``d`` at all times.
    """
    if not 0.0 <= epsilon:
        raise ValueError("epsilon must be nonnegative")
    if n_components > 1 and not 0.0 < d < 1.0:
        raise ValueError("d must lie in (0, 1) for more than one component")
    ratio = (1.0 + d) / (1.0 - d) if n_components > 1 else 1.0
    if amplitudes is None:
        amplitudes = [1.0] * n_components
    specs = []
    for k in range(n_components):
        fk = base_freq * ratio**k
        specs.append(
            ComponentSpec(ConstantAmplitude(amplitudes[k]), ChirpPhase(fk, epsilon * fk))
        )
    return specs


def add_white_noise(signal: SampledSignal, power: float, seed: int = 0) -> SampledSignal:
    """Add i.i.d. Gaussian noise of the given power (variance).

    Real inputs get real noise, complex inputs get complex circular noise;
    a fixed seed makes the output bit-reproducible.
    """
    if power < 0.0:
        raise ValueError(f"noise power must be nonnegative, got {power}")
    if power == 0.0:
        return signal
    rng = np.random.default_rng(seed)
    n = len(signal)
    sigma = np.sqrt(power)
    if signal.is_real:
        noise = rng.normal(0.0, sigma, n).astype(complex)
    else:
        noise = (rng.normal(0.0, sigma, n) + 1j * rng.normal(0.0, sigma, n)) / np.sqrt(2.0)
    return SampledSignal(signal.samples + noise, signal.sample_rate, signal.start_time)


def impulse_train(event_times, weights, sample_rate: float, duration: float) -> SampledSignal:
    """Discrete impulse train: weight * sample_rate at the nearest grid sample.

    Each impulse has unit area under the sampling measure, so a train with
    spacing ``s`` shows harmonics at multiples of ``1/s`` downstream.
    """
    event_times = np.asarray(event_times, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if event_times.shape != weights.shape:
        raise ValueError("event_times and weights must have matching shapes")
    if len(event_times) > 1 and np.any(np.diff(event_times) <= 0.0):
        raise ValueError("event_times must be strictly increasing")
    if len(event_times) and (event_times[0] < 0.0 or event_times[-1] > duration):
        raise ValueError("event times must lie within [0, duration]")
    n = int(round(duration * sample_rate))
    out = np.zeros(n, dtype=complex)
    if len(event_times):
        idx = np.clip(np.rint(event_times * sample_rate).astype(int), 0, n - 1)
        np.add.at(out, idx, weights * sample_rate)
    return SampledSignal(out, sample_rate, 0.0)
