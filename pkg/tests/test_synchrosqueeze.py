import numpy as np
import pytest

from conftest import random_band_signal, tone_signal

from sstkit import (
    ChirpPhase,
    ComponentSpec,
    ConstantAmplitude,
    SampledSignal,
    SqueezeConfig,
    TimeFrequencyPlane,
    TimeScalePlane,
    WaveletSpec,
    WindowSpec,
    bin_widths,
    cwt,
    cwt_time_derivative,
    default_epsilon,
    frequency_response,
    mad_epsilon,
    make_class_member,
    mstft,
    mstft_time_derivative,
    phase_transform,
    squeeze,
    support_radius,
    synthesize,
)
from sstkit.transforms import COI_ENVELOPE_TOL


def exact_tone_planes(xi=5.0, rate=64.0, duration=4.0, n_scales=32):
    """Closed-form wavelet plane of a unit tone and its exact derivative."""
    n = int(rate * duration)
    t = np.arange(n) / rate
    scales = 0.05 * (0.4 / 0.05) ** (np.arange(n_scales) / (n_scales - 1))
    values = (
        np.sqrt(scales)[:, None]
        * frequency_response(WaveletSpec(), scales * xi)[:, None]
        * np.exp(2j * np.pi * xi * t)[None, :]
    )
    coi = np.zeros(values.shape, dtype=bool)
    plane = TimeScalePlane(values, scales, t, coi)
    dplane = TimeScalePlane(2j * np.pi * xi * values, scales, t, coi)
    return plane, dplane


class TestPhaseTransform:
    @pytest.mark.parametrize("epsilon_scale", [0.0, 1e-9, 1e-3, 0.5])
    def test_tone_exact_for_any_threshold(self, epsilon_scale):
        plane, dplane = exact_tone_planes(xi=5.0)
        epsilon = epsilon_scale * np.max(np.abs(plane.values))
        phase = phase_transform(plane, dplane, epsilon)
        assert phase.valid_mask.any()
        assert np.max(np.abs(phase.omega[phase.valid_mask] - 5.0)) < 1e-9
        assert np.max(np.abs(phase.imag_residue[phase.valid_mask])) < 1e-9

    def test_all_zero_plane_is_all_masked(self):
        n = 32
        t = np.arange(n) / 8.0
        scales = np.geomspace(0.1, 1.0, 8)
        zero = np.zeros((8, n), dtype=complex)
        plane = TimeScalePlane(zero, scales, t, np.zeros((8, n), bool))
        phase = phase_transform(plane, plane, 0.0)
        assert not phase.valid_mask.any()

    def test_grid_mismatch_rejected(self):
        plane, dplane = exact_tone_planes()
        other = TimeScalePlane(
            plane.values, plane.scales * 2.0, plane.times, plane.coi_mask
        )
        with pytest.raises(ValueError, match="grids"):
            phase_transform(plane, other, 0.0)

    def test_pipeline_tone_both_backends(self):
        sig = tone_signal(5.0)
        w = cwt(sig, scale_range=(0.05, 0.5))
        dw = cwt_time_derivative(sig, scale_range=(0.05, 0.5))
        ph = phase_transform(w, dw, default_epsilon(w))
        assert np.max(np.abs(ph.omega[ph.valid_mask] - 5.0) / 5.0) < 1e-9

        window = WindowSpec("gaussian", 0.25)
        v = mstft(sig, window, freq_range=(0.5, 25.0), n_freqs=128)
        dv = mstft_time_derivative(sig, window, freq_range=(0.5, 25.0), n_freqs=128)
        ph = phase_transform(v, dv, default_epsilon(v))
        assert np.max(np.abs(ph.omega[ph.valid_mask] - 5.0) / 5.0) < 1e-7

    def test_linear_chirp_tracks_instantaneous_frequency(self):
        # local-frequency estimate vs an unwrapped-phase finite-difference oracle
        c = 2.0
        sig = synthesize([ComponentSpec(ConstantAmplitude(1.0), ChirpPhase(2.0, c))], 128.0, 8.0)
        window = WindowSpec("gaussian", 0.25)
        kw = dict(freq_range=(0.5, 30.0), n_freqs=128)
        v = mstft(sig, window, **kw)
        dv = mstft_time_derivative(sig, window, **kw)
        phase = phase_transform(v, dv, 0.3 * np.max(np.abs(v.values)))
        t = sig.times
        truth = 2.0 + c * t
        sigma_t = window.half_width / 3.0
        interior = slice(64, -64)
        rows, cols = np.nonzero(phase.valid_mask[:, interior])
        cols_global = cols + 64
        err = np.abs(phase.omega[:, interior][rows, cols] - truth[cols_global])
        assert np.max(err) <= c * sigma_t + 0.05

        fd_phase = np.unwrap(np.angle(v.values), axis=1)
        fd = np.gradient(fd_phase, 1.0 / 128.0, axis=1) / (2 * np.pi)
        err_vs_fd = np.abs(phase.omega - fd)[:, interior][rows, cols]
        assert np.percentile(err_vs_fd, 99) < 0.05


class TestSqueeze:
    def test_tone_lands_in_single_bin(self):
        sig = tone_signal(5.0)
        w = cwt(sig, scale_range=(0.05, 0.5))
        dw = cwt_time_derivative(sig, scale_range=(0.05, 0.5))
        ph = phase_transform(w, dw, default_epsilon(w))
        squeezed, report = squeeze(w, ph)
        nonzero_bins = np.count_nonzero(np.abs(squeezed.values) > 0.0, axis=0)
        assert np.all(nonzero_bins == 1)
        hot = np.argmax(np.abs(squeezed.values), axis=0)
        target = np.argmin(np.abs(squeezed.freqs - 5.0))
        assert np.all(hot == target)
        assert report.dropped_fraction == 0.0

    @pytest.mark.parametrize("backend", ["cwt", "stft"])
    def test_column_mass_conservation(self, backend, rng):
        sig = random_band_signal(rng, 64.0, 4.0)
        if backend == "cwt":
            plane = cwt(sig, scale_range=(0.05, 0.3), n_voices=8)
            dplane = cwt_time_derivative(sig, scale_range=(0.05, 0.3), n_voices=8)
            weights = plane.scales**-1.5 * plane.scales * plane.log_ratio
        else:
            window = WindowSpec("gaussian", 0.25)
            plane = mstft(sig, window, freq_range=(2.0, 26.0), n_freqs=48)
            dplane = mstft_time_derivative(sig, window, freq_range=(2.0, 26.0), n_freqs=48)
            weights = bin_widths(plane.freqs)
        eps = default_epsilon(plane)
        phase = phase_transform(plane, dplane, eps)
        squeezed, report = squeeze(plane, phase, SqueezeConfig(epsilon=eps))
        widths = bin_widths(squeezed.freqs)
        out_mass = (squeezed.values * widths[:, None]).sum(axis=0)
        eta = squeezed.freqs
        lo = eta[0] - 0.5 * (eta[1] - eta[0])
        hi = eta[-1] + 0.5 * (eta[-1] - eta[-2])
        contributing = (
            phase.valid_mask
            & (np.abs(plane.values) > eps)
            & (phase.omega > 0.0)
            & (phase.omega >= lo)
            & (phase.omega <= hi)
        )
        in_mass = (plane.values * weights[:, None] * contributing).sum(axis=0)
        scale = np.max(np.abs(in_mass))
        assert np.max(np.abs(out_mass - in_mass)) < 1e-10 * scale

    def test_two_tone_bands_match_brute_force_oracle(self):
        specs = make_class_member(0.0, 7.0 / 17.0, base_freq=5.0)
        sig = synthesize(specs, 64.0, 4.0)  # 256-sample instance
        plane = cwt(sig, scale_range=(0.04, 0.35), n_voices=16)
        dplane = cwt_time_derivative(sig, scale_range=(0.04, 0.35), n_voices=16)
        eps = default_epsilon(plane)
        phase = phase_transform(plane, dplane, eps)
        squeezed, _ = squeeze(plane, phase, SqueezeConfig(epsilon=eps))

        # independent cell-by-cell accumulation
        eta = squeezed.freqs
        widths = bin_widths(eta)
        oracle = np.zeros_like(squeezed.values)
        weights = plane.scales**-1.5 * plane.scales * plane.log_ratio
        lo = eta[0] - 0.5 * (eta[1] - eta[0])
        hi = eta[-1] + 0.5 * (eta[-1] - eta[-2])
        for j in range(plane.values.shape[0]):
            for n in range(plane.values.shape[1]):
                if not phase.valid_mask[j, n]:
                    continue
                if np.abs(plane.values[j, n]) <= eps:
                    continue
                om = phase.omega[j, n]
                if om <= 0.0 or om < lo or om > hi:
                    continue
                m = int(np.argmin(np.abs(eta - om)))
                oracle[m, n] += plane.values[j, n] * weights[j]
        oracle /= widths[:, None]
        assert np.max(np.abs(squeezed.values - oracle)) < 1e-12 * np.max(np.abs(oracle))

        # energy confined to two bands around 5 and 12 (exact here: the pow2
        # record makes integer-cycle tones circular-exact at every column)
        mag = np.abs(squeezed.values)
        near = ((np.abs(eta[:, None] - 5.0) < 0.5) | (np.abs(eta[:, None] - 12.0) < 1.2)).ravel()
        frac = mag[near].sum() / mag.sum()
        assert frac > 0.999

    def test_nonpositive_frequencies_dropped_and_counted(self):
        n = 16
        t = np.arange(n) / 8.0
        scales = np.geomspace(0.1, 1.0, 8)
        values = np.ones((8, n), dtype=complex)
        plane = TimeScalePlane(values, scales, t, np.zeros((8, n), bool))
        omega = np.full((8, n), 2.0)
        omega[0] = -1.0  # one row estimates a negative frequency
        from sstkit import PhasePlane

        phase = PhasePlane(omega, np.ones((8, n), bool), np.zeros((8, n)))
        squeezed, report = squeeze(plane, phase, SqueezeConfig(epsilon=0.0))
        assert report.n_dropped_cells == n
        assert 0.0 < report.dropped_fraction < 1.0

    def test_band_limit_restricts_rows(self):
        plane, dplane = exact_tone_planes(xi=5.0)
        phase = phase_transform(plane, dplane, 0.0)
        wide, _ = squeeze(plane, phase, SqueezeConfig(epsilon=0.0))
        narrow, _ = squeeze(plane, phase, SqueezeConfig(epsilon=0.0, band_limit=3.0))
        # scales outside [1/3, 3] are excluded; all tone mass sits inside anyway
        assert np.abs(narrow.values).sum() <= np.abs(wide.values).sum() + 1e-12

    def test_midway_tie_goes_to_lower_bin(self):
        n = 4
        t = np.arange(n) / 4.0
        freqs = np.array([1.0, 2.0, 3.0, 4.0])
        values = np.zeros((4, n), dtype=complex)
        values[1] = 1.0
        plane = TimeFrequencyPlane(values, freqs, t, np.zeros((4, n), bool))
        from sstkit import PhasePlane

        omega = np.zeros((4, n))
        omega[1] = 2.5  # exactly midway between bins 2.0 and 3.0
        phase = PhasePlane(omega, values != 0, np.zeros((4, n)))
        squeezed, _ = squeeze(plane, phase, SqueezeConfig(epsilon=0.0))
        assert np.all(np.abs(squeezed.values[1]) > 0)
        assert np.all(squeezed.values[2] == 0)

    def test_mad_threshold_positive_on_noisy_plane(self, rng):
        sig = random_band_signal(rng, 64.0, 4.0)
        plane = cwt(sig, scale_range=(0.05, 0.3), n_voices=8)
        assert mad_epsilon(plane) > 0.0


class TestConcentrationProperties:
    def test_magnitude_small_outside_component_scale_bands(self):
        # slow-variation class member: outside every band |a * IF - 1| < delta
        # the wavelet response vanishes, so plane magnitudes stay tiny
        epsilon = 1e-3
        specs = make_class_member(epsilon, 7.0 / 17.0, base_freq=5.0)
        sig = synthesize(specs, 128.0, 8.0)
        plane = cwt(sig, scale_range=(0.02, 0.45))
        t = sig.times
        delta = 0.25
        outside = np.ones(plane.values.shape, dtype=bool)
        for spec in specs:
            ifq = spec.phase.ifreq(t)
            outside &= np.abs(plane.scales[:, None] * ifq[None, :] - 1.0) >= delta
        interior = ~plane.coi_mask
        tilde = epsilon ** (1.0 / 3.0)
        assert np.max(np.abs(plane.values[outside & interior])) <= tilde
