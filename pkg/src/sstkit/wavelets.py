"""Analyzing wavelets defined by a compactly supported frequency response.

The mother wavelets used here are specified directly in the frequency
domain: a real, nonnegative response supported on ``[1 - delta, 1 + delta]``
and centered at frequency 1, so the dilated copy at scale ``a`` responds to
signal content near frequency ``1/a`` and annihilates negative frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

_FAMILIES = ("bump", "box")


@dataclass(frozen=True)
class WaveletSpec:
    """Mother wavelet: named family plus half-width of its frequency support.

    Parameters
    ----------
    family : str
        ``"bump"`` is the smooth default; ``"box"`` is a flat, discontinuous
        response kept for closed-form checks only.
    delta : float
        Half-width of the support ``[1 - delta, 1 + delta]``; must lie in
        (0, 1) so the support stays strictly positive.
    """

    family: str = "bump"
    delta: float = 0.25

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(
                f"unknown wavelet family {self.family!r}; expected one of {_FAMILIES}"
            )
        if not 0.0 < float(self.delta) < 1.0:
            raise ValueError(f"wavelet delta must lie in (0, 1), got {self.delta}")


def frequency_response(wavelet: WaveletSpec, z) -> np.ndarray:
    """Evaluate the wavelet's frequency response at frequencies ``z``.

    The bump family is ``exp(1 - 1/(1 - x^2))`` with ``x = (z - 1)/delta``,
    C-infinity on the real line with peak value 1 at ``z = 1``.
    """
    z = np.asarray(z, dtype=float)
    x = (z - 1.0) / wavelet.delta
    out = np.zeros_like(z, dtype=float)
    inside = np.abs(x) < 1.0
    if wavelet.family == "bump":
        xi = x[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi * xi))
    else:
        out[inside] = 1.0
    return out


def admissibility_constant(wavelet: WaveletSpec) -> float:
    """Integral of ``response(z)/z`` over the support, by adaptive quadrature.

    This is the normalization that makes band inversion of the squeezed
    transform recover component amplitudes.
    """
    lo = 1.0 - wavelet.delta
    hi = 1.0 + wavelet.delta

    def integrand(z):
        return frequency_response(wavelet, np.array([z]))[0] / z

    value, _ = quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-10, limit=200)
    return float(value)


# Effective time-support radii are searched on a grid up to this many
# half-widths; families with slower envelope decay (box) hit the cap.
_RADIUS_CAP_FACTOR = 48.0


@lru_cache(maxsize=64)
def _support_radius_cached(family: str, delta: float, tol: float) -> float:
    wavelet = WaveletSpec(family, delta)
    cap = _RADIUS_CAP_FACTOR / delta
    du = 0.02 / delta
    u = np.arange(0.0, cap + du, du)
    # |psi(u)| = |integral of response(z) e^{2 pi i u z} dz|; the unit-modulus
    # carrier drops out of the modulus, leaving the envelope of the support.
    zg = np.linspace(1.0 - delta, 1.0 + delta, 4001)
    w = frequency_response(wavelet, zg)
    ph = np.exp(2j * np.pi * np.outer(u, zg))
    env = np.abs(np.trapezoid(ph * w[None, :], zg, axis=1))
    peak = env[0]
    above = np.nonzero(env >= tol * peak)[0]
    if len(above) == 0:
        return float(du)
    radius = u[above[-1]] + du
    return float(min(radius, cap))


def support_radius(wavelet: WaveletSpec, tol: float = 1e-3) -> float:
    """Radius beyond which the wavelet's time envelope stays below ``tol`` x peak.

    Computed numerically once per (family, delta, tol) and cached. The value
    is in wavelet time units; the dilated copy at scale ``a`` has radius
    ``a * support_radius(...)``.
    """
    return _support_radius_cached(wavelet.family, float(wavelet.delta), float(tol))
