"""Numerical inversion of Laplace-domain ACF images, and spectral densities.

The inverter is the Euler-accelerated Fourier-series (Bromwich) method: for
each time t the image is sampled along the vertical line Re p = A/(2t),

    f(t) ~ (e^(A/2)/t) [ Re f(A/2t)/2 + sum_k (-1)^k Re f((A + 2 i pi k)/(2t)) ],

with binomial (Euler) averaging of the tail partial sums.  A = 23 puts the
series-truncation bias near 1e-10, which is also the double-precision noise
floor of the e^(A/2) prefactor; the pre-averaging term count adapts to the
image's frequency scale so oscillatory ACFs (light/ultra-light stocks) stay
resolved out to the requested horizon.

Only models whose shapes extend off the real axis can be inverted here;
the Lambert-type and functional-equation models are real-axis only and get
their ACFs from the time-domain evolution routines in ``volterra``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, CapabilityError, InputError
from .models import ShapeEvaluator
from .series import AcfSeries, SpectralDensity

EULER_A = 23.0
AVG_TERMS = 12
BASE_TERMS = 15
# spot check of f(conj p) = conj f(p); violations mean the image cannot be
# the transform of a real function and the cosine-series inversion is invalid
CONJUGATE_SYMMETRY_TOL = 1e-8


def _require_invertible(evaluator):
    if not isinstance(evaluator, ShapeEvaluator):
        raise InputError("evaluator must be a ShapeEvaluator")
    if not evaluator.complex_capable:
        raise CapabilityError(
            f"{evaluator.model.variant.value} images are defined on the real axis "
            "only; compute this ACF with the volterra evolution routines instead"
        )
    if evaluator.transform_scale is None:
        raise CapabilityError(
            f"the {evaluator.kind} ACF of {evaluator.model.variant.value} is not an "
            "ordinary function of time; there is nothing to invert"
        )


def _conjugate_residual(evaluator, p0):
    up = evaluator(p0)
    down = evaluator(np.conj(p0))
    return abs(down - np.conj(up)) / max(abs(up), 1e-300)


def invert_at(evaluator, times, tolerance=1e-6):
    """Invert the normalized ACF image at strictly positive times.

    Returns the normalized ACF values; raises AccuracyError carrying the
    worst internal error estimate if it exceeds ``tolerance``.
    """
    _require_invertible(evaluator)
    t = np.asarray(times, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if t.size == 0 or np.any(t <= 0) or not np.all(np.isfinite(t)):
        raise InputError("times must be finite and > 0")
    if not (0 < tolerance):
        raise InputError("tolerance must be positive")

    sym = _conjugate_residual(evaluator, (1.0 + 2.0j) / evaluator.corr_time)
    if sym > CONJUGATE_SYMMETRY_TOL:
        raise AccuracyError(
            "image violates conjugate symmetry; not a real ACF transform",
            achieved=sym,
        )

    scale = evaluator.transform_scale
    n0 = BASE_TERMS + int(math.ceil(1.8 * evaluator.freq_scale * float(np.max(t)) / math.pi))
    n_terms = n0 + AVG_TERMS + 1
    k = np.arange(n_terms + 1)
    p = (0.5 * EULER_A + 1j * math.pi * k[None, :]) / t[:, None]
    image = scale * np.asarray(evaluator(p.ravel())).reshape(p.shape)
    terms = np.real(image) * np.where(k % 2 == 0, 1.0, -1.0)[None, :]
    terms[:, 0] *= 0.5
    partial = np.cumsum(terms, axis=1)

    w = np.array([math.comb(AVG_TERMS, i) for i in range(AVG_TERMS + 1)], dtype=float)
    w /= 2.0**AVG_TERMS
    prefactor = math.exp(0.5 * EULER_A) / t
    vals = (partial[:, n0 : n0 + AVG_TERMS + 1] @ w) * prefactor
    shifted = (partial[:, n0 + 1 : n0 + AVG_TERMS + 2] @ w) * prefactor
    achieved = float(np.max(np.abs(vals - shifted)))
    if achieved > tolerance:
        raise AccuracyError(
            "inversion error estimate above requested tolerance", achieved=achieved
        )
    return float(vals[0]) if scalar else vals


def invert(evaluator, h, n_lags, tolerance=1e-6):
    """Invert an ACF image onto the uniform lag grid 0, h, ..., (n_lags-1) h.

    The lag-0 value is pinned to 1 by normalization after an initial-value
    cross-check of the image's large-p behavior; the rest comes from the
    Euler-accelerated series.  Returns a normalized AcfSeries whose variance
    is the dimensionful equal-time value of the requested ACF.
    """
    _require_invertible(evaluator)
    if not (h > 0 and np.isfinite(h)):
        raise InputError("h must be positive and finite")
    if not (isinstance(n_lags, (int, np.integer)) and n_lags >= 2):
        raise InputError("n_lags must be an integer >= 2")
    # initial-value theorem: p * image(p) -> c(0) = 1 as real p -> inf
    p_big = 1e7 / evaluator.corr_time
    c0 = p_big * evaluator.transform_scale * float(evaluator(p_big))
    if abs(c0 - 1.0) > 1e-3:
        raise AccuracyError(
            "image fails the initial-value check for a normalized ACF",
            achieved=abs(c0 - 1.0),
        )
    lags = h * np.arange(1, n_lags)
    values = np.concatenate(([1.0], invert_at(evaluator, lags, tolerance)))
    return AcfSeries(h=h, values=values, variance=evaluator.peak_variance)


def spectral_density(evaluator, omega):
    """One-sided spectral density S(w) = 2 * image(0) * Re shape(i w).

    Normalized so the equal-time variance is (1/pi) * integral of S over
    [0, inf).  Tiny negative excursions (below 1e-8 of the peak) are
    clamped to zero; anything larger raises AccuracyError since the shape
    should be positive-real on the imaginary axis.
    """
    _require_invertible(evaluator)
    w = np.asarray(omega, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise InputError("omega must be a 1-d array with at least 2 points")
    if np.any(w < 0) or np.any(np.diff(w) <= 0):
        raise InputError("omega must be nonnegative and strictly increasing")
    vals = 2.0 * evaluator.image_zero * np.real(evaluator(1j * w))
    # ultra-light stocks (theta > 2) carry an undamped spectral line outside
    # the force band, a delta the sampled continuous part cannot hold; a grid
    # point landing exactly on it evaluates 0/0, whose continuous limit is 0
    vals = np.where(np.isfinite(vals), vals, 0.0)
    peak = float(np.max(np.abs(vals))) if vals.size else 0.0
    floor = -1e-8 * peak
    if np.any(vals < floor):
        raise AccuracyError(
            "spectral density came out negative beyond roundoff",
            achieved=float(-np.min(vals)),
        )
    return SpectralDensity(omega=w, values=np.maximum(vals, 0.0))
