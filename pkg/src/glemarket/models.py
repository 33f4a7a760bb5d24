"""Model catalog: normalized Laplace-domain shapes of return autocorrelations.

Every model is described by two dimensionless shapes of the Laplace variable
p, both equal to 1 at p = 0:

* ``observable_shape`` y(p): the normalized image of the return ACF,
  C_obs(p) = <x^2> tau_corr y(p) with tau_corr the model's own
  correlation time (tau_R for market-level models, tau_r for stock-level).
* ``force_shape`` g(p): the normalized image of the driving-force ACF.

They are tied together by the memory-equation closure

    y(p) * [tau_corr * p + g(p)] = 1,

whose numerical violation ``identity_residual`` reports.  Shape kinds:

========== ================= =========== =====================================
variant     family            complex p   g(p) definition
========== ================= =========== =====================================
white       market            yes         1 (flat force spectrum)
selfsim     market            yes         g = y (force mirrors observable)
stock       stock             yes         market selfsim shape at tau_R
scaling     stock             no          g(p) = y(theta p)
fractional  stock             no          g(p) = y(p)^theta
boltzmann   market            no          g = 1 + ln y
differential market           no          d(force image)/dp = C_obs(p)/tau_R
========== ================= =========== =====================================

theta = tau_R / tau_r is the stock-family shape parameter; the class bands
are heavy [0, 2/3), neutral [2/3, 4/3), light [4/3, 2), ultra-light [2, inf).
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DomainError, InputError, SolverError
from .specfun import bessel_j0, lambda1, lambert_w0_exp, lambert_wm1_neg_exp


class Variant(enum.Enum):
    WHITE_NOISE = "white"
    LINEAR_SELF_SIMILAR = "selfsim"
    STOCK_THETA = "stock"
    SCALING = "scaling"
    FRACTIONAL = "fractional"
    BOLTZMANN = "boltzmann"
    DIFFERENTIAL = "differential"


_STOCK_FAMILY = {Variant.STOCK_THETA, Variant.SCALING, Variant.FRACTIONAL}
_COMPLEX_CAPABLE = {Variant.WHITE_NOISE, Variant.LINEAR_SELF_SIMILAR, Variant.STOCK_THETA}


class StockClass(enum.Enum):
    HEAVY = "heavy"
    NEUTRAL = "neutral"
    LIGHT = "light"
    ULTRA_LIGHT = "ultra-light"


# class band edges in theta = tau_R / tau_r
CLASS_EDGES = (2.0 / 3.0, 4.0 / 3.0, 2.0)


def classify_theta(theta):
    """Map theta = tau_R/tau_r onto its stock class band (left-closed)."""
    if not np.isfinite(theta) or theta < 0:
        raise DomainError("theta must be finite and >= 0")
    if theta < CLASS_EDGES[0]:
        return StockClass.HEAVY
    if theta < CLASS_EDGES[1]:
        return StockClass.NEUTRAL
    if theta < CLASS_EDGES[2]:
        return StockClass.LIGHT
    return StockClass.ULTRA_LIGHT


@dataclass(frozen=True)
class ModelSpec:
    """Immutable model description.

    tau_R is the market memory time; tau_r (stock family only) is the stock
    correlation time; ``variance`` is the equal-time second moment <x^2>.
    tau_R = 0 is allowed only in the stock family, expressing the theta = 0
    (memoryless force) boundary.
    """

    variant: Variant
    tau_R: float
    tau_r: float | None = None
    variance: float = 1.0

    def __post_init__(self):
        if not isinstance(self.variant, Variant):
            raise InputError("variant must be a Variant")
        if not (np.isfinite(self.variance) and self.variance > 0):
            raise InputError("variance must be positive and finite")
        if self.variant in _STOCK_FAMILY:
            if self.tau_r is None or not (np.isfinite(self.tau_r) and self.tau_r > 0):
                raise InputError("stock-family models require tau_r > 0")
            if not (np.isfinite(self.tau_R) and self.tau_R >= 0):
                raise InputError("stock-family models require tau_R >= 0")
        else:
            if self.tau_r is not None:
                raise InputError(f"{self.variant.value} does not take tau_r")
            if not (np.isfinite(self.tau_R) and self.tau_R > 0):
                raise InputError("market-family models require tau_R > 0")

    # -- constructors ----------------------------------------------------
    @classmethod
    def white_noise(cls, tau_R, variance=1.0):
        return cls(Variant.WHITE_NOISE, tau_R, None, variance)

    @classmethod
    def linear_self_similar(cls, tau_R, variance=1.0):
        return cls(Variant.LINEAR_SELF_SIMILAR, tau_R, None, variance)

    @classmethod
    def stock_theta(cls, tau_r, theta=None, tau_R=None, variance=1.0):
        return cls(Variant.STOCK_THETA, _resolve_tau_R(tau_r, theta, tau_R), tau_r, variance)

    @classmethod
    def scaling(cls, tau_r, theta=None, tau_R=None, variance=1.0):
        return cls(Variant.SCALING, _resolve_tau_R(tau_r, theta, tau_R), tau_r, variance)

    @classmethod
    def fractional(cls, tau_r, theta=None, tau_R=None, variance=1.0):
        return cls(Variant.FRACTIONAL, _resolve_tau_R(tau_r, theta, tau_R), tau_r, variance)

    @classmethod
    def boltzmann(cls, tau_R, variance=1.0):
        return cls(Variant.BOLTZMANN, tau_R, None, variance)

    @classmethod
    def differential(cls, tau_R, variance=1.0):
        return cls(Variant.DIFFERENTIAL, tau_R, None, variance)

    # -- derived attributes ----------------------------------------------
    @property
    def is_stock_family(self):
        return self.variant in _STOCK_FAMILY

    @property
    def theta(self):
        if not self.is_stock_family:
            return None
        return self.tau_R / self.tau_r

    @property
    def corr_time(self):
        """The model's own correlation time: integral of its normalized ACF."""
        return self.tau_r if self.is_stock_family else self.tau_R

    @property
    def complex_capable(self):
        return self.variant in _COMPLEX_CAPABLE

    @property
    def stock_class(self):
        if not self.is_stock_family:
            return None
        return classify_theta(self.theta)


def _resolve_tau_R(tau_r, theta, tau_R):
    if (theta is None) == (tau_R is None):
        raise InputError("give exactly one of theta or tau_R")
    if theta is not None:
        if not (np.isfinite(theta) and theta >= 0):
            raise InputError("theta must be >= 0")
        return float(theta) * float(tau_r)
    return float(tau_R)


def _validate_p(model, p):
    """Common p validation; returns (array, was_scalar)."""
    arr = np.asarray(p)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            if not model.complex_capable:
                raise CapabilityError(
                    f"{model.variant.value} shape is defined on the real axis only"
                )
            if np.any(arr.real < 0):
                raise DomainError("shapes are defined for Re p >= 0")
            if not np.all(np.isfinite(arr)):
                raise DomainError("p must be finite")
            return arr.astype(complex), scalar
        arr = arr.real
    arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("p must be finite")
    if np.any(arr < 0):
        raise DomainError("shapes are defined for Re p >= 0")
    return arr, scalar


def _out(scalar, values):
    if scalar:
        v = np.asarray(values).reshape(-1)[0]
        return complex(v) if np.iscomplexobj(values) else float(v)
    return values


def _selfsim_shape(tau_R, p):
    # root of y^2 + tau_R p y = 1 that is 1 at p = 0, written in the
    # cancellation-free reciprocal form (the denominator never vanishes for
    # Re p >= 0); principal sqrt keeps conjugate symmetry and the correct
    # branch on the closed right half-plane
    u = 0.5 * tau_R * p
    return 1.0 / (np.sqrt(1.0 + u * u) + u)


def observable_shape(model, p):
    """Normalized observable image y(p), with y(0) = 1 exactly."""
    arr, scalar = _validate_p(model, p)
    v = model.variant
    if v is Variant.WHITE_NOISE:
        y = 1.0 / (1.0 + model.tau_R * arr)
    elif v is Variant.LINEAR_SELF_SIMILAR:
        y = _selfsim_shape(model.tau_R, arr)
    elif v is Variant.STOCK_THETA:
        y = 1.0 / (model.tau_r * arr + _selfsim_shape(model.tau_R, arr))
    elif v is Variant.BOLTZMANN:
        y = 1.0 / np.atleast_1d(lambert_w0_exp(1.0 + model.tau_R * arr))
        y[arr == 0] = 1.0  # anchor the normalization exactly
    elif v is Variant.DIFFERENTIAL:
        y = 1.0 / (_differential_v(model.tau_R, arr) - 1.0)
        y[arr == 0] = 1.0
    else:
        y = solve_functional_shape(model, arr)
    return _out(scalar, y)


def force_shape(model, p):
    """Normalized force image g(p), with g(0) = 1 exactly."""
    arr, scalar = _validate_p(model, p)
    v = model.variant
    if v is Variant.WHITE_NOISE:
        g = np.ones_like(arr)
    elif v is Variant.LINEAR_SELF_SIMILAR:
        g = _selfsim_shape(model.tau_R, arr)
    elif v is Variant.STOCK_THETA:
        g = _selfsim_shape(model.tau_R, arr) if model.tau_R > 0 else np.ones_like(arr)
    elif v is Variant.BOLTZMANN:
        u = model.tau_R * arr
        g = np.atleast_1d(lambert_w0_exp(1.0 + u)) - u
        g[arr == 0] = 1.0
    elif v is Variant.DIFFERENTIAL:
        u = model.tau_R * arr
        g = (_differential_v(model.tau_R, arr) - 1.0) - u
        g[arr == 0] = 1.0
    elif v is Variant.SCALING:
        theta = model.theta
        g = solve_functional_shape(model, theta * arr) if theta > 0 else np.ones_like(arr)
    else:  # fractional
        theta = model.theta
        g = solve_functional_shape(model, arr) ** theta if theta > 0 else np.ones_like(arr)
    return _out(scalar, g)


def _differential_v(tau_R, arr):
    # v = -W_-1(-2 exp(-2 - tau_R p)), via v - ln v = (2 - ln 2) + tau_R p
    z = (2.0 - np.log(2.0)) + tau_R * arr
    return -np.atleast_1d(lambert_wm1_neg_exp(z))


# -- functional-equation solvers (scaling / fractional) -------------------

SOLVER_BUDGET = 200
SOLVER_TOL = 1e-12
RESIDUAL_LIMIT = 1e-10
_CHAIN_FLOOR = 1e-13   # tau_r * p below which y = 1 closes a chain
_CHAIN_CEILING = 1e13  # tau_r * p above which y = 1/(tau_r p) closes it
_CHAIN_MAX_DEPTH = 200_000


def solve_functional_shape(model, p):
    """Solve the self-referential shape equation of scaling/fractional models.

    scaling:    y(p) [tau_r p + y(theta p)] = 1
    fractional: y(p) [tau_r p + y(p)^theta] = 1

    Real p >= 0 only.  The returned values satisfy the defining equation with
    residual <= 1e-10 (checked; SolverError otherwise).

    The scaling equation couples p only along the lattice theta^k p, so its
    attracting solution for theta > 1 carries a bounded log-periodic
    modulation around the smooth envelope (a discrete-scale-invariance
    echo); it is the solution iterated substitution converges to, and it
    still satisfies the equation to the stated residual.
    """
    if model.variant not in (Variant.SCALING, Variant.FRACTIONAL):
        raise CapabilityError("functional solver applies to scaling/fractional models")
    arr0 = np.asarray(p)
    scalar = arr0.ndim == 0
    arr = np.atleast_1d(arr0).astype(float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("functional solver requires finite real p >= 0")
    if np.iscomplexobj(arr0):
        raise CapabilityError("functional solver is real-axis only")
    theta, tau_r = model.theta, model.tau_r
    if model.variant is Variant.FRACTIONAL:
        y = _solve_fractional(tau_r, theta, arr)
        resid = np.abs(y * (tau_r * arr + y**theta) - 1.0)
    else:
        y = _solve_scaling(tau_r, theta, arr)
        y_at_theta_p = _solve_scaling(tau_r, theta, theta * arr)
        resid = np.abs(y * (tau_r * arr + y_at_theta_p) - 1.0)
    worst = float(np.max(resid))
    if worst > RESIDUAL_LIMIT:
        raise SolverError("functional shape residual above 1e-10", residual=worst)
    return _out(scalar, y)


def _solve_fractional(tau_r, theta, arr):
    if theta == 0.0:
        return 1.0 / (1.0 + tau_r * arr)
    # f(y) = y (tau_r p + y^theta) - 1 increases on (0, 1]; f(1) >= 0
    lo = np.zeros_like(arr)
    hi = np.ones_like(arr)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        high = mid * (tau_r * arr + mid**theta) >= 1.0
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
    y = 0.5 * (lo + hi)
    y[arr == 0] = 1.0
    return y


def _solve_scaling(tau_r, theta, arr):
    if theta == 0.0:
        return 1.0 / (1.0 + tau_r * arr)
    if theta == 1.0:
        # the substitution chain is a self-loop; its fixed point is the
        # self-similar closed form, which we take directly
        return _selfsim_shape(tau_r, arr)
    out = np.ones_like(arr)
    pos = arr > 0
    if not np.any(pos):
        return out
    q = arr[pos]
    # substitution chain p, theta p, theta^2 p, ... closed where y is known
    # to 1e-13: y -> 1 below the floor, y -> 1/(tau_r p) above the ceiling
    if theta < 1.0:
        span = np.log(_CHAIN_FLOOR / (tau_r * np.max(q))) / np.log(theta)
    else:
        span = np.log(_CHAIN_CEILING / (tau_r * np.min(q))) / np.log(theta)
    depth = int(np.ceil(max(span, 1.0)))
    if depth > _CHAIN_MAX_DEPTH:
        raise SolverError(
            f"substitution chain for theta = {theta} exceeds {_CHAIN_MAX_DEPTH} levels",
            residual=np.inf,
        )
    nodes = q[:, None] * theta ** np.arange(depth + 1)[None, :]
    if theta > 1.0:
        y = 1.0 / (tau_r * nodes[:, -1])
    else:
        y = np.ones(q.size)
    # one ordered sweep from the closed end solves the chain exactly; extra
    # sweeps (budget 200) would only repeat it, so convergence is immediate
    for k in range(depth - 1, -1, -1):
        y = 1.0 / (tau_r * nodes[:, k] + y)
    out[pos] = y
    return out


# -- closed time-domain forms ------------------------------------------------

_THETA_SNAP = 1e-12


def closed_form_acf(model, tau):
    """Closed-form normalized ACF where one exists.

    white: exp(-tau/tau_R); selfsim: lambda1(2 tau/tau_R); stock at
    theta in {0, 1, 2}: exp(-tau/tau_r), lambda1(2 tau/tau_r), J0(tau/tau_r).
    Anything else raises CapabilityError.
    """
    t = np.asarray(tau)
    scalar = t.ndim == 0
    t = np.atleast_1d(t).astype(float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("lags must be finite and >= 0")
    v = model.variant
    if v is Variant.WHITE_NOISE:
        c = np.exp(-t / model.tau_R)
    elif v is Variant.LINEAR_SELF_SIMILAR:
        c = lambda1(2.0 * t / model.tau_R)
    elif v is Variant.STOCK_THETA:
        theta = model.theta
        if abs(theta - 0.0) <= _THETA_SNAP:
            c = np.exp(-t / model.tau_r)
        elif abs(theta - 1.0) <= _THETA_SNAP:
            c = lambda1(2.0 * t / model.tau_r)
        elif abs(theta - 2.0) <= _THETA_SNAP:
            c = bessel_j0(t / model.tau_r)
        else:
            raise CapabilityError(
                f"no closed ACF for stock theta = {theta}; use the transform or volterra route"
            )
    else:
        raise CapabilityError(f"no closed ACF for {v.value}")
    return _out(scalar, np.atleast_1d(c))


def identity_residual(model, p):
    """|y(p) [tau_corr p + g(p)] - 1| on the model's own correlation time."""
    y = observable_shape(model, p)
    g = force_shape(model, p)
    r = np.abs(y * (model.corr_time * np.asarray(p) + g) - 1.0)
    return _out(np.ndim(p) == 0, np.atleast_1d(r))


def spectral_atom(model):
    """Undamped spectral line of an ultra-light stock, or None.

    For theta > 2 the stock image 1/(p + g(p)/tau_r) has a pole pair on the
    imaginary axis at a frequency outside the driving band, so the
    stationary process carries an undamped harmonic: the normalized ACF is
    c(t) = c_band(t) + 2 R cos(omega t) with exact parameters

        omega = 1 / (tau_r sqrt(theta - 1)),   R = (theta - 2) / (2 (theta - 1)).

    Returns (omega, R), or None when the model has no such line (stock
    theta <= 2, white noise, self-similar market).  Models whose force
    relation is not the closed stock form raise CapabilityError.
    """
    v = model.variant
    if v in (Variant.WHITE_NOISE, Variant.LINEAR_SELF_SIMILAR):
        return None
    if v is not Variant.STOCK_THETA:
        raise CapabilityError(
            f"spectral line analysis is not available for {v.value}"
        )
    theta = model.theta
    if theta <= 2.0:
        return None
    omega = 1.0 / (model.tau_r * np.sqrt(theta - 1.0))
    weight = (theta - 2.0) / (2.0 * (theta - 1.0))
    return omega, weight


# -- shape evaluators for transform work --------------------------------------


@dataclass(frozen=True)
class ShapeEvaluator:
    """Callable bundle handed to the transform layer.

    ``transform_scale`` is the integral of the associated normalized
    time-domain ACF, i.e. the constant T with image(p) = T * shape(p) for
    the normalized ACF; None when the time-domain object is not an ordinary
    function (white force is a delta, boltzmann/differential forces are
    log-singular distributions).
    """

    model: ModelSpec
    kind: str = "observable"

    def __post_init__(self):
        if self.kind not in ("observable", "force"):
            raise InputError("kind must be 'observable' or 'force'")

    def __call__(self, p):
        fn = observable_shape if self.kind == "observable" else force_shape
        return fn(self.model, p)

    @property
    def complex_capable(self):
        return self.model.complex_capable

    @property
    def corr_time(self):
        return self.model.corr_time

    @property
    def transform_scale(self):
        m = self.model
        if self.kind == "observable":
            return m.corr_time
        if m.variant is Variant.LINEAR_SELF_SIMILAR:
            return m.tau_R
        if m.variant is Variant.STOCK_THETA and m.tau_R > 0:
            return m.tau_R
        return None

    @property
    def image_zero(self):
        """Dimensionful image at p = 0: <x^2> tau_corr or <x^2>/tau_corr."""
        m = self.model
        if self.kind == "observable":
            return m.variance * m.corr_time
        return m.variance / m.corr_time

    @property
    def peak_variance(self):
        """Time-domain value at lag 0 of the dimensionful ACF, when defined."""
        m = self.model
        if self.kind == "observable":
            return m.variance
        if self.transform_scale is None:
            return None
        return self.image_zero / self.transform_scale

    @property
    def freq_scale(self):
        """Highest angular frequency the image's singularities live at."""
        m = self.model
        scales = [2.0 / m.corr_time]
        if m.tau_R and m.tau_R > 0:
            scales.append(2.0 / m.tau_R)
        if m.tau_r:
            scales.append(2.0 / m.tau_r)
        return max(scales)

    def image(self, p):
        return self.image_zero * self(p)


def observable_evaluator(model):
    return ShapeEvaluator(model, "observable")


def force_evaluator(model):
    return ShapeEvaluator(model, "force")
