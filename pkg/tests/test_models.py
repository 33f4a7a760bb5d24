"""Model-catalog tests: shapes, closures, class bands, functional solvers.

Reference values were frozen from the high-precision oracles in
tests/oracles.py (bisection and defining-series implementations, mpmath,
60+ significant digits).
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glemarket.errors import CapabilityError, DomainError, InputError
from glemarket.models import (
    ModelSpec,
    ShapeEvaluator,
    StockClass,
    Variant,
    classify_theta,
    closed_form_acf,
    force_evaluator,
    force_shape,
    identity_residual,
    observable_evaluator,
    observable_shape,
    solve_functional_shape,
    spectral_atom,
)
from glemarket.specfun import bessel_j0, lambda1

# frozen oracle values (root-finding at 60 digits)
BOLTZ_Y_AT_U10 = 0.11334431013315436
BOLTZ_G_AT_U10 = -1.1773251006140288
DIFF_Y_AT_U1 = 0.38713565619514461


def test_white_noise_shapes():
    m = ModelSpec.white_noise(tau_R=2.0)
    p = np.array([0.0, 0.5, 3.0])
    assert np.allclose(observable_shape(m, p), 1.0 / (1.0 + 2.0 * p), rtol=0, atol=1e-15)
    assert np.array_equal(force_shape(m, p), np.ones(3))
    # complex argument follows the same rational form
    z = 0.3 + 1.7j
    assert abs(observable_shape(m, z) - 1.0 / (1.0 + 2.0 * z)) < 1e-15


def test_self_similar_shape_closed_form():
    m = ModelSpec.linear_self_similar(tau_R=1.0)
    # at tau_R p = 2 the quadratic root is sqrt(2) - 1
    assert abs(observable_shape(m, 2.0) - (np.sqrt(2.0) - 1.0)) < 1e-15
    # force shape mirrors the observable shape
    p = np.geomspace(1e-3, 1e3, 25)
    assert np.array_equal(observable_shape(m, p), force_shape(m, p))


def test_self_similar_imaginary_axis_branch():
    # on p = i omega the real part is a semicircle that vanishes outside
    # the band |omega| tau_R / 2 > 1, on both half-axes
    m = ModelSpec.linear_self_similar(tau_R=2.0)
    inside = observable_shape(m, 1j * 0.6)
    assert abs(inside.real - np.sqrt(1.0 - 0.6**2)) < 1e-15
    outside = observable_shape(m, 1j * 1.8)
    assert outside.real == pytest.approx(0.0, abs=1e-15)
    assert abs(outside) < 1.0
    # conjugate symmetry across the real axis
    plus = observable_shape(m, 0.4 + 0.9j)
    minus = observable_shape(m, 0.4 - 0.9j)
    assert abs(plus - np.conj(minus)) < 1e-15


def test_stock_theta_shape_values():
    m = ModelSpec.stock_theta(tau_r=1.0, theta=2.0)
    # tau_R = 2, so at p = 1 the force shape is sqrt(2) - 1 and
    # y = 1/(1 + sqrt(2) - 1) = 1/sqrt(2)
    assert abs(observable_shape(m, 1.0) - 1.0 / np.sqrt(2.0)) < 1e-15
    # theta = 1 collapses onto the self-similar market shape
    m1 = ModelSpec.stock_theta(tau_r=3.0, theta=1.0)
    ref = ModelSpec.linear_self_similar(tau_R=3.0)
    p = np.geomspace(1e-2, 1e2, 40)
    assert np.allclose(observable_shape(m1, p), observable_shape(ref, p), rtol=0, atol=1e-14)
    # theta = 0 is the memoryless boundary: tau_R = 0 is a legal spec
    m0 = ModelSpec.stock_theta(tau_r=1.5, theta=0.0)
    assert m0.tau_R == 0.0
    assert np.allclose(observable_shape(m0, p), 1.0 / (1.0 + 1.5 * p), rtol=0, atol=1e-15)
    assert np.array_equal(force_shape(m0, p), np.ones_like(p))


def test_boltzmann_shape_against_oracle():
    m = ModelSpec.boltzmann(tau_R=0.5)
    assert abs(observable_shape(m, 20.0) - BOLTZ_Y_AT_U10) < 2e-15
    assert abs(force_shape(m, 20.0) - BOLTZ_G_AT_U10) < 2e-14
    assert observable_shape(m, 0.0) == 1.0
    assert force_shape(m, 0.0) == 1.0
    # force image turns negative beyond tau_R p = e (where W0(e^{1+u}) = u)
    assert force_shape(m, 2.0 * (np.e + 1e-6)) < 0.0
    assert force_shape(m, 2.0 * (np.e - 1e-6)) > 0.0


def test_differential_shape_against_oracle():
    m = ModelSpec.differential(tau_R=2.0)
    assert abs(observable_shape(m, 0.5) - DIFF_Y_AT_U1) < 2e-15
    assert observable_shape(m, 0.0) == 1.0
    assert force_shape(m, 0.0) == 1.0
    # g'(p) = tau_R y(p), by a centered difference
    h = 1e-6
    num = (force_shape(m, 0.5 + h) - force_shape(m, 0.5 - h)) / (2 * h)
    assert abs(num - 2.0 * observable_shape(m, 0.5)) < 1e-8


def test_fractional_closed_points():
    # theta = 1 makes the functional equation quadratic: y = sqrt(2) - 1
    m = ModelSpec.fractional(tau_r=1.0, theta=1.0)
    assert abs(solve_functional_shape(m, 2.0) - (np.sqrt(2.0) - 1.0)) < 1e-13
    # theta = 0 reduces to the memoryless stock shape
    m0 = ModelSpec.fractional(tau_r=2.0, theta=0.0)
    p = np.geomspace(1e-3, 1e3, 30)
    assert np.allclose(observable_shape(m0, p), 1.0 / (1.0 + 2.0 * p), rtol=0, atol=1e-15)


def test_scaling_limits_match_closed_forms():
    p = np.geomspace(1e-4, 1e4, 50)
    m0 = ModelSpec.scaling(tau_r=1.0, theta=0.0)
    assert np.allclose(observable_shape(m0, p), 1.0 / (1.0 + p), rtol=0, atol=1e-12)
    m1 = ModelSpec.scaling(tau_r=1.0, theta=1.0)
    ref = ModelSpec.linear_self_similar(tau_R=1.0)
    assert np.allclose(observable_shape(m1, p), observable_shape(ref, p), rtol=0, atol=1e-12)


@pytest.mark.parametrize("theta", [0.25, 0.5, 0.8, 1.5, 2.0, 3.0])
def test_scaling_solves_its_own_equation(theta):
    m = ModelSpec.scaling(tau_r=0.7, theta=theta)
    p = np.geomspace(1e-3, 1e3, 60)
    y = observable_shape(m, p)
    y_scaled = observable_shape(m, theta * p)
    resid = np.abs(y * (0.7 * p + y_scaled) - 1.0)
    assert np.max(resid) < 1e-11
    assert np.all(y > 0)
    if theta < 1.0:
        assert np.all(y <= 1.0) and np.all(np.diff(y) < 0)
    else:
        # theta > 1 solutions ride a bounded log-periodic modulation
        # (discrete scale invariance), so only boundedness is asserted
        assert np.all(y < 1.1)


@pytest.mark.parametrize("theta", [0.3, 0.9, 1.4, 2.5, 4.0])
def test_fractional_solves_its_own_equation(theta):
    m = ModelSpec.fractional(tau_r=1.3, theta=theta)
    p = np.geomspace(1e-3, 1e3, 60)
    y = observable_shape(m, p)
    resid = np.abs(y * (1.3 * p + y**theta) - 1.0)
    assert np.max(resid) < 1e-11


def test_identity_residual_all_variants_real_axis():
    p = np.geomspace(1e-3, 1e3, 40)
    specs = [
        ModelSpec.white_noise(1.0),
        ModelSpec.linear_self_similar(2.0),
        ModelSpec.stock_theta(tau_r=1.0, theta=0.6),
        ModelSpec.scaling(tau_r=1.0, theta=1.7),
        ModelSpec.fractional(tau_r=1.0, theta=2.4),
        ModelSpec.boltzmann(1.0),
        ModelSpec.differential(1.0),
    ]
    for m in specs:
        r = identity_residual(m, p)
        assert np.max(r) < 1e-10, m.variant


def test_identity_residual_complex_plane():
    rng = np.random.default_rng(7)
    p = rng.uniform(0.01, 20.0, 100) + 1j * rng.uniform(-20.0, 20.0, 100)
    for m in [
        ModelSpec.white_noise(0.8),
        ModelSpec.linear_self_similar(1.7),
        ModelSpec.stock_theta(tau_r=0.9, theta=1.3),
    ]:
        r = identity_residual(m, p)
        assert np.max(r) < 1e-12, m.variant


@settings(max_examples=150, deadline=None)
@given(
    theta=st.floats(0.0, 4.0),
    logp=st.floats(-3.0, 3.0),
)
def test_stock_identity_property(theta, logp):
    m = ModelSpec.stock_theta(tau_r=1.0, theta=theta)
    assert identity_residual(m, 10.0**logp) < 1e-12


@settings(max_examples=80, deadline=None)
@given(
    theta=st.floats(0.05, 4.0).filter(lambda t: abs(t - 1.0) > 0.02),
    logp=st.floats(-3.0, 3.0),
)
def test_scaling_identity_property(theta, logp):
    m = ModelSpec.scaling(tau_r=1.0, theta=theta)
    assert identity_residual(m, 10.0**logp) < 1e-10


def test_classify_theta_bands():
    assert classify_theta(0.0) is StockClass.HEAVY
    assert classify_theta(2.0 / 3.0 - 1e-9) is StockClass.HEAVY
    assert classify_theta(2.0 / 3.0) is StockClass.NEUTRAL
    assert classify_theta(1.0) is StockClass.NEUTRAL
    assert classify_theta(4.0 / 3.0) is StockClass.LIGHT
    assert classify_theta(2.0 - 1e-9) is StockClass.LIGHT
    assert classify_theta(2.0) is StockClass.ULTRA_LIGHT
    assert classify_theta(17.0) is StockClass.ULTRA_LIGHT
    with pytest.raises(DomainError):
        classify_theta(-0.1)
    assert ModelSpec.stock_theta(tau_r=1.0, theta=1.0).stock_class is StockClass.NEUTRAL
    assert ModelSpec.white_noise(1.0).stock_class is None


def test_closed_form_acfs():
    t = np.linspace(0.0, 10.0, 101)
    m = ModelSpec.white_noise(2.0)
    assert np.allclose(closed_form_acf(m, t), np.exp(-t / 2.0), rtol=0, atol=1e-15)
    m = ModelSpec.linear_self_similar(2.0)
    assert np.allclose(closed_form_acf(m, t), lambda1(t), rtol=0, atol=1e-15)
    m = ModelSpec.stock_theta(tau_r=1.0, theta=2.0)
    assert np.allclose(closed_form_acf(m, t), bessel_j0(t), rtol=0, atol=1e-15)
    m = ModelSpec.stock_theta(tau_r=1.0, theta=0.5)
    with pytest.raises(CapabilityError):
        closed_form_acf(m, t)
    with pytest.raises(CapabilityError):
        closed_form_acf(ModelSpec.boltzmann(1.0), t)


def test_constructor_validation():
    with pytest.raises(InputError):
        ModelSpec.white_noise(0.0)
    with pytest.raises(InputError):
        ModelSpec.white_noise(-1.0)
    with pytest.raises(InputError):
        ModelSpec.stock_theta(tau_r=0.0, theta=1.0)
    with pytest.raises(InputError):
        ModelSpec.stock_theta(tau_r=1.0, theta=-0.5)
    with pytest.raises(InputError):
        ModelSpec.stock_theta(tau_r=1.0)
    with pytest.raises(InputError):
        ModelSpec.stock_theta(tau_r=1.0, theta=1.0, tau_R=1.0)
    with pytest.raises(InputError):
        ModelSpec(Variant.WHITE_NOISE, tau_R=1.0, tau_r=1.0)
    with pytest.raises(InputError):
        ModelSpec.white_noise(1.0, variance=0.0)
    # theta and tau_R routes agree
    a = ModelSpec.stock_theta(tau_r=2.0, theta=1.5)
    b = ModelSpec.stock_theta(tau_r=2.0, tau_R=3.0)
    assert a == b


def test_domain_and_capability_errors():
    m = ModelSpec.boltzmann(1.0)
    with pytest.raises(CapabilityError):
        observable_shape(m, 1.0 + 1.0j)
    with pytest.raises(DomainError):
        observable_shape(m, -0.5)
    with pytest.raises(DomainError):
        observable_shape(ModelSpec.white_noise(1.0), -1.0 + 2.0j)
    with pytest.raises(CapabilityError):
        solve_functional_shape(ModelSpec.white_noise(1.0), 1.0)


def test_shape_evaluators():
    m = ModelSpec.stock_theta(tau_r=2.0, theta=1.5, variance=4.0)
    obs = observable_evaluator(m)
    frc = force_evaluator(m)
    assert obs.complex_capable and frc.complex_capable
    assert obs.image_zero == pytest.approx(4.0 * 2.0)
    assert frc.image_zero == pytest.approx(4.0 / 2.0)
    assert obs.transform_scale == pytest.approx(2.0)
    assert frc.transform_scale == pytest.approx(3.0)
    assert obs.peak_variance == pytest.approx(4.0)
    # force peak variance = image_zero / transform_scale = <x^2>/(tau_r tau_R)
    assert frc.peak_variance == pytest.approx(4.0 / (2.0 * 3.0))
    assert obs(0.0) == 1.0
    assert obs.image(0.0) == pytest.approx(8.0)
    # white force is a delta: no time-domain scale
    w = force_evaluator(ModelSpec.white_noise(1.0))
    assert w.transform_scale is None and w.peak_variance is None
    with pytest.raises(InputError):
        ShapeEvaluator(m, "other")


def test_scalar_array_round_trip():
    m = ModelSpec.linear_self_similar(1.0)
    assert isinstance(observable_shape(m, 1.0), float)
    assert isinstance(observable_shape(m, 1.0 + 0.5j), complex)
    out = observable_shape(m, np.array([0.0, 1.0]))
    assert out.shape == (2,) and out[0] == 1.0


def test_spectral_atom_closed_values():
    # omega = 1/(tau_r sqrt(theta-1)), weight = (theta-2)/(2(theta-1))
    om, w = spectral_atom(ModelSpec.stock_theta(tau_r=1.0, theta=2.5, variance=1.0))
    assert om == pytest.approx(1.0 / np.sqrt(1.5), rel=1e-14)
    assert w == pytest.approx(1.0 / 6.0, rel=1e-14)
    om, w = spectral_atom(ModelSpec.stock_theta(tau_r=2.0, theta=3.0, variance=1.0))
    assert om == pytest.approx(1.0 / (2.0 * np.sqrt(2.0)), rel=1e-14)
    assert w == pytest.approx(0.25, rel=1e-14)
    om, w = spectral_atom(ModelSpec.stock_theta(tau_r=0.5, theta=4.0, variance=1.0))
    assert om == pytest.approx(2.0 / np.sqrt(3.0), rel=1e-14)
    assert w == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_spectral_atom_none_and_errors():
    assert spectral_atom(ModelSpec.stock_theta(tau_r=1.0, theta=2.0, variance=1.0)) is None
    assert spectral_atom(ModelSpec.stock_theta(tau_r=1.0, theta=1.5, variance=1.0)) is None
    assert spectral_atom(ModelSpec.stock_theta(tau_r=1.0, theta=0.0, variance=1.0)) is None
    assert spectral_atom(ModelSpec.white_noise(1.0)) is None
    assert spectral_atom(ModelSpec.linear_self_similar(1.0)) is None
    for bad in (
        ModelSpec.boltzmann(1.0),
        ModelSpec.differential(1.0),
        ModelSpec.scaling(tau_r=1.0, theta=3.0),
        ModelSpec.fractional(tau_r=1.0, theta=3.0),
    ):
        with pytest.raises(CapabilityError):
            spectral_atom(bad)


def test_spectral_atom_is_a_pole_of_the_return_image():
    # residue of the normalized image at i*omega equals the line weight
    for theta, tau_r in ((2.5, 1.0), (3.0, 2.0), (4.0, 0.5), (10.0, 1.0)):
        m = ModelSpec.stock_theta(tau_r=tau_r, theta=theta, variance=1.0)
        om, w = spectral_atom(m)
        p = 1e-5 / tau_r + 1j * om
        residue = (p - 1j * om) * observable_shape(m, p) * tau_r
        assert abs(residue - w) < 3e-5


@given(st.floats(min_value=2.0, max_value=50.0, exclude_min=True))
@settings(max_examples=60, deadline=None)
def test_spectral_atom_lies_outside_the_force_band(theta):
    m = ModelSpec.stock_theta(tau_r=1.0, theta=theta, variance=1.0)
    om, w = spectral_atom(m)
    # the gap above the band edge is (theta-2)^2/(2 sqrt(theta-1)) + ...,
    # quadratically small at the boundary, so allow roundoff there
    assert om * m.tau_R >= 2.0 * (1.0 - 1e-12)
    if theta >= 2.001:
        assert om * m.tau_R > 2.0
    assert 0.0 < w < 0.5
