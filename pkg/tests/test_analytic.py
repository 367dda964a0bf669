import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmc_american import DomainError, OptionKind, OptionSpec, bs_price, cnd, moro_inv_cnd
from qmc_american.analytic import bs_call_array
from qmc_american.oracles import inverse_cdf_bisection, normal_cdf_quadrature

spots = st.floats(1.0, 500.0)
strikes = st.floats(1.0, 500.0)
rates = st.floats(-0.05, 0.2)
vols = st.floats(0.01, 1.5)
maturities = st.floats(0.01, 5.0)


def test_cnd_at_zero_is_half():
    assert cnd(0.0) == 0.5


def test_cnd_matches_quadrature_at_975_quantile():
    assert abs(normal_cdf_quadrature(1.959964) - 0.975) < 1e-6
    assert cnd(1.959964) == pytest.approx(0.975, abs=1e-6)


@pytest.mark.parametrize("d", [-8.0, -5.0, -2.5, -1.0, -0.3, 0.0, 0.4, 1.7, 3.0, 6.0])
def test_cnd_against_quadrature(d):
    assert abs(cnd(d) - normal_cdf_quadrature(d)) < 1e-7


def test_cnd_symmetry_on_grid():
    d = np.linspace(-8, 8, 4001)
    assert np.max(np.abs(cnd(-d) + cnd(d) - 1.0)) < 1e-12


def test_cnd_is_monotone():
    d = np.linspace(-10, 10, 20001)
    assert np.all(np.diff(cnd(d)) >= 0)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_cnd_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        cnd(bad)


def test_cnd_array_shape_preserved():
    out = cnd(np.zeros((3, 2)))
    assert out.shape == (3, 2)


def test_moro_median_is_zero():
    assert moro_inv_cnd(0.5) == 0.0


@pytest.mark.parametrize("u", [0.01, 0.1, 0.25, 0.75, 0.9, 0.99])
def test_moro_roundtrip(u):
    assert abs(cnd(moro_inv_cnd(u)) - u) < 1e-6


def test_moro_against_bisection_oracle():
    oracle = inverse_cdf_bisection(0.975)
    assert oracle == pytest.approx(1.95996, abs=1e-4)
    assert moro_inv_cnd(0.975) == pytest.approx(1.95996, abs=1e-4)
    assert abs(moro_inv_cnd(0.975) - oracle) < 1e-8


def test_moro_monotone_and_antisymmetric():
    u = np.linspace(1e-9, 1 - 1e-9, 200001)
    z = moro_inv_cnd(u)
    assert np.all(np.diff(z) > 0)
    grid = np.linspace(0.001, 0.5, 5000)
    assert np.max(np.abs(moro_inv_cnd(1 - grid) + moro_inv_cnd(grid))) < 1e-9


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5, math.nan])
def test_moro_rejects_outside_open_interval(bad):
    with pytest.raises(DomainError):
        moro_inv_cnd(bad)


def test_moro_inverse_of_cnd_on_grid():
    u = np.linspace(0.001, 0.999, 1000)
    assert np.max(np.abs(cnd(moro_inv_cnd(u)) - u)) < 1e-6


def test_zero_vol_zero_rate_call_is_intrinsic():
    assert bs_price(OptionSpec(110, 100, 0.0, 0.0, 1.0)) == 10.0
    assert bs_price(OptionSpec(110, 100, 0.0, 1e-9, 1.0)) == pytest.approx(10.0, abs=1e-9)


def test_reference_call_and_put(reference_spec):
    # expected values from the lognormal quadrature oracle
    assert bs_price(reference_spec) == pytest.approx(10.4506, abs=5e-4)
    assert bs_price(reference_spec.replace(kind="put")) == pytest.approx(5.5735, abs=5e-4)


def test_zero_maturity_is_intrinsic():
    assert bs_price(OptionSpec(90, 100, 0.05, 0.3, 0.0, OptionKind.PUT)) == 10.0
    assert bs_price(OptionSpec(90, 100, 0.05, 0.3, 0.0)) == 0.0


def test_zero_volatility_uses_forward():
    spec = OptionSpec(100, 100, 0.05, 0.0, 2.0)
    assert bs_price(spec) == pytest.approx((100 * math.exp(0.1) - 100) * math.exp(-0.1), rel=1e-14)
    assert bs_price(spec.replace(kind="put")) == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(spot=0.0),
        dict(spot=-1.0),
        dict(strike=0.0),
        dict(volatility=-0.1),
        dict(maturity=-1.0),
        dict(rate=math.nan),
        dict(spot=math.inf),
    ],
)
def test_invalid_spec_rejected(kwargs):
    base = dict(spot=100.0, strike=100.0, rate=0.05, volatility=0.2, maturity=1.0)
    base.update(kwargs)
    with pytest.raises(DomainError):
        OptionSpec(**base)


@settings(max_examples=300, deadline=None)
@given(spots, strikes, rates, vols, maturities)
def test_put_call_parity(s, x, r, v, t):
    call = OptionSpec(s, x, r, v, t)
    put = call.replace(kind="put")
    parity = s - x * math.exp(-r * t)
    assert abs(bs_price(call) - bs_price(put) - parity) <= 1e-10 * max(s, x)


@settings(max_examples=200, deadline=None)
@given(spots, strikes, rates, vols, maturities)
def test_call_european_lower_bound(s, x, r, v, t):
    price = bs_price(OptionSpec(s, x, r, v, t))
    assert price >= max(s - x * math.exp(-r * t), 0.0) - 1e-10 * max(s, x)


@settings(max_examples=200, deadline=None)
@given(spots, strikes, rates, vols, maturities, st.floats(1.001, 1.5))
def test_call_monotonicity(s, x, r, v, t, bump):
    base = bs_price(OptionSpec(s, x, r, v, t))
    tol = 1e-12 * max(s, x)
    assert bs_price(OptionSpec(s * bump, x, r, v, t)) >= base - tol
    assert bs_price(OptionSpec(s, x, r, v * bump, t)) >= base - tol
    assert bs_price(OptionSpec(s, x * bump, r, v, t)) <= base + tol


def test_call_array_matches_scalar():
    spots_ = np.linspace(50, 150, 11)
    arr = bs_call_array(spots_, 100.0, 0.05, 0.2, 0.5)
    scalar = [bs_price(OptionSpec(s, 100.0, 0.05, 0.2, 0.5)) for s in spots_]
    np.testing.assert_allclose(arr, scalar, rtol=1e-13, atol=1e-13)
