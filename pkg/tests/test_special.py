import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special as sp

from plancherel.special import (
    airy,
    airy_ai_and_deriv,
    airy_bessel_rep,
    airy_deriv,
    airy_quad,
    bessel_j_row,
    bessel_j_series,
    bessel_tail_bound,
)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.0, 7.5, 40.0, 200.0, 2000.0])
def test_bessel_row_against_scipy(x):
    row = bessel_j_row(x, int(x + 15 * x ** (1 / 3)) + 60)
    ref = sp.jv(np.arange(row.N + 1), x)
    assert np.max(np.abs(row.values - ref)) < 1e-13
    assert row.normalization_residual() < 1e-12


def test_bessel_row_negative_orders():
    row = bessel_j_row(3.0, 10)
    assert row(-3) == pytest.approx(-row(3))
    assert row(-4) == pytest.approx(row(4))
    with pytest.raises(IndexError):
        row(11)
    with pytest.raises(ValueError):
        bessel_j_row(-1.0, 5)


def test_bessel_at_zero():
    row = bessel_j_row(0.0, 4)
    assert list(row.values) == [1.0, 0.0, 0.0, 0.0, 0.0]


@given(st.integers(0, 30), st.floats(0.01, 6.0))
def test_series_matches_recurrence(n, x):
    row = bessel_j_row(x, 40)
    assert bessel_j_series(n, x) == pytest.approx(row(n), abs=1e-12)


@given(st.floats(0.1, 50.0), st.integers(0, 30), st.integers(0, 30))
def test_tail_bound_dominates(theta, k, L):
    z = 2 * math.sqrt(theta)
    row = bessel_j_row(z, k + L + 400)
    ls = np.arange(L + 1, row.N - k + 1)
    actual = math.fsum(ls * row(k + ls) ** 2)
    assert actual <= bessel_tail_bound(theta, k, L) * (1 + 1e-12) + 1e-300


def test_tail_bound_value():
    assert bessel_tail_bound(1.0, 0, 20) < 1e-38
    assert bessel_tail_bound(0.0, 0, 1) == 0.0


@pytest.mark.parametrize("x", np.linspace(-15, 15, 61))
def test_airy_against_scipy(x):
    ai, aip, _, _ = sp.airy(x)
    a, ap = airy_ai_and_deriv(x)
    assert a == pytest.approx(ai, abs=5e-12)
    assert ap == pytest.approx(aip, abs=2e-11)


def test_airy_vectorized_shapes():
    x = np.linspace(-3, 3, 12).reshape(3, 4)
    a, ap = airy_ai_and_deriv(x)
    assert a.shape == (3, 4) and ap.shape == (3, 4)
    assert isinstance(airy(0.5), float | np.floating)


@pytest.mark.parametrize("x", [-6.0, -2.5, -0.7, 0.0, 0.4, 1.5, 4.0, 8.0])
def test_airy_independent_oracles(x):
    assert airy(x) == pytest.approx(airy_quad(x), abs=1e-11)
    assert airy(x) == pytest.approx(airy_bessel_rep(x), abs=1e-10)


def test_airy_zero_value():
    # Ai(0) = 3^{-2/3} / Gamma(2/3)
    assert airy_quad(0.0) == pytest.approx(0.3550280538878172, abs=1e-15)
    assert airy_deriv(0.0) == pytest.approx(-0.2588194037928068, abs=1e-15)


def test_airy_decay_exponent_is_two_thirds():
    # Ai(x) ~ exp(-zeta) / (2 sqrt(pi) x^{1/4}) with zeta = (2/3) x^{3/2}
    for x in (6.0, 10.0, 16.0):
        lead = math.exp(-2.0 / 3.0 * x ** 1.5) / (2 * math.sqrt(math.pi) * x ** 0.25)
        assert airy_quad(x) / lead == pytest.approx(1.0, abs=0.02)
        wrong = math.exp(-1.5 * x ** 1.5) / (2 * math.sqrt(math.pi) * x ** 0.25)
        assert airy_quad(x) / wrong > 1e3
