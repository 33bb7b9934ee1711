import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.kernels import (
    KernelFamily,
    airy_kernel,
    airy_kernel_integral,
    complement_kernel,
    diagonal_kernel_D,
    epsilon_sign,
    j_kernel_matrix,
    k_kernel_matrix,
    kernel_J,
    kernel_K,
    kernel_L,
    l_kernel_matrix,
    sine_kernel,
)
from plancherel.special import bessel_j_row

half = st.integers(-8, 7).map(lambda k: Fraction(2 * k + 1, 2))


def _series_rational(x, y, terms=40):
    # sum_m (-1)^m (x+y+m+2)_m / ((x+m+1)! (y+m+1)! m!) at theta = 1
    total = Fraction(0)
    for m in range(terms):
        rising = math.prod(range(x + y + m + 2, x + y + 2 * m + 2))
        total += Fraction((-1) ** m * rising, math.factorial(x + m + 1) * math.factorial(y + m + 1) * math.factorial(m))
    return total


def test_theta_zero_values():
    assert kernel_J(0, 0, 0.0) == 0.0
    assert kernel_J(3, -2, 0.0) == 0.0
    assert kernel_J(-1, -1, 0.0) == 1.0
    assert kernel_J(-1, -1, 0.0, mode="series") == 1.0


def test_j00_against_rational_series():
    assert kernel_J(0, 0, 1.0) == pytest.approx(float(_series_rational(0, 0)), abs=1e-15)
    assert kernel_J(2, 1, 1.0) == pytest.approx(float(_series_rational(2, 1)), abs=1e-15)


@pytest.mark.parametrize("theta", [1.0, 4.0, 25.0, 100.0])
def test_modes_agree(theta):
    pairs = [(0, 0), (3, 3), (-4, -4), (5, 1), (-7, 2), (10, 12), (20, 20), (-30, -29), (49, 50), (1, -1)]
    for x, y in pairs:
        auto = kernel_J(x, y, theta)
        assert kernel_J(x, y, theta, mode="series") == pytest.approx(auto, abs=1e-10)
        assert kernel_J(x, y, theta, mode="sum") == pytest.approx(auto, abs=1e-10)
        if x + y > -2:
            assert kernel_J(x, y, theta, mode="integral") == pytest.approx(auto, abs=1e-10)
        if x != y:
            assert kernel_J(x, y, theta, mode="ratio") == pytest.approx(auto, abs=1e-12)


def test_integral_mode_domain():
    with pytest.raises(ValueError):
        kernel_J(-1, -1, 1.0, mode="integral")
    with pytest.raises(ValueError):
        kernel_J(1, 1, 1.0, mode="ratio")


@given(st.integers(-20, 20), st.floats(0.1, 30.0))
def test_reflection(k, theta):
    assert 1 - kernel_J(k, k, theta) == pytest.approx(kernel_J(-k - 1, -k - 1, theta), abs=1e-12)


@given(st.integers(-15, 15), st.integers(-15, 15), st.floats(0.1, 30.0))
def test_shift_identity(x, y, theta):
    row = bessel_j_row(2 * math.sqrt(theta), 120)
    lhs = kernel_J(x + 1, y + 1, theta) - kernel_J(x, y, theta)
    assert lhs == pytest.approx(-row(x + 1) * row(y + 1), abs=1e-11)


@given(st.floats(0.1, 50.0))
def test_j_matrix_symmetric_and_matches_scalar(theta):
    pts = list(range(-6, 7))
    m = j_kernel_matrix(pts, theta=theta)
    assert np.allclose(m, m.T, atol=1e-13)
    assert m[3, 5] == pytest.approx(kernel_J(pts[3], pts[5], theta), abs=1e-14)


def test_k_kernel_examples():
    theta = 2.0
    row = bessel_j_row(2 * math.sqrt(theta), 40)
    assert kernel_K(0.5, -0.5, theta) == pytest.approx(math.sqrt(theta) * (row(0) ** 2 + row(1) ** 2), abs=1e-14)
    assert kernel_K(0.5, -0.5, 0.0) == 0.0
    with pytest.raises(ValueError):
        kernel_K(1, 0.5, 1.0)


@given(half, half, st.floats(0.1, 20.0))
def test_k_from_j(x, y, theta):
    jm = kernel_J(int(x - Fraction(1, 2)), int(y - Fraction(1, 2)), theta)
    if x == y:
        k = int(abs(x) - Fraction(1, 2))
        assert kernel_K(x, y, theta) == pytest.approx(kernel_J(k, k, theta), abs=1e-12)
    else:
        sgn = 1 if x > 0 else -1
        expected = sgn * epsilon_sign(x) * epsilon_sign(y) * jm
        assert kernel_K(x, y, theta) == pytest.approx(expected, abs=1e-12)


def test_l_kernel_examples():
    assert kernel_L(0.5, 1.5, 3.0) == 0.0
    assert kernel_L(0.5, -0.5, 3.0) == pytest.approx(math.sqrt(3.0))
    with pytest.raises(ValueError):
        kernel_L(1, 0.5, 1.0)


@given(half, half, st.floats(0.1, 10.0))
def test_l_antisymmetric(x, y, theta):
    assert kernel_L(x, y, theta) == pytest.approx(-kernel_L(y, x, theta), rel=1e-14)


def test_sine_kernel_examples():
    assert sine_kernel(0, 0.0) == 0.5
    assert sine_kernel(1, 0.0) == pytest.approx(1 / math.pi)
    assert sine_kernel(2, 0.0) == pytest.approx(0.0, abs=1e-16)
    assert sine_kernel(math.inf, 0.3) == 0.0
    assert all(sine_kernel(k, 2.0) == 0.0 for k in range(-3, 4))
    assert sine_kernel(0, -2.5) == 1.0 and sine_kernel(1, -2.5) == 0.0


def test_diagonal_kernel():
    assert diagonal_kernel_D(0.5, 0.5) == 0.5
    assert diagonal_kernel_D(0.5, 1.5) == pytest.approx(1 / math.pi)
    # opposite signs: cos(pi (x+y)/2) / (pi (x-y))
    assert diagonal_kernel_D(0.5, -0.5) == pytest.approx(1 / math.pi)


@pytest.mark.parametrize("x,y", [(0.0, 0.0), (-2.0, 1.0), (1.5, 1.5), (-3.0, -2.9), (2.0, 2.0 + 1e-7)])
def test_airy_kernel_against_integral(x, y):
    assert airy_kernel(x, y) == pytest.approx(airy_kernel_integral(x, y), abs=1e-9)


def test_kernel_family_dispatch():
    assert KernelFamily("J", theta=1.0)(0, 0) == pytest.approx(kernel_J(0, 0, 1.0))
    assert KernelFamily("Sine", a=0.0)(1, 0) == pytest.approx(1 / math.pi)
    with pytest.raises(ValueError):
        KernelFamily("J")
    with pytest.raises(ValueError):
        KernelFamily("Q", theta=1.0)


def test_complement_kernel_blocks():
    K = np.arange(9, dtype=float).reshape(3, 3)
    out = complement_kernel(K, [-1, 0, 1], [-1])
    assert out[0, 0] == 1 - K[0, 0]
    assert np.all(out[0, 1:] == -K[0, 1:])
    assert np.all(out[1:, :] == K[1:, :])
    with pytest.raises(ValueError):
        complement_kernel(K, [-1, 0, 1], [5])


@pytest.mark.parametrize("theta", [0.5, 3.0])
def test_k_is_conjugated_complement(theta):
    halves = [Fraction(2 * k + 1, 2) for k in range(-4, 4)]
    shifted = [int(x - Fraction(1, 2)) for x in halves]
    Jc = complement_kernel(j_kernel_matrix(shifted, theta=theta), shifted, [s for s in shifted if s < 0])
    eps = np.array([epsilon_sign(x) for x in halves], dtype=float)
    assert np.allclose(eps[:, None] * Jc * eps[None, :], k_kernel_matrix(halves, theta), atol=1e-13)


def test_l_matrix_shape():
    pts = [-1.5, -0.5, 0.5, 1.5]
    m = l_kernel_matrix(pts, 1.0)
    assert m.shape == (4, 4)
    assert np.allclose(m, -m.T)
