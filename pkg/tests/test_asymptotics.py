import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.asymptotics import (
    DifferenceOperator,
    bulk_convergence,
    bulk_determinants,
    commutation_check,
    depoissonize_contour,
    descent_density,
    diagonal_frobenius_check,
    edge_convergence,
    first_row_cdf_exact,
    first_row_cdf_poisson,
    growth_monotonicity,
    limit_density,
    limit_shape_omega,
    profile,
    profile_distance,
    sandwich_check,
)
from plancherel.exact import corr_exact_descent, corr_poisson_series
from plancherel.partitions import Partition
from plancherel.sampling import rng_for, sample_plancherel


def test_omega_values():
    assert limit_shape_omega(0.0) == pytest.approx(4 / math.pi)
    assert limit_shape_omega(2.0) == pytest.approx(2.0)
    assert limit_shape_omega(-2.0) == pytest.approx(2.0)
    assert limit_shape_omega(3.0) == 3.0


def test_density_values():
    assert limit_density(0.0) == pytest.approx(0.5)
    assert limit_density(2.0) == 0.0
    assert limit_density(-2.0) == 1.0
    assert limit_density(5.0) == 0.0 and limit_density(-5.0) == 1.0


def test_density_is_slope_of_omega():
    a = np.linspace(-1.95, 1.95, 79)
    h = 1e-5
    slope = (limit_shape_omega(a + h) - limit_shape_omega(a - h)) / (2 * h)
    assert np.max(np.abs(limit_density(a) - (1 - slope) / 2)) < 1e-8


@given(st.lists(st.integers(1, 8), max_size=6))
def test_profile_is_lipschitz_and_matches_area(parts):
    lam = Partition(tuple(sorted(parts, reverse=True)))
    u = np.arange(-20, 21)
    w = profile(lam, u)
    assert np.all(np.abs(np.diff(w)) == 1)
    assert np.all(w >= np.abs(u))
    # the area between the profile and |u| is twice the number of boxes
    assert np.sum(w - np.abs(u)) == 2 * lam.n


def test_profile_distance_shrinks():
    rng = rng_for(4, 0)
    small = np.median([profile_distance(sample_plancherel(100, rng)) for _ in range(5)])
    large = np.median([profile_distance(sample_plancherel(4000, rng)) for _ in range(5)])
    assert large < small
    with pytest.raises(ValueError):
        profile_distance(Partition())


def test_descent_density_of_empty_region():
    lam = Partition((3, 1))
    # sites below -len are always in D
    assert descent_density([lam], -10.0) == 1.0


def test_bulk_examples():
    rep = bulk_convergence(0.0, 2, [1e6])
    assert abs(rep.rows[0].lhs) < 1e-2 and rep.rows[0].rhs == pytest.approx(0.0, abs=1e-16)
    rep = bulk_convergence(0.0, 1, [1e6])
    assert abs(rep.rows[0].lhs - 1 / math.pi) <= 1e-2
    with pytest.raises(ValueError):
        bulk_convergence(2.0, 0, [1e2])


def test_bulk_trend_along_decades():
    errs = [bulk_convergence(0.5, 1, [10.0 ** k]).error_at(10.0 ** k) for k in range(2, 7)]
    logs = np.log10(errs)
    assert logs[-1] < logs[0] - 1
    rep = bulk_determinants(0.5, 1e6, [(0, 1), (0, 1, 2)])
    assert rep.errors.max() < 2e-2


def test_edge_examples():
    rep = edge_convergence(0.0, 0.0, [1e2, 1e4])
    assert rep.error_at(1e4) <= 0.05
    assert rep.halved()
    rep = edge_convergence(5.0, 5.0, [1e3])
    assert abs(rep.rows[0].lhs) <= 1e-2 and abs(rep.rows[0].rhs) <= 1e-2


def test_depoissonize_constant_and_geometric():
    assert depoissonize_contour(lambda z: np.full_like(z, 0.7), 15) == pytest.approx(0.7, abs=1e-13)
    assert depoissonize_contour(lambda z: np.exp(-z / 2), 20, 512) == pytest.approx(2.0 ** -20, abs=1e-10)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(RuntimeWarning):
            depoissonize_contour(lambda z: np.exp(-z / 2), 40, 8)


def test_depoissonize_series_truncation():
    # B(theta) = e^{-theta} sum_{k <= N} rho(k, {0}) theta^k / k!, evaluated off the real axis
    N = 30
    coeffs = [float(corr_exact_descent(k, {0})) for k in range(N + 1)]

    def B(z):
        return np.exp(-z) * sum(c * z ** k / math.factorial(k) for k, c in enumerate(coeffs))

    assert depoissonize_contour(B, 10, 512) == pytest.approx(float(corr_exact_descent(10, {0})), abs=1e-6)


def test_first_row_cdf():
    assert first_row_cdf_exact(3, 1) == Fraction(1, 6)
    assert first_row_cdf_exact(3, 3) == 1
    lo, hi = first_row_cdf_poisson(2.0, 2)
    assert lo <= hi and hi - lo < 1e-20
    assert first_row_cdf_poisson(0.0, 0) == (1.0, 1.0)


@pytest.mark.parametrize("n", [8, 10, 12])
def test_sandwich(n):
    rep = sandwich_check(n)
    assert rep.holds
    assert rep.theta_minus == 0.0
    assert rep.fredholm_gap < 1e-10


def test_sandwich_example_and_monotone_in_x():
    rep = sandwich_check(10, [5])
    assert rep.holds
    values = [first_row_cdf_exact(10, k) for k in range(11)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_growth_monotone():
    assert growth_monotonicity(13)


def test_commutator():
    assert commutation_check(4.0, 0, 60) <= 1e-8
    base = commutation_check(2.0, 1, 40)
    assert commutation_check(2.0, 1, 40, const=5.0) == pytest.approx(base, abs=1e-12)
    with pytest.raises(ValueError):
        commutation_check(4.0, 0, 10)


def test_operator_preserves_support():
    op = DifferenceOperator(3.0, 2, np.arange(-3, 12))
    assert op.alpha(2) == 0.0
    f = np.zeros(15)
    f[5:] = np.arange(1, 11)  # supported on k >= 2
    g = op.matrix() @ f
    assert np.all(g[:5] == 0)


def test_diagonal_frobenius_poissonized():
    rep = diagonal_frobenius_check(12, poissonized=True)
    assert rep.errors.max() <= 0.1


@pytest.mark.xfail(strict=True, reason="fixed-n Frobenius correlations oscillate with the parity of n")
def test_diagonal_frobenius_fixed_n():
    rep = diagonal_frobenius_check(12)
    assert rep.errors.max() <= 0.1
