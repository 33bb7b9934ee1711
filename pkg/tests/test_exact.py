import itertools
from fractions import Fraction

import numpy as np
import pytest

from plancherel.exact import (
    corr_exact_descent,
    corr_exact_frobenius,
    corr_poisson_det,
    corr_poisson_series,
    descent_series_many,
    frobenius_by_inclusion_exclusion,
    plancherel_table,
    poisson_expectation,
    poisson_tail,
)


def test_small_correlations():
    assert corr_exact_descent(1, {0}) == 1
    assert corr_exact_descent(2, {1}) == Fraction(1, 2)
    assert corr_exact_frobenius(1, {Fraction(1, 2), Fraction(-1, 2)}) == 1
    assert corr_exact_descent(3, []) == 1


def test_cap_enforced():
    with pytest.raises(ValueError):
        corr_exact_descent(41, {0})
    with pytest.raises(ValueError):
        corr_exact_descent(-1, {0})


def test_table_exactness_switch():
    assert plancherel_table(25).exact
    assert not plancherel_table(26).exact
    assert abs(float(plancherel_table(26).float_weights.sum()) - 1) < 1e-12


@pytest.mark.parametrize("n", [4, 7, 10])
def test_inclusion_exclusion(n):
    halves = [Fraction(2 * k + 1, 2) for k in range(-3, 3)]
    for r in (1, 2, 3):
        for X in itertools.combinations(halves, r):
            assert frobenius_by_inclusion_exclusion(n, X) == corr_exact_frobenius(n, X)


def test_poisson_tail():
    from scipy.stats import poisson

    for theta, k in [(1.0, 5), (4.0, 10), (30.0, 40)]:
        assert poisson_tail(theta, k) == pytest.approx(poisson.sf(k, theta), rel=1e-10)
    assert poisson_tail(0.0, 3) == 0.0


@pytest.mark.parametrize("theta", [0.5, 2.0])
def test_series_matches_determinant(theta):
    for X in [(0,), (-1, 2), (-3, 0, 1), (0.5,), (-0.5, 1.5), (-2.5, -0.5, 0.5)]:
        s = corr_poisson_series(theta, X)
        assert abs(s.value - corr_poisson_det(theta, X)) <= s.remainder + 1e-12


def test_series_many_matches_single():
    sets = [(0,), (1, 2), (-2, 0, 3)]
    vals, rem = descent_series_many(1.5, sets)
    for v, X in zip(vals, sets):
        assert v == pytest.approx(corr_poisson_series(1.5, X).value, abs=1e-15)
    assert rem < 1e-20


def test_poisson_expectation_first_row():
    # M^theta(lambda_1 <= 0) = e^{-theta}
    s = poisson_expectation(2.0, lambda lam: float(lam[0] == 0))
    assert s.value == pytest.approx(np.exp(-2.0), rel=1e-14)
