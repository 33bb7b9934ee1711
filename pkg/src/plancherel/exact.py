"""Brute-force correlation functions over enumerated partitions.

Fixed-n correlations are exact rationals up to ``EXACT_CAP``; between that and
``ENUMERATION_CAP`` the Plancherel weights are floats. Poissonized series carry
a rigorous Poisson-tail remainder (every correlation lies in [0, 1]).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .kernels import _half, j_kernel_matrix, k_kernel_matrix
from .partitions import (
    Partition,
    dimension_hook,
    enumerate_partitions,
    frobenius,
)

__all__ = [
    "ENUMERATION_CAP",
    "EXACT_CAP",
    "SeriesValue",
    "PlancherelTable",
    "plancherel_table",
    "corr_exact_descent",
    "corr_exact_frobenius",
    "corr_poisson_series",
    "corr_poisson_det",
    "poisson_tail",
    "poisson_expectation",
    "descent_series_many",
    "frobenius_by_inclusion_exclusion",
]

ENUMERATION_CAP = 40
EXACT_CAP = 25


@dataclass(frozen=True)
class SeriesValue:
    value: float
    remainder: float
    terms: int

    def __float__(self) -> float:
        return self.value


class PlancherelTable:
    """All partitions of n with their Plancherel weights."""

    def __init__(self, n: int):
        if n > ENUMERATION_CAP:
            raise ValueError(f"n={n} beyond the enumeration cap {ENUMERATION_CAP}")
        self.n = n
        self.partitions = list(enumerate_partitions(n))
        fact = math.factorial(n)
        dims = [dimension_hook(lam) for lam in self.partitions]
        self.exact = n <= EXACT_CAP
        if self.exact:
            self.weights = [Fraction(d * d, fact) for d in dims]
        else:
            self.weights = [d * d / fact for d in dims]
        self.float_weights = np.array([float(w) for w in self.weights])
        length = max((len(lam) for lam in self.partitions), default=0) + 1
        rows = np.zeros((len(self.partitions), length), dtype=np.int64)
        for i, lam in enumerate(self.partitions):
            rows[i, : len(lam)] = lam.parts
        self.rows = rows  # zero-padded row lengths
        self._indicators: dict[tuple[int, int], np.ndarray] = {}
        self._frobenius: list[frozenset[int]] | None = None

    def descent_indicator(self, window: tuple[int, int]) -> np.ndarray:
        """Boolean matrix [x in D(lambda)] for x in window (inclusive)."""
        if window not in self._indicators:
            self._indicators[window] = self._descent_indicator(window)
        return self._indicators[window]

    def _descent_indicator(self, window: tuple[int, int]) -> np.ndarray:
        lo, hi = window
        out = np.zeros((len(self.partitions), hi - lo + 1), dtype=bool)
        for i, lam in enumerate(self.partitions):
            r = 1
            while (v := lam[r - 1] - r) >= lo:
                if v <= hi:
                    out[i, v - lo] = True
                r += 1
        return out

    def frobenius_sets(self) -> list[frozenset[int]]:
        """Modified Frobenius coordinates, doubled (odd integers)."""
        if self._frobenius is None:
            self._frobenius = self._frobenius_sets()
        return self._frobenius

    def _frobenius_sets(self) -> list[frozenset[int]]:
        out = []
        for lam in self.partitions:
            f = frobenius(lam)
            out.append(frozenset([2 * p + 1 for p in f.p] + [-2 * q - 1 for q in f.q]))
        return out


@lru_cache(maxsize=None)
def plancherel_table(n: int) -> PlancherelTable:
    return PlancherelTable(n)


def _check_n(n: int) -> None:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > ENUMERATION_CAP:
        raise ValueError(f"n={n} beyond the enumeration cap {ENUMERATION_CAP}")


def _sum_weights(table: PlancherelTable, mask: Iterable[bool]):
    mask = list(mask)
    if table.exact:
        return sum((w for w, m in zip(table.weights, mask) if m), Fraction(0))
    return math.fsum(w for w, m in zip(table.weights, mask) if m)


def corr_exact_descent(n: int, X: Iterable[int]):
    """M_n(X subset of D(lambda)); a Fraction for n <= EXACT_CAP, else a float."""
    _check_n(n)
    X = sorted(set(int(x) for x in X))
    table = plancherel_table(n)
    if not X:
        return _sum_weights(table, [True] * len(table.partitions))
    ind = table.descent_indicator((X[0], X[-1]))
    cols = [x - X[0] for x in X]
    return _sum_weights(table, ind[:, cols].all(axis=1))


def _doubled(X) -> list[int]:
    return sorted(int(2 * _half(x)) for x in X)


def corr_exact_frobenius(n: int, X: Iterable):
    """M_n(X subset of Fr(lambda)) for half-integer X."""
    _check_n(n)
    xs = set(_doubled(X))
    table = plancherel_table(n)
    return _sum_weights(table, (xs <= fr for fr in table.frobenius_sets()))


def poisson_tail(theta: float, kmax: int) -> float:
    """P(Poisson(theta) > kmax)."""
    if theta == 0:
        return 0.0
    terms = []
    k = kmax + 1
    log_theta = math.log(theta)
    while True:
        lt = -theta + k * log_theta - math.lgamma(k + 1)
        t = math.exp(lt)
        terms.append(t)
        ratio = theta / (k + 1)
        if ratio < 0.5 and t < 1e-30:
            terms.append(t * ratio / (1 - ratio))
            break
        k += 1
    return math.fsum(terms)


def _poisson_weights(theta: float, kmax: int) -> np.ndarray:
    if theta == 0:
        w = np.zeros(kmax + 1)
        w[0] = 1.0
        return w
    k = np.arange(kmax + 1)
    from scipy.special import gammaln

    return np.exp(-theta + k * math.log(theta) - gammaln(k + 1))


def poisson_expectation(theta: float, statistic: Callable[[Partition], float], N: int = 80) -> SeriesValue:
    """E_{M^theta}[statistic] for |statistic| <= 1, by enumeration up to min(N, cap)."""
    kmax = min(N, ENUMERATION_CAP)
    pw = _poisson_weights(theta, kmax)
    parts = []
    for k in range(kmax + 1):
        table = plancherel_table(k)
        vals = np.array([statistic(lam) for lam in table.partitions], dtype=float)
        parts.append(pw[k] * math.fsum(table.float_weights * vals))
    return SeriesValue(math.fsum(parts), poisson_tail(theta, kmax), kmax)


def corr_poisson_series(theta: float, X: Iterable, N: int = 80) -> SeriesValue:
    """e^{-theta} sum_{k <= N} rho(k, X) theta^k / k!, plus the Poisson tail.

    Integer ``X`` gives descent correlations, half-integer ``X`` Frobenius ones.
    Terms beyond the enumeration cap are folded into the remainder.
    """
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    X = list(X)
    kmax = min(N, ENUMERATION_CAP)
    pw = _poisson_weights(theta, kmax)
    half = any(Fraction(x).denominator != 1 for x in X)
    total = []
    for k in range(kmax + 1):
        c = corr_exact_frobenius(k, X) if half else corr_exact_descent(k, X)
        total.append(pw[k] * float(c))
    return SeriesValue(math.fsum(total), poisson_tail(theta, kmax), kmax)


def descent_series_many(theta: float, Xs: Sequence[Sequence[int]], N: int = 80) -> tuple[np.ndarray, float]:
    """corr_poisson_series for many integer sets at once; returns (values, remainder)."""
    kmax = min(N, ENUMERATION_CAP)
    allpts = [x for X in Xs for x in X]
    lo, hi = min(allpts), max(allpts)
    pw = _poisson_weights(theta, kmax)
    acc = np.zeros((kmax + 1, len(Xs)))
    for k in range(kmax + 1):
        table = plancherel_table(k)
        ind = table.descent_indicator((lo, hi))
        w = table.float_weights
        for j, X in enumerate(Xs):
            cols = [x - lo for x in X]
            acc[k, j] = math.fsum(w[ind[:, cols].all(axis=1)])
    values = np.array([math.fsum(pw * acc[:, j]) for j in range(len(Xs))])
    return values, poisson_tail(theta, kmax)


def corr_poisson_det(theta: float, X: Iterable) -> float:
    """det[J(x_i, x_j)] for integer X, det[K(x_i, x_j)] for half-integer X."""
    X = list(X)
    if not X:
        return 1.0
    if any(Fraction(x).denominator != 1 for x in X):
        return float(np.linalg.det(k_kernel_matrix(X, theta)))
    return float(np.linalg.det(j_kernel_matrix([int(x) for x in X], theta=theta)))


def frobenius_by_inclusion_exclusion(n: int, X: Iterable) -> Fraction:
    """rho(n, X) from descent correlations of X_+ - 1/2 and subsets of X_- - 1/2."""
    halves = [_half(x) for x in X]
    pos = [int(x - Fraction(1, 2)) for x in halves if x > 0]
    neg = [int(x - Fraction(1, 2)) for x in halves if x < 0]
    total = Fraction(0)
    for r in range(len(neg) + 1):
        for S in itertools.combinations(neg, r):
            total += (-1) ** r * Fraction(corr_exact_descent(n, pos + list(S)))
    return total
