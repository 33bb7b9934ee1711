"""Exact combinatorics of integer partitions.

Partitions are the ground-truth layer: dimensions, Plancherel weights,
Frobenius and descent encodings, enumeration. Everything here is exact
(Python integers and ``fractions.Fraction``) except ``poissonized_weight``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

__all__ = [
    "Partition",
    "FrobeniusCoords",
    "IntegerPointSet",
    "HalfPointSet",
    "frobenius",
    "descent_set",
    "modified_frobenius",
    "modified_frobenius_symdiff",
    "dimension",
    "dimension_hook",
    "frobenius_det",
    "plancherel_weight",
    "poissonized_weight",
    "log_poissonized_weight",
    "enumerate_partitions",
    "partition_count",
]


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing tuple of positive parts."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        """Row length ``lambda_{i+1}`` (0-based), zero beyond the length."""
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def __repr__(self) -> str:
        return f"Partition{self.parts}"


@dataclass(frozen=True)
class FrobeniusCoords:
    d: int
    p: tuple[int, ...]
    q: tuple[int, ...]


@dataclass(frozen=True)
class IntegerPointSet:
    """Finite window of a subset of Z.

    ``cofinite_below`` records that the underlying set contains every integer
    below ``window[0]``.
    """

    points: tuple[int, ...]
    window: tuple[int, int]
    cofinite_below: bool = False

    def __contains__(self, x: int) -> bool:
        lo, hi = self.window
        if x < lo:
            return self.cofinite_below
        if x > hi:
            raise ValueError(f"{x} outside window {self.window}")
        return x in self._set

    @property
    def _set(self) -> frozenset[int]:
        return frozenset(self.points)


@dataclass(frozen=True)
class HalfPointSet:
    """Finite subset of Z + 1/2, stored as the odd integers ``2x``."""

    doubled: tuple[int, ...] = field(default=())

    def __post_init__(self):
        d = tuple(sorted(int(v) for v in self.doubled))
        if any(v % 2 == 0 for v in d):
            raise ValueError("doubled coordinates must be odd")
        if len(set(d)) != len(d):
            raise ValueError("points must be distinct")
        object.__setattr__(self, "doubled", d)

    @classmethod
    def from_values(cls, values) -> "HalfPointSet":
        doubled = []
        for v in values:
            w = Fraction(v) * 2
            if w.denominator != 1 or w.numerator % 2 == 0:
                raise ValueError(f"{v} is not a half-integer")
            doubled.append(int(w))
        return cls(tuple(doubled))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, 2) for v in self.doubled)

    def __len__(self) -> int:
        return len(self.doubled)


def frobenius(lam: Partition) -> FrobeniusCoords:
    parts = lam.parts
    conj = lam.conjugate().parts
    d = sum(1 for i, p in enumerate(parts) if p >= i + 1)
    p = tuple(parts[i] - i - 1 for i in range(d))
    q = tuple(conj[i] - i - 1 for i in range(d))
    return FrobeniusCoords(d, p, q)


def descent_set(lam: Partition, window: tuple[int, int]) -> IntegerPointSet:
    """{lambda_i - i : i >= 1} restricted to ``window`` (both ends included)."""
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    pts = []
    i = 1
    while True:
        v = lam[i - 1] - i
        if v < lo:
            break
        if v <= hi:
            pts.append(v)
        i += 1
    return IntegerPointSet(tuple(sorted(pts)), (lo, hi), cofinite_below=True)


def modified_frobenius(lam: Partition) -> HalfPointSet:
    f = frobenius(lam)
    return HalfPointSet(tuple(2 * pi + 1 for pi in f.p) + tuple(-2 * qi - 1 for qi in f.q))


def modified_frobenius_symdiff(lam: Partition) -> HalfPointSet:
    """Same set, built as (D(lam) + 1/2) symmetric-difference (Z_{<=0} - 1/2)."""
    lo = -len(lam) - 2
    hi = lam[0] + 1
    desc = set(descent_set(lam, (lo, hi)).points)
    shifted = {2 * k + 1 for k in desc}
    negative = {2 * k + 1 for k in range(lo, 0)}
    return HalfPointSet(tuple(shifted ^ negative))


def dimension_hook(lam: Partition) -> int:
    """Number of standard Young tableaux, by the hook-length product."""
    n = lam.n
    conj = lam.conjugate().parts
    hooks = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // hooks


def _det_fraction(m: list[list[Fraction]]) -> Fraction:
    # plain Gaussian elimination over Q
    a = [row[:] for row in m]
    size = len(a)
    det = Fraction(1)
    for k in range(size):
        piv = next((r for r in range(k, size) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, size):
            if a[r][k]:
                f = a[r][k] / a[k][k]
                for c in range(k, size):
                    a[r][c] -= f * a[k][c]
    return det


def frobenius_det(lam: Partition) -> Fraction:
    """det[1 / ((p_i + q_j + 1) p_i! q_j!)], which equals dim(lam)/|lam|!."""
    f = frobenius(lam)
    m = [
        [Fraction(1, (pi + qj + 1) * math.factorial(pi) * math.factorial(qj)) for qj in f.q]
        for pi in f.p
    ]
    return _det_fraction(m) if m else Fraction(1)


def dimension(lam: Partition, check: bool = True) -> int:
    dim = dimension_hook(lam)
    if check:
        via_det = frobenius_det(lam) * math.factorial(lam.n)
        if via_det != dim:
            raise ArithmeticError(f"hook formula mismatch for {lam}: {dim} != {via_det}")
    return dim


def plancherel_weight(lam: Partition) -> Fraction:
    return Fraction(dimension_hook(lam) ** 2, math.factorial(lam.n))


def log_poissonized_weight(lam: Partition, theta: float) -> float:
    n = lam.n
    if theta == 0:
        return 0.0 if n == 0 else -math.inf
    # log(dim) via exact integer -> float log is safe for huge integers
    log_dim = math.log(dimension_hook(lam)) if n else 0.0
    return -theta + n * math.log(theta) + 2 * (log_dim - math.lgamma(n + 1))


def poissonized_weight(lam: Partition, theta: float) -> float:
    if not math.isfinite(theta) or theta < 0:
        raise ValueError("theta must be finite and nonnegative")
    return math.exp(log_poissonized_weight(lam, theta))


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        yield Partition()
        return

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            yield Partition(tuple(prefix))
            return
        for first in range(min(remaining, cap), 0, -1):
            prefix.append(first)
            yield from rec(remaining - first, first, prefix)
            prefix.pop()

    yield from rec(n, n, [])


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def parts_from_sequence(seq: Sequence[int]) -> Partition:
    return Partition(tuple(p for p in seq if p > 0))
