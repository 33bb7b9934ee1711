"""Fredholm determinants of truncated kernels.

Lattice kernels are cut to finite windows with a bound on the neglected
trace; the Airy kernel is discretised by Nystrom quadrature. Count
probabilities come from derivatives of det(1 - sum_j z_j K_j), taken exactly
with truncated power series ("jets") threaded through the elimination.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import linalg

from .kernels import (
    KernelFamily,
    bessel_row_for,
    j_kernel_matrix,
    k_kernel_matrix,
    l_kernel_matrix,
)
from .special import airy_ai_and_deriv, bessel_tail_bound

__all__ = [
    "TruncationError",
    "TruncatedOperator",
    "IntervalFamily",
    "j_tail_trace",
    "build_truncation",
    "gap_probability",
    "count_table",
    "count_distribution",
    "count_distribution_table",
    "joint_edge_cdf",
    "fredholm_det_L",
    "l_window_for",
    "resolvent_residual",
    "airy_nystrom",
    "airy_gap",
    "airy_count_table",
    "airy_edge_cdf",
]

MAX_WINDOW = 20000


class TruncationError(RuntimeError):
    """Requested accuracy not reachable within the size cap."""


@dataclass
class TruncatedOperator:
    """Dense symmetric matrix of a kernel on a finite window.

    ``points`` are lattice sites (or quadrature nodes, with the weights already
    folded symmetrically into ``matrix``). ``tail_bound`` bounds the trace of
    the discarded part of the operator.
    """

    points: np.ndarray
    matrix: np.ndarray
    tail_bound: float = 0.0
    blocks: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail bound must be nonnegative")

    @property
    def size(self) -> int:
        return len(self.points)

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.T))) if self.size else 0.0


@dataclass(frozen=True)
class IntervalFamily:
    """Disjoint half-open integer intervals [lo, hi); hi=None means +infinity."""

    intervals: tuple[tuple[int, int | None], ...]
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        spans = sorted((lo, math.inf if hi is None else hi) for lo, hi in self.intervals)
        for lo, hi in spans:
            if hi <= lo:
                raise ValueError(f"empty interval [{lo}, {hi})")
        for (a, b), (c, d) in zip(spans, spans[1:]):
            if c < b:
                raise ValueError("intervals must be pairwise disjoint")
        if self.weights and len(self.weights) != len(self.intervals):
            raise ValueError("one weight per interval")


# ---------------------------------------------------------------------------
# lattice truncations


def j_tail_trace(theta: float, upper: int) -> float:
    """Bound on sum_{k > upper} J(k, k; theta) = sum_{m > upper+1} (m - upper - 1) J_m^2.

    Bessel values from the row are summed directly; past the end of the row
    the explicit bound |J_nu| <= (x/2)^nu / nu! takes over.
    """
    if theta == 0:
        return 0.0
    base = upper + 1
    if base < 0:
        # the negative part contributes J(k,k) ~ 1 per site: no useful bound
        return math.inf
    row = bessel_row_for(theta, base + 2)
    m = np.arange(base + 1, row.N + 1)
    head = math.fsum((m - base) * row.values[base + 1:] ** 2)
    return head + bessel_tail_bound(theta, base, row.N - base)


def _window_upper(theta: float, lower: int, eps: float) -> int:
    upper = max(lower, 0)
    step = 8
    while j_tail_trace(theta, upper) > eps:
        upper += step
        step = min(2 * step, 256)
        if upper - lower > MAX_WINDOW:
            raise TruncationError(f"tail trace above {eps} with window size {MAX_WINDOW}")
    # back off to the smallest admissible upper end
    lo_u = max(lower, upper - step)
    while lo_u < upper and j_tail_trace(theta, upper - 1) <= eps:
        upper -= 1
    return upper


def build_truncation(family: KernelFamily, region, eps: float = 1e-12) -> TruncatedOperator:
    """Restrict a lattice kernel to ``region`` and cut infinite parts.

    ``region`` is an int s (the ray {s, s+1, ...}), a (lo, hi) pair with
    hi=None for +infinity (half-open), or an :class:`IntervalFamily`.
    For the Airy kernel, ``region`` is the real threshold s of [s, inf).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if family.tag == "Airy":
        nodes, mat = airy_nystrom([(float(region), None)])
        return TruncatedOperator(nodes, mat, tail_bound=_airy_tail(float(region) + AIRY_CUTOFF))
    if family.tag != "J":
        raise ValueError("lattice truncation is implemented for the J kernel")
    theta = float(family.theta)
    if isinstance(region, IntervalFamily):
        intervals = list(region.intervals)
    elif isinstance(region, (int, np.integer)):
        intervals = [(int(region), None)]
    else:
        intervals = [tuple(region)]
    pieces = []
    tail = 0.0
    for lo, hi in intervals:
        if hi is None:
            upper = _window_upper(theta, lo, eps) if theta > 0 else lo
            tail += j_tail_trace(theta, upper)
            pieces.append(np.arange(lo, upper + 1))
        else:
            pieces.append(np.arange(lo, hi))
    points = np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)
    mat = j_kernel_matrix(points, theta=theta) if len(points) else np.zeros((0, 0))
    mat = 0.5 * (mat + mat.T)
    return TruncatedOperator(points, mat, tail_bound=tail, blocks=pieces)


def _det_one_minus(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 1.0
    a = np.eye(len(mat)) - mat
    try:
        c = linalg.cholesky(a, lower=True)
        return float(np.prod(np.diag(c)) ** 2)
    except linalg.LinAlgError:
        sign, logdet = np.linalg.slogdet(a)
        return float(sign * math.exp(logdet))


def gap_probability(op: TruncatedOperator) -> float:
    """det(1 - K) on the window: the probability of no points there."""
    return _det_one_minus(op.matrix)


# ---------------------------------------------------------------------------
# jets: truncated multivariate power series, last axes = coefficient grid


class _JetAlgebra:
    def __init__(self, degrees: Sequence[int]):
        self.shape = tuple(int(d) + 1 for d in degrees)
        self.index = list(itertools.product(*(range(s) for s in self.shape)))
        self.flat = {idx: i for i, idx in enumerate(self.index)}
        self.size = len(self.index)
        # pairs (a, b) -> c with a + b = c inside the truncation box
        self.pairs_by_a: list[tuple[np.ndarray, np.ndarray]] = []
        for a in self.index:
            bs, cs = [], []
            for b in self.index:
                c = tuple(i + j for i, j in zip(a, b))
                if all(ci < si for ci, si in zip(c, self.shape)):
                    bs.append(self.flat[b])
                    cs.append(self.flat[c])
            self.pairs_by_a.append((np.array(bs, dtype=int), np.array(cs, dtype=int)))
        order = sorted(range(self.size), key=lambda i: sum(self.index[i]))
        self.graded = order

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        shape = np.broadcast_shapes(x.shape, y.shape)
        out = np.zeros(shape)
        for a, (bs, cs) in enumerate(self.pairs_by_a):
            if len(bs) == 0:
                continue
            out[..., cs] += x[..., a: a + 1] * y[..., bs]
        return out

    def inv(self, p: np.ndarray) -> np.ndarray:
        q = np.zeros_like(p)
        p0 = p[..., 0]
        q[..., 0] = 1.0 / p0
        for c in self.graded[1:]:
            ci = self.index[c]
            acc = np.zeros(p.shape[:-1])
            for b in range(self.size):
                bi = self.index[b]
                if b == c or any(u > v for u, v in zip(bi, ci)):
                    continue
                a = self.flat[tuple(v - u for u, v in zip(bi, ci))]
                acc = acc + p[..., a] * q[..., b]
            q[..., c] = -acc / p0
        return q

    def det(self, m: np.ndarray) -> np.ndarray:
        """Determinant of a matrix of jets, shape (n, n, size)."""
        m = m.copy()
        n = m.shape[0]
        det = np.zeros(self.size)
        det[0] = 1.0
        for k in range(n):
            piv = k + int(np.argmax(np.abs(m[k:, k, 0])))
            if m[piv, k, 0] == 0.0:
                raise ZeroDivisionError("singular factorization at z = 1")
            if piv != k:
                m[[k, piv]] = m[[piv, k]]
                det = -det
            pivot = m[k, k]
            det = self.mul(det, pivot)
            if k + 1 < n:
                f = self.mul(m[k + 1:, k], self.inv(pivot))
                m[k + 1:, k + 1:] -= self.mul(f[:, None, :], m[k, k + 1:][None, :, :])
        return det


def count_table(blocks: Sequence[np.ndarray], matrix: np.ndarray, degrees: Sequence[int]) -> np.ndarray:
    """P(|X cap I_j| = N_j for all j), for every N_j <= degrees[j].

    ``blocks[j]`` are index arrays into ``matrix`` for the j-th interval.
    Uses P = prod_j (-1)^{N_j} / N_j! * d^N det(1 - sum z_j K_j) at z = 1, i.e.
    (-1)^{|N|} times the Taylor coefficient in w = z - 1.
    """
    sizes = [len(b) for b in blocks]
    grid = math.prod(s + 1 for s in sizes)
    if grid <= TORUS_BUDGET and grid * matrix.shape[0] ** 3 <= TORUS_FLOPS:
        return _count_table_torus(blocks, matrix, degrees)
    alg = _JetAlgebra(degrees)
    n = matrix.shape[0]
    jet = np.zeros((n, n, alg.size))
    jet[:, :, 0] = np.eye(n) - matrix
    for j, idx in enumerate(blocks):
        unit = [0] * len(degrees)
        if degrees[j] == 0:
            continue
        unit[j] = 1
        # rows of block j pick up -w_j K
        jet[idx, :, alg.flat[tuple(unit)]] = -matrix[idx, :]
    coeffs = alg.det(jet).reshape(alg.shape)
    signs = np.ones(alg.shape)
    for idx in alg.index:
        signs[idx] = (-1) ** sum(idx)
    return coeffs * signs


TORUS_BUDGET = 4096
TORUS_FLOPS = 5e9


def _count_table_torus(blocks: Sequence[np.ndarray], matrix: np.ndarray, degrees: Sequence[int]) -> np.ndarray:
    """Same table from G(w) = det(1 - K + W K), W = diag(w_j on block j), sampled on roots of unity.

    G has degree len(block j) in w_j, so a grid of len + 1 points per block recovers every
    coefficient exactly. |G| <= 1 on the torus keeps the rounding error absolute.
    """
    n = matrix.shape[0]
    sizes = [len(b) for b in blocks]
    shape = tuple(s + 1 for s in sizes)
    base = np.eye(n) - matrix
    values = np.empty(shape, dtype=complex)
    for m in np.ndindex(shape):
        w = np.ones(n, dtype=complex)
        for j, idx in enumerate(blocks):
            w[idx] = np.exp(2j * np.pi * m[j] / shape[j])
        values[m] = np.linalg.det(base + w[:, None] * matrix)
    # c_N = (1/M) sum_m G(w_m) w_m^{-N}
    coeffs = np.fft.fftn(values).real / values.size
    out = np.zeros(tuple(d + 1 for d in degrees))
    keep = tuple(slice(0, min(d, s) + 1) for d, s in zip(degrees, sizes))
    out[keep] = coeffs[keep]
    return out


def count_distribution_table(theta: float, family: IntervalFamily, degrees: Sequence[int],
                             eps: float = 1e-12) -> np.ndarray:
    op = build_truncation(KernelFamily("J", theta=theta), family, eps)
    offsets = np.cumsum([0] + [len(b) for b in op.blocks])
    blocks = [np.arange(offsets[i], offsets[i + 1]) for i in range(len(op.blocks))]
    return count_table(blocks, op.matrix, degrees)


def count_distribution(theta: float, family: IntervalFamily, counts: Sequence[int],
                       eps: float = 1e-12) -> float:
    """P(|D(lambda) cap I_j| = N_j for all j) under the poissonized measure."""
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    table = count_distribution_table(theta, family, counts, eps)
    return float(table[tuple(counts)])


def _edge_intervals(a: Sequence[float]) -> list[int]:
    a = list(a)
    if any(x < y for x, y in zip(a, a[1:])):
        raise ValueError("thresholds must be nonincreasing")
    return [math.ceil(ai) - (i + 1) for i, ai in enumerate(a)]


def _admissible(counts: tuple[int, ...]) -> bool:
    total = 0
    for i, c in enumerate(counts):
        total += c
        if total > i:
            return False
    return True


def joint_edge_cdf(theta: float, a: Sequence[float], eps: float = 1e-12) -> float:
    """M^theta(lambda_i < a_i for i = 1..m), a_1 >= a_2 >= ... >= a_m.

    lambda_i >= a_i iff D(lambda) has at least i points in [ceil(a_i) - i, inf).
    """
    if len(a) < 1:
        raise ValueError("need at least one threshold")
    t = _edge_intervals(a)
    intervals = [(t[0], None)] + [(t[i], t[i - 1]) for i in range(1, len(t))]
    degrees = list(range(len(t)))
    table = count_distribution_table(theta, IntervalFamily(tuple(intervals)), degrees, eps)
    return float(sum(table[idx] for idx in itertools.product(*(range(d + 1) for d in degrees))
                     if _admissible(idx)))


# ---------------------------------------------------------------------------
# det(1 + L) on half-integers


def l_window_for(theta: float, eps: float = 1e-14) -> int:
    """Smallest W with Hilbert-Schmidt norm of L outside |x| <= W + 1/2 below eps."""
    if theta == 0:
        return 0
    # c(k) = theta^{k+1/2} / (k!)^2 bounds sum_y L(x, y)^2 / C for |x| = k + 1/2
    logc = lambda k: (k + 0.5) * math.log(theta) - 2 * math.lgamma(k + 1)  # noqa: E731
    total = 0.0
    k = 0
    while True:
        total += math.exp(logc(k))
        if k > theta and math.exp(logc(k)) < 1e-300:
            break
        k += 1
    W = 0
    while True:
        tail = 0.0
        j = W + 1
        while True:
            t = math.exp(logc(j))
            tail += t
            if j > theta and t < 1e-30 * max(tail, 1e-300):
                break
            j += 1
        if math.sqrt(2.0 * 2.0 * tail * total) < eps:
            return W
        W += 1


def _half_window(W: int) -> list[float]:
    return [k + 0.5 for k in range(-W - 1, W + 1)]


def fredholm_det_L(theta: float, window: int | None = None) -> tuple[float, int]:
    """det(1 + [L]) on half-integers |x| <= W + 1/2; returns (value, W)."""
    W = l_window_for(theta) if window is None else int(window)
    pts = _half_window(W)
    L = l_kernel_matrix(pts, theta)
    sign, logdet = np.linalg.slogdet(np.eye(len(pts)) + L)
    return float(sign * math.exp(logdet)), W


def resolvent_residual(theta: float, window: int | None = None) -> float:
    """max |K - L (1 + L)^{-1}| on the half-integer window."""
    W = l_window_for(theta) if window is None else int(window)
    pts = _half_window(W)
    L = l_kernel_matrix(pts, theta)
    K = k_kernel_matrix(pts, theta)
    lhs = np.linalg.solve((np.eye(len(pts)) + L).T, L.T).T  # L (1 + L)^{-1}
    return float(np.max(np.abs(K - lhs)))


# ---------------------------------------------------------------------------
# Airy kernel via Nystrom quadrature

AIRY_CUTOFF = 40.0
AIRY_CLUSTER = 3.0


def _airy_tail(x: float) -> float:
    # trace of the Airy kernel on [x, inf) = int_0^inf t Ai(x + t)^2 dt, x >= 2
    from .special import airy

    zeta = 2.0 / 3.0 * x ** 1.5
    return float(max(airy(x), 1e-300) ** 2 / max(x, 1.0) * 10.0) if zeta < 700 else 0.0


@lru_cache(maxsize=64)
def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _nodes(lo: float, hi: float | None, order: int) -> tuple[np.ndarray, np.ndarray]:
    u, w = _gl(order)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    if hi is None:
        # exponential clustering towards lo on [lo, lo + cutoff]
        c, kap = AIRY_CUTOFF, AIRY_CLUSTER
        scale = c / math.expm1(kap)
        x = lo + scale * np.expm1(kap * u)
        dx = scale * kap * np.exp(kap * u)
        return x, w * dx
    return lo + (hi - lo) * u, w * (hi - lo)


def airy_nystrom(intervals: Sequence[tuple[float, float | None]], order: int = 80):
    """Nodes and the symmetrised Nystrom matrix sqrt(w_i) A(x_i, x_j) sqrt(w_j)."""
    xs, ws = [], []
    for lo, hi in intervals:
        x, w = _nodes(lo, hi, order)
        xs.append(x)
        ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    sw = np.sqrt(w)
    ai, aip = airy_ai_and_deriv(x)
    X, Y = x[:, None], x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / (X - Y)
    h = Y - X
    near = np.abs(h) < 1e-5
    diag = (aip ** 2 - x * ai ** 2)[:, None] - (ai ** 2)[:, None] * h / 2.0
    kern = np.where(near, diag, kern)
    kern = 0.5 * (kern + kern.T)
    mat = sw[:, None] * kern * sw[None, :]
    return x, mat


def airy_gap(s: float, order: int = 80) -> float:
    """det(1 - A) on [s, inf): the Tracy-Widom (beta = 2) distribution at s."""
    if order < 20:
        raise ValueError("order must be at least 20")
    _, mat = airy_nystrom([(float(s), None)], order)
    return _det_one_minus(mat)


def airy_count_table(intervals: Sequence[tuple[float, float | None]], degrees: Sequence[int],
                     order: int = 80) -> np.ndarray:
    blocks = []
    start = 0
    for _ in intervals:
        blocks.append(np.arange(start, start + order))
        start += order
    _, mat = airy_nystrom(intervals, order)
    return count_table(blocks, mat, degrees)


def airy_edge_cdf(a: Sequence[float], order: int = 80) -> float:
    """P(zeta_i < a_i, i = 1..m) for the Airy ensemble, a nonincreasing."""
    a = [float(v) for v in a]
    if any(x < y for x, y in zip(a, a[1:])):
        raise ValueError("thresholds must be nonincreasing")
    intervals = [(a[0], None)] + [(a[i], a[i - 1]) for i in range(1, len(a)) if a[i] < a[i - 1]]
    # equal thresholds merge into one interval; map each i to its interval
    group = []
    g = 0
    for i in range(len(a)):
        if i > 0 and a[i] < a[i - 1]:
            g += 1
        group.append(g)
    ngroups = g + 1
    degrees = [0] * ngroups
    for i, gi in enumerate(group):
        degrees[gi] = i  # at most i - 1 ... i points may sit in the first groups
    degrees = [min(d, len(a) - 1) for d in degrees]
    table = airy_count_table(intervals, degrees, order)
    total = 0.0
    for idx in itertools.product(*(range(d + 1) for d in degrees)):
        ok = True
        for i in range(len(a)):
            # points above a_i = points in groups 0..group[i]
            if sum(idx[: group[i] + 1]) > i:
                ok = False
                break
        if ok:
            total += table[idx]
    return float(total)
