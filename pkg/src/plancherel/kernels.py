"""Correlation kernels: discrete Bessel J, half-integer K and L, discrete sine,
the diagonal kernel D, and the Airy kernel.

Lattice kernels take integer (J) or half-integer (K, L, D) arguments; half
integers are accepted as floats or ``Fraction`` and validated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .special import airy_ai_and_deriv, bessel_j_row, BesselRow, _miller, bessel_j_series

__all__ = [
    "KernelParams",
    "SineParams",
    "KernelFamily",
    "bessel_row_for",
    "kernel_J",
    "j_kernel_matrix",
    "kernel_K",
    "k_kernel_matrix",
    "kernel_L",
    "l_kernel_matrix",
    "epsilon_sign",
    "sine_kernel",
    "diagonal_kernel_D",
    "airy_kernel",
    "airy_kernel_integral",
    "complement_kernel",
]

Mode = Literal["auto", "ratio", "series", "sum", "integral"]


@dataclass(frozen=True)
class KernelParams:
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta) or self.theta < 0:
            raise ValueError("theta must be finite and nonnegative")


@dataclass(frozen=True)
class SineParams:
    a: float
    k: float = 0


@dataclass(frozen=True)
class KernelFamily:
    """A tagged kernel; call it on a pair of points."""

    tag: Literal["J", "K", "L", "Sine", "Diagonal", "Airy"]
    theta: float | None = None
    a: float | None = None

    def __post_init__(self):
        if self.tag in ("J", "K", "L"):
            if self.theta is None:
                raise ValueError(f"kernel {self.tag} needs theta")
            KernelParams(self.theta)
        elif self.tag == "Sine":
            if self.a is None or not math.isfinite(self.a):
                raise ValueError("sine kernel needs a finite slope a")
        elif self.tag not in ("Diagonal", "Airy"):
            raise ValueError(f"unknown kernel tag {self.tag!r}")

    def __call__(self, x, y) -> float:
        if self.tag == "J":
            return kernel_J(int(x), int(y), self.theta)
        if self.tag == "K":
            return kernel_K(x, y, self.theta)
        if self.tag == "L":
            return kernel_L(x, y, self.theta)
        if self.tag == "Sine":
            return sine_kernel(int(x) - int(y), self.a)
        if self.tag == "Diagonal":
            return diagonal_kernel_D(x, y)
        return float(airy_kernel(x, y))


# ---------------------------------------------------------------------------
# discrete Bessel kernel J


def _tail_order(z: float) -> int:
    # J_m(z) < 1e-20 for m beyond this order
    return math.ceil(z + 14.0 * z ** (1.0 / 3.0) + 40)


def bessel_row_for(theta: float, max_order: int) -> BesselRow:
    """Bessel row at argument 2 sqrt(theta), long enough for diagonal tail sums."""
    z = 2.0 * math.sqrt(theta)
    return bessel_j_row(z, max(int(max_order) + 2, _tail_order(z)))


def _diag_from_row(row: BesselRow, ks: np.ndarray) -> np.ndarray:
    """J(k, k) = sum_{m > k} J_m^2, with the reflection 1 - J(-k-1, -k-1) for k < 0."""
    sq = row.values ** 2
    # tail[k] = sum_{m > k} J_m^2 for 0 <= k <= N
    tail = np.concatenate([np.cumsum(sq[::-1])[::-1][1:], [0.0]])
    ks = np.asarray(ks)
    out = np.empty(ks.shape)
    pos = ks >= 0
    out[pos] = tail[ks[pos]]
    out[~pos] = 1.0 - tail[-ks[~pos] - 1]
    return out


def j_kernel_matrix(xs: Sequence[int], ys: Sequence[int] | None = None, theta: float = 1.0,
                    row: BesselRow | None = None) -> np.ndarray:
    """Matrix [J(x_i, y_j; theta)] using the ratio formula off the diagonal."""
    xs = np.asarray(xs, dtype=np.int64)
    ys = xs if ys is None else np.asarray(ys, dtype=np.int64)
    if theta == 0:
        # J(x, y; 0) = 1[x == y < 0]
        return ((xs[:, None] == ys[None, :]) & (xs[:, None] < 0)).astype(float)
    if row is None:
        span = int(max(np.max(np.abs(xs)), np.max(np.abs(ys)))) + 1
        row = bessel_row_for(theta, span)
    jx, jx1 = row(xs), row(xs + 1)
    jy, jy1 = row(ys), row(ys + 1)
    num = jx[:, None] * jy1[None, :] - jx1[:, None] * jy[None, :]
    diff = (xs[:, None] - ys[None, :]).astype(float)
    same = diff == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = math.sqrt(theta) * num / diff
    if np.any(same):
        ii, jj = np.nonzero(same)
        out[ii, jj] = _diag_from_row(row, xs[ii])
    return out


def _j_series(x: int, y: int, theta: float) -> float:
    import mpmath as mp

    if theta == 0:
        return 1.0 if (x == y and x < 0) else 0.0
    # terms grow to roughly exp(2 sqrt(theta)) before cancelling
    extra = int(2 * math.sqrt(theta) / math.log(10)) + 1
    with mp.workdps(30 + extra):
        th = mp.mpf(theta)
        total = mp.mpf(0)
        m_start = max(0, -x - 1, -y - 1)
        biggest = mp.mpf(0)
        for m in range(m_start, m_start + 2000):
            coef = mp.rf(x + y + m + 2, m) * mp.rgamma(x + m + 2) * mp.rgamma(y + m + 2) / mp.factorial(m)
            term = (-1) ** m * coef * th ** (mp.mpf(x + y) / 2 + m + 1)
            total += term
            biggest = max(biggest, abs(term))
            # the rising factorial vanishes on a run of m when x + y < -2, so
            # only stop once the nonzero part has started and decayed
            if (biggest > 0 and m > m_start + 5 and m > 2 * math.sqrt(theta)
                    and abs(term) < mp.mpf(10) ** (-25 - extra) * max(biggest, 1)):
                break
        return float(total)


def _j_integral(x: int, y: int, theta: float) -> float:
    if x + y <= -2:
        raise ValueError("integral representation needs x + y > -2")
    if theta == 0:
        return 0.0
    upper = 2.0 * math.sqrt(theta)
    nodes, weights = np.polynomial.legendre.leggauss(int(60 + 3 * upper))
    zs = 0.5 * upper * (nodes + 1.0)
    span = max(abs(x), abs(y)) + 1
    total = 0.0
    for z, w in zip(zs, weights):
        if z < 1.0:
            vals = np.array([bessel_j_series(n, z) for n in range(span + 1)])
        else:
            vals = _miller(z, span)
        r = BesselRow(z, vals)
        total += w * (r(x) * r(y + 1) + r(x + 1) * r(y))
    return 0.5 * 0.5 * upper * total


def kernel_J(x: int, y: int, theta: float, mode: Mode = "auto") -> float:
    """Discrete Bessel kernel J(x, y; theta) on Z x Z."""
    if not math.isfinite(theta) or theta < 0:
        raise ValueError("theta must be finite and nonnegative")
    x, y = int(x), int(y)
    if mode == "series":
        return _j_series(x, y, theta)
    if mode == "integral":
        return _j_integral(x, y, theta)
    if theta == 0:
        return 1.0 if (x == y and x < 0) else 0.0
    row = bessel_row_for(theta, max(abs(x), abs(y)) + 1)
    if mode == "ratio":
        if x == y:
            raise ValueError("ratio formula is undefined on the diagonal")
        return float(math.sqrt(theta) * (row(x) * row(y + 1) - row(x + 1) * row(y)) / (x - y))
    if mode == "sum":
        lo = min(x, y)
        ms = np.arange(1, row.N - max(x, y) + 1)
        if lo + 1 < -row.N:
            raise ValueError("row too short")
        return float(math.fsum(row(x + ms) * row(y + ms)))
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")
    if x != y:
        return float(math.sqrt(theta) * (row(x) * row(y + 1) - row(x + 1) * row(y)) / (x - y))
    return float(_diag_from_row(row, np.array([x]))[0])


# ---------------------------------------------------------------------------
# half-integer kernels K and L


def _half(x) -> Fraction:
    f = Fraction(x)
    if (2 * f).denominator != 1 or (2 * f).numerator % 2 == 0:
        raise ValueError(f"{x} is not a half-integer")
    return f


def epsilon_sign(x) -> int:
    """sgn(x)^(x + 1/2) on Z + 1/2."""
    x = _half(x)
    if x > 0:
        return 1
    return -1 if int(x + Fraction(1, 2)) % 2 else 1


def kernel_K(x, y, theta: float) -> float:
    """Correlation kernel of the modified Frobenius coordinates."""
    x, y = _half(x), _half(y)
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    ax, ay = abs(x), abs(y)
    if x == y:
        # K(x, x) = J(|x| - 1/2, |x| - 1/2) for either sign of x
        k = int(ax - Fraction(1, 2))
        return kernel_J(k, k, theta)
    if theta == 0:
        return 0.0
    row = bessel_row_for(theta, int(max(ax, ay)) + 1)
    i, j = int(ax - Fraction(1, 2)), int(ay - Fraction(1, 2))  # J_{|x| -/+ 1/2} -> row(i), row(i + 1)
    if x * y > 0:
        if ax == ay:
            raise AssertionError("unreachable")
        kp = row(i) * row(j + 1) - row(i + 1) * row(j)
        return float(math.sqrt(theta) * kp / float(ax - ay))
    km = row(i) * row(j) + row(i + 1) * row(j + 1)
    return float(math.sqrt(theta) * km / float(x - y))


def k_kernel_matrix(points, theta: float) -> np.ndarray:
    pts = [_half(p) for p in points]
    return np.array([[kernel_K(a, b, theta) for b in pts] for a in pts])


def kernel_L(x, y, theta: float) -> float:
    x, y = _half(x), _half(y)
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    if x * y > 0:
        return 0.0
    ax, ay = abs(x), abs(y)
    # |x| + 1/2 is a positive integer, so the Gamma factors are factorials
    gx, gy = int(ax + Fraction(1, 2)), int(ay + Fraction(1, 2))
    power = float(ax + ay) / 2.0
    if theta == 0:
        return 0.0
    log_mag = power * math.log(theta) - math.lgamma(gx) - math.lgamma(gy)
    return math.exp(log_mag) / float(x - y)


def l_kernel_matrix(points, theta: float) -> np.ndarray:
    pts = [_half(p) for p in points]
    return np.array([[kernel_L(a, b, theta) for b in pts] for a in pts])


# ---------------------------------------------------------------------------
# limit kernels


def sine_kernel(k, a: float) -> float:
    """Discrete sine kernel S(k, a); ``k`` may be ``math.inf``."""
    if k is None or (isinstance(k, float) and math.isinf(k)):
        return 0.0
    k = int(k)
    if a >= 2:
        return 0.0
    if a <= -2:
        return 1.0 if k == 0 else 0.0
    phi = math.acos(a / 2.0)
    if k == 0:
        return phi / math.pi
    return math.sin(phi * k) / (math.pi * k)


def diagonal_kernel_D(x, y) -> float:
    x, y = _half(x), _half(y)
    if x * y > 0:
        return sine_kernel(int(x - y), 0.0)
    return math.cos(math.pi * float(x + y) / 2.0) / (math.pi * float(x - y))


def airy_kernel(x, y):
    """Airy kernel, vectorised; the diagonal uses Ai'(x)^2 - x Ai(x)^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    ax, apx = airy_ai_and_deriv(x)
    ay, apy = airy_ai_and_deriv(y)
    ax, apx, ay, apy = (np.asarray(v) for v in (ax, apx, ay, apy))
    h = y - x
    near = np.abs(h) < 1e-5
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (ax * apy - apx * ay) / (x - y)
    # second-order expansion about the diagonal
    diag = apx ** 2 - x * ax ** 2 - ax ** 2 * h / 2.0
    out = np.where(near, diag, out)
    return out if out.ndim else float(out)


def airy_kernel_integral(x: float, y: float) -> float:
    """int_0^inf Ai(x + t) Ai(y + t) dt by adaptive quadrature."""
    from scipy.integrate import quad

    from .special import airy

    upper = max(0.0, 25.0 - min(x, y))
    val, _ = quad(lambda t: airy(x + t) * airy(y + t), 0.0, upper, limit=500,
                  epsabs=1e-13, epsrel=1e-12)
    return val


# ---------------------------------------------------------------------------


def complement_kernel(K: np.ndarray, window: Sequence, Z: Sequence) -> np.ndarray:
    """Particle-hole transform on Z: blocks (A, B, C, D) -> (A, B, -C, 1 - D).

    Rows and columns of ``K`` are labelled by ``window``; C is the Z x Z' block.
    """
    window = list(window)
    zset = set(Z)
    if not zset.issubset(set(window)):
        raise ValueError("Z must be a subset of the window")
    K = np.asarray(K, dtype=float)
    z = np.array([w in zset for w in window])
    out = K.copy()
    out[np.ix_(z, ~z)] *= -1.0
    out[np.ix_(z, z)] = np.eye(int(z.sum())) - K[np.ix_(z, z)]
    return out
