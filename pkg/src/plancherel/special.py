"""Integer-order Bessel functions, Bessel tail bounds and the Airy function.

Only integer orders are needed for the lattice kernels, so ``bessel_j_row``
returns a whole row J_0(x), ..., J_N(x) from one backward (Miller)
recurrence. Negative orders follow from J_{-n} = (-1)^n J_n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "BesselRow",
    "bessel_j_row",
    "bessel_j_series",
    "bessel_tail_bound",
    "airy",
    "airy_deriv",
    "airy_ai_and_deriv",
    "airy_quad",
    "airy_bessel_rep",
]

_RESCALE = 1e250


@dataclass(frozen=True)
class BesselRow:
    """J_0(x) .. J_N(x) as a read-only float array."""

    x: float
    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def __call__(self, n) -> np.ndarray | float:
        """J_n(x) for integer ``n`` (scalar or array), negative orders allowed."""
        n_arr = np.asarray(n)
        m = np.abs(n_arr)
        if np.any(m > self.N):
            raise IndexError(f"order {int(np.max(m))} beyond row length {self.N}")
        out = self.values[m]
        out = np.where((n_arr < 0) & (m % 2 == 1), -out, out)
        return out if out.ndim else float(out)

    def normalization_residual(self) -> float:
        v = self.values
        return abs(v[0] + 2.0 * math.fsum(v[2::2]) - 1.0)


def _miller(x: float, N: int, margin_scale: float = 1.0) -> np.ndarray:
    M = N + math.ceil(margin_scale * (12 + x + 15 * x ** (1.0 / 3.0)))
    M += M % 2
    vals = [0.0] * (M + 2)
    vals[M] = 1e-30
    two_over_x = 2.0 / x
    for k in range(M, 0, -1):
        v = k * two_over_x * vals[k] - vals[k + 1]
        vals[k - 1] = v
        if abs(v) > _RESCALE:
            for j in range(k - 1, M + 1):
                vals[j] /= _RESCALE
    arr = np.array(vals[: M + 1])
    norm = arr[0] + 2.0 * math.fsum(arr[2::2])
    return arr[: N + 1] / norm


def bessel_j_series(n: int, x: float, terms: int = 60) -> float:
    """Ascending power series of J_n(x), n >= 0."""
    if x == 0:
        return 1.0 if n == 0 else 0.0
    half = x / 2.0
    log_first = n * math.log(half) - math.lgamma(n + 1)
    if log_first < -745:
        return 0.0
    term = math.exp(log_first)
    total = [term]
    q = -half * half
    for k in range(1, terms):
        term *= q / (k * (n + k))
        total.append(term)
        if abs(term) < 1e-18 * abs(total[0]) and k > 3:
            break
    return math.fsum(total)


@lru_cache(maxsize=256)
def _row_cached(x: float, N: int) -> np.ndarray:
    if x == 0.0:
        vals = np.zeros(N + 1)
        vals[0] = 1.0
    elif x < 1.0:
        vals = np.array([bessel_j_series(n, x) for n in range(N + 1)])
    else:
        vals = _miller(x, N)
    vals.setflags(write=False)
    return vals


def bessel_j_row(x: float, N: int) -> BesselRow:
    """J_0(x), ..., J_N(x) for real ``x >= 0``."""
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"argument must be finite and nonnegative, got {x}")
    if N < 0:
        raise ValueError("N must be nonnegative")
    return BesselRow(x, _row_cached(x, int(N)))


def bessel_tail_bound(theta: float, k: int, L: int) -> float:
    """Upper bound on sum_{l > L} l * J_{k+l}(2 sqrt(theta))^2.

    Uses |J_nu(x)| <= (x/2)^nu / nu! for nu >= 0; terms are summed exactly up
    to the point where consecutive ratios drop below 1/2, the rest is bounded
    by a geometric series.
    """
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    if k + L < 0:
        raise ValueError("need k + L >= 0")
    if theta == 0:
        return 0.0
    log_sqrt = 0.5 * math.log(theta)

    def log_term(l: int) -> float:
        nu = k + l
        return math.log(l) + 2.0 * (nu * log_sqrt - math.lgamma(nu + 1))

    def ratio(l: int) -> float:
        return (l + 1) / l * theta / (k + l + 1) ** 2

    # ratio(l) is decreasing in l, so the first l with ratio <= 1/2 starts
    # a geometric tail
    l_c = max(1, L + 1)
    while ratio(l_c) > 0.5:
        l_c += 1
    logs = [log_term(l) for l in range(L + 1, l_c + 1)]
    if max(logs) > 700.0:
        return math.inf
    head = [math.exp(v) for v in logs[:-1]]
    tail = math.exp(logs[-1]) / (1.0 - ratio(l_c))
    return math.fsum(head + [tail])


# --------------------------------------------------------------------------
# Airy function

_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
_MACLAURIN_LO = -7.0
_MACLAURIN_HI = 6.0


def _maclaurin(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x3 = x ** 3
    f = np.ones_like(x)
    g = x.copy()
    fp = np.zeros_like(x)
    gp = np.ones_like(x)
    a = np.ones_like(x)  # x^{3k} term of f
    b = x.copy()  # x^{3k+1} term of g
    for k in range(90):
        # derivative terms of a_{k+1} and b_{k+1}, from the current a_k, b_k
        ap = a * x * x / (3 * k + 2)
        bp = b * x * x / (3 * k + 3)
        a = a * x3 / ((3 * k + 2) * (3 * k + 3))
        b = b * x3 / ((3 * k + 3) * (3 * k + 4))
        f += a
        g += b
        fp += ap
        gp += bp
        if k > 4 and np.all(np.abs(a) + np.abs(b) + np.abs(ap) + np.abs(bp) < 1e-18):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _asym_coeffs(count: int) -> tuple[list[float], list[float]]:
    u = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, count)]
    return u, v


_U, _V = _asym_coeffs(40)


def _truncated(coeffs, zeta, sign_pattern, start=0, step=1):
    """Sum c_k * s_k * zeta^{-k} over k = start, start+step, ... up to the smallest term."""
    total = 0.0
    prev = math.inf
    idx = 0
    for k in range(start, len(coeffs), step):
        term = coeffs[k] * zeta ** (-k)
        if abs(term) > prev:
            break
        total += sign_pattern(idx) * term
        prev = abs(term)
        idx += 1
    return total


def _asym_positive(x: float) -> tuple[float, float]:
    zeta = 2.0 / 3.0 * x ** 1.5
    alt = lambda i: (-1.0) ** i  # noqa: E731
    su = _truncated(_U, zeta, alt)
    sv = _truncated(_V, zeta, alt)
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * x ** -0.25 * su, -pref * x ** 0.25 * sv


def _asym_negative(x: float) -> tuple[float, float]:
    y = -x
    zeta = 2.0 / 3.0 * y ** 1.5
    alt = lambda i: (-1.0) ** i  # noqa: E731
    ue = _truncated(_U, zeta, alt, 0, 2)
    uo = _truncated(_U, zeta, alt, 1, 2)
    ve = _truncated(_V, zeta, alt, 0, 2)
    vo = _truncated(_V, zeta, alt, 1, 2)
    c = math.cos(zeta - math.pi / 4)
    s = math.sin(zeta - math.pi / 4)
    ai = (c * ue + s * uo) / (math.sqrt(math.pi) * y ** 0.25)
    aip = y ** 0.25 * (s * ve - c * vo) / math.sqrt(math.pi)
    return ai, aip


def airy_ai_and_deriv(x) -> tuple[np.ndarray, np.ndarray]:
    """Ai(x) and Ai'(x), vectorised over ``x``."""
    shape = np.shape(x)
    xa = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    ai = np.empty_like(xa)
    aip = np.empty_like(xa)
    mid = (xa >= _MACLAURIN_LO) & (xa <= _MACLAURIN_HI)
    if np.any(mid):
        ai[mid], aip[mid] = _maclaurin(xa[mid])
    for i in np.flatnonzero(~mid):
        xi = xa[i]
        ai[i], aip[i] = _asym_positive(xi) if xi > 0 else _asym_negative(xi)
    if np.ndim(x) == 0:
        return ai[0], aip[0]
    return ai.reshape(shape), aip.reshape(shape)


def airy(x):
    return airy_ai_and_deriv(x)[0]


def airy_deriv(x):
    return airy_ai_and_deriv(x)[1]


# --------------------------------------------------------------------------
# independent Airy evaluations, used as test oracles


def airy_quad(x: float) -> float:
    """Ai(x) by adaptive quadrature.

    For x > 0: Ai(x) = sqrt(x/3)/pi * K_{1/3}(zeta), zeta = (2/3) x^{3/2}, with
    K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt (positive integrand).
    For x <= 0: (1/pi) int_0^inf cos(u^3/3 + x u) du on the rotated path
    u = t e^{i pi/6}, where the integrand decays like exp(-t^3/3).
    """
    from scipy.integrate import quad

    if x > 0:
        zeta = 2.0 / 3.0 * x ** 1.5
        upper = math.acosh(1.0 + 800.0 / zeta)
        val, _ = quad(lambda t: math.exp(-zeta * (math.cosh(t) - 1.0)) * math.cosh(t / 3.0),
                      0.0, upper, limit=400, epsabs=0.0, epsrel=1e-13)
        return math.sqrt(x / 3.0) / math.pi * math.exp(-zeta) * val

    w = complex(math.cos(math.pi / 6), math.sin(math.pi / 6))

    def integrand(t: float) -> float:
        return (np.exp(-t ** 3 / 3.0 + 1j * x * t * w) * w).real

    upper = 12.0 + 2.0 * abs(x) ** 0.5
    val, _ = quad(integrand, 0.0, upper, limit=400, epsabs=1e-15, epsrel=1e-13)
    return val / math.pi


def _bessel_series_real(nu: float, z: float, modified: bool, terms: int = 120) -> float:
    half = z / 2.0
    term = half ** nu / math.gamma(nu + 1)
    total = [term]
    q = half * half if modified else -half * half
    for k in range(1, terms):
        term *= q / (k * (nu + k))
        total.append(term)
        if abs(term) < 1e-20 * max(abs(t) for t in total[:3]) and k > 5:
            break
    return math.fsum(total)


def airy_bessel_rep(x: float) -> float:
    """Ai(x) from K_{1/3} (x >= 0) or J_{+-1/3} (x <= 0), by ascending series."""
    if x == 0:
        return _AI0
    zeta = 2.0 / 3.0 * abs(x) ** 1.5
    if x > 0:
        i_minus = _bessel_series_real(-1.0 / 3.0, zeta, True)
        i_plus = _bessel_series_real(1.0 / 3.0, zeta, True)
        k13 = math.pi / 2.0 * (i_minus - i_plus) / math.sin(math.pi / 3.0)
        return math.sqrt(x / 3.0) * k13 / math.pi
    j_plus = _bessel_series_real(1.0 / 3.0, zeta, False)
    j_minus = _bessel_series_real(-1.0 / 3.0, zeta, False)
    return math.sqrt(-x) / 3.0 * (j_plus + j_minus)
