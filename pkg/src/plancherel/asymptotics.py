"""Finite-size checks of the limit theorems.

Each check returns a :class:`ConvergenceReport` (or a plain residual) so the
same code drives tests, the verify suites and the experiment scripts.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exact import (
    ENUMERATION_CAP,
    _poisson_weights,
    corr_exact_frobenius,
    corr_poisson_series,
    plancherel_table,
    poisson_tail,
)
from .fredholm import build_truncation, gap_probability
from .kernels import KernelFamily, airy_kernel, diagonal_kernel_D, j_kernel_matrix, sine_kernel
from .partitions import Partition

__all__ = [
    "ConvergenceRow",
    "ConvergenceReport",
    "DifferenceOperator",
    "limit_shape_omega",
    "limit_density",
    "profile",
    "profile_distance",
    "descent_density",
    "bulk_convergence",
    "bulk_determinants",
    "edge_convergence",
    "depoissonize_contour",
    "first_row_cdf_exact",
    "first_row_cdf_poisson",
    "SandwichReport",
    "sandwich_check",
    "growth_monotonicity",
    "commutation_check",
    "diagonal_frobenius_check",
]


@dataclass(frozen=True)
class ConvergenceRow:
    param: float
    lhs: float
    rhs: float

    @property
    def error(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass
class ConvergenceReport:
    label: str
    rows: list[ConvergenceRow] = field(default_factory=list)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.error for r in self.rows])

    def error_at(self, param: float) -> float:
        """Largest error among rows with this parameter value."""
        errs = [r.error for r in self.rows if r.param == param]
        if not errs:
            raise KeyError(param)
        return max(errs)

    def halved(self) -> bool:
        """Error at the largest parameter is at most half the error at the smallest."""
        params = sorted({r.param for r in self.rows})
        return self.error_at(params[-1]) <= 0.5 * self.error_at(params[0])

    def merge(self, other: "ConvergenceReport") -> "ConvergenceReport":
        return ConvergenceReport(self.label, self.rows + other.rows)


# ---------------------------------------------------------------------------
# limit shape


def limit_shape_omega(u):
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) <= 2
    uc = np.clip(u, -2.0, 2.0)
    val = 2.0 / math.pi * (uc * np.arcsin(uc / 2.0) + np.sqrt(4.0 - uc * uc))
    out = np.where(inside, val, np.abs(u))
    return out if out.ndim else float(out)


def limit_density(a):
    a = np.asarray(a, dtype=float)
    out = np.arccos(np.clip(a / 2.0, -1.0, 1.0)) / math.pi
    return out if out.ndim else float(out)


def _descents(lam: Partition) -> np.ndarray:
    return np.array([lam[i] - (i + 1) for i in range(len(lam))], dtype=np.int64)


def profile(lam: Partition, u):
    """Rotated diagram boundary omega_lam(u), unscaled.

    At integers omega(u) = u + 2 #{k in D(lam) : k >= u}; between integers it
    is linear.
    """
    u = np.asarray(u, dtype=float)
    d = np.sort(_descents(lam))
    # D also contains every integer below -len(lam); those are >= u only for u <= -len-1
    ell = len(lam)

    def at_int(m):
        m = np.asarray(m, dtype=np.int64)
        count = len(d) - np.searchsorted(d, m, side="left")
        extra = np.clip(-ell - m, 0, None)  # -ell-1, ..., m
        return m + 2 * (count + extra)

    lo = np.floor(u)
    t = u - lo
    out = (1 - t) * at_int(lo) + t * at_int(lo + 1)
    return out if out.ndim else float(out)


def profile_distance(lam: Partition, points: int = 2001, span: float = 3.0) -> float:
    """sup_u |omega_lam(u sqrt n)/sqrt n - Omega(u)| over a grid on [-span, span]."""
    n = lam.n
    if n == 0:
        raise ValueError("empty partition")
    r = math.sqrt(n)
    grid = np.linspace(-span, span, points)
    # include the integer breakpoints so the piecewise-linear sup is exact
    ints = np.arange(math.floor(-span * r), math.ceil(span * r) + 1) / r
    u = np.union1d(grid, ints)
    return float(np.max(np.abs(profile(lam, u * r) / r - limit_shape_omega(u))))


def descent_density(lams: Sequence[Partition], a: float, halfwidth: int = 0) -> float:
    """Fraction of sites k in D(lam) near round(a sqrt n), averaged over samples and 2h+1 sites."""
    hits = 0
    total = 0
    for lam in lams:
        k0 = round(a * math.sqrt(lam.n))
        d = set(_descents(lam).tolist())
        ell = len(lam)
        for k in range(k0 - halfwidth, k0 + halfwidth + 1):
            hits += (k in d) or (k < -ell)
            total += 1
    return hits / total


# ---------------------------------------------------------------------------
# bulk and edge


def bulk_convergence(a: float, d: int, n_list: Sequence[float]) -> ConvergenceReport:
    """J(x_n, x_n - d; n) against S(d, a) with x_n = round(a sqrt n)."""
    if abs(a) >= 2:
        raise ValueError("bulk requires |a| < 2")
    rep = ConvergenceReport(f"bulk a={a} d={d}")
    for n in n_list:
        x = round(a * math.sqrt(n))
        val = float(j_kernel_matrix([x], [x - d], theta=float(n))[0, 0])
        rep.rows.append(ConvergenceRow(float(n), val, sine_kernel(d, a)))
    return rep


def bulk_determinants(a: float, n: float, offsets: Sequence[Sequence[int]]) -> ConvergenceReport:
    """det[J(x_n + i, x_n + j; n)] against det[S(i - j, a)] for each offset set."""
    x = round(a * math.sqrt(n))
    rep = ConvergenceReport(f"bulk det a={a} n={n}")
    for X in offsets:
        pts = [x + i for i in X]
        lhs = float(np.linalg.det(j_kernel_matrix(pts, theta=float(n))))
        S = np.array([[sine_kernel(i - j, a) for j in X] for i in X])
        rep.rows.append(ConvergenceRow(float(n), lhs, float(np.linalg.det(S))))
    return rep


def edge_convergence(x: float, y: float, r_list: Sequence[float]) -> ConvergenceReport:
    """r^{1/3} J(k_x, k_y; r^2) against A at the effective (rounded) coordinates."""
    rep = ConvergenceReport(f"edge x={x} y={y}")
    for r in r_list:
        c = r ** (1.0 / 3.0)
        kx = round(2 * r + x * c)
        ky = round(2 * r + y * c)
        lhs = c * float(j_kernel_matrix([kx], [ky], theta=float(r) ** 2)[0, 0])
        rhs = float(airy_kernel((kx - 2 * r) / c, (ky - 2 * r) / c))
        rep.rows.append(ConvergenceRow(float(r), lhs, rhs))
    return rep


# ---------------------------------------------------------------------------
# depoissonization


def depoissonize_contour(B: Callable[[np.ndarray], np.ndarray], n: int, nodes: int = 512) -> float:
    """n!/(2 pi i) contour integral of B(z) e^z z^{-n-1} over |z| = n, trapezoidal rule."""
    if n < 1:
        raise ValueError("n must be positive")

    def quad(m: int) -> float:
        phi = 2.0 * math.pi * np.arange(m) / m
        z = n * np.exp(1j * phi)
        vals = B(z) * np.exp(n * (np.cos(phi) - 1.0)) * np.exp(1j * (n * np.sin(phi) - n * phi))
        log_pref = math.lgamma(n + 1) + n - n * math.log(n)
        return float((np.mean(vals) * math.exp(log_pref)).real)

    val = quad(nodes)
    doubled = quad(2 * nodes)
    if abs(doubled - val) > 1e-9:
        warnings.warn(f"quadrature not converged: {val} vs {doubled} with doubled nodes",
                      RuntimeWarning, stacklevel=2)
    return val


def first_row_cdf_exact(n: int, k: int) -> Fraction:
    """F_n(k) = M_n(lambda_1 <= k)."""
    table = plancherel_table(n)
    first = table.rows[:, 0]
    if table.exact:
        return sum((w for w, l1 in zip(table.weights, first) if l1 <= k), Fraction(0))
    return Fraction(math.fsum(w for w, l1 in zip(table.weights, first) if l1 <= k))


def first_row_cdf_poisson(theta: float, k: int) -> tuple[float, float]:
    """Rigorous bracket [lo, hi] on M^theta(lambda_1 <= k) from enumerated sizes.

    Sizes beyond the enumeration cap are bounded by 0 <= F_m(k) <= F_cap(k),
    since F_m(k) is nonincreasing in m.
    """
    if theta == 0:
        return 1.0, 1.0
    pw = _poisson_weights(theta, ENUMERATION_CAP)
    vals = [float(first_row_cdf_exact(m, k)) for m in range(ENUMERATION_CAP + 1)]
    head = math.fsum(p * v for p, v in zip(pw, vals))
    tail = poisson_tail(theta, ENUMERATION_CAP)
    return head, head + tail * vals[-1]


@dataclass
class SandwichReport:
    n: int
    theta_minus: float
    theta_plus: float
    C: float
    rows: list[tuple[int, float, float, float]] = field(default_factory=list)  # k, lower, F_n, upper
    fredholm_gap: float = 0.0

    @property
    def holds(self) -> bool:
        return all(lo <= f <= hi for _, lo, f, hi in self.rows)


def sandwich_check(n: int, ks: Sequence[int] | None = None) -> SandwichReport:
    """F(theta+, k) - C <= F_n(k) <= F(theta-, k) + C with theta = n -+ 4 sqrt(n ln n), C = 1/n^2.

    theta- is clipped at 0 when negative, where F(0, k) = 1.
    """
    if not 1 <= n <= 14:
        raise ValueError("n must be in 1..14")
    spread = 4.0 * math.sqrt(n * math.log(n)) if n > 1 else 0.0
    th_minus = max(0.0, n - spread)
    th_plus = n + spread
    C = 1.0 / n ** 2
    rep = SandwichReport(n, th_minus, th_plus, C)
    ks = range(0, n + 1) if ks is None else ks
    for k in ks:
        fn = float(first_row_cdf_exact(n, k))
        lo_plus, hi_plus = first_row_cdf_poisson(th_plus, k)
        lo_minus, _ = first_row_cdf_poisson(th_minus, k)
        # upper estimate of F(theta+), lower estimate of F(theta-)
        rep.rows.append((k, hi_plus - C, fn, lo_minus + C))
        # lambda_1 <= k iff no descents in [k, inf); cross-check with the Fredholm determinant
        fd = gap_probability(build_truncation(KernelFamily("J", theta=th_plus), k))
        rep.fredholm_gap = max(rep.fredholm_gap, lo_plus - fd, fd - hi_plus, 0.0)
    return rep


def growth_monotonicity(n_max: int = 13) -> bool:
    """F_{m+1}(k) <= F_m(k) for all m <= n_max and all k, exactly."""
    for m in range(n_max + 1):
        for k in range(0, m + 2):
            if first_row_cdf_exact(m + 1, k) > first_row_cdf_exact(m, k):
                return False
    return True


# ---------------------------------------------------------------------------
# commuting difference operator


@dataclass
class DifferenceOperator:
    """Second-order operator commuting with J restricted to {s, s+1, ...}."""

    theta: float
    s: int
    window: np.ndarray
    const: float = 0.0

    def alpha(self, k):
        return np.asarray(k, dtype=float) - self.s

    def beta(self, k):
        k = np.asarray(k, dtype=float)
        r = math.sqrt(self.theta)
        return -k * (k + 1 - self.s - 2 * r) / r + self.const

    def matrix(self) -> np.ndarray:
        k = self.window.astype(float)
        a, a1 = self.alpha(k), self.alpha(k + 1)
        m = np.diag(-a1 - a + self.beta(k))
        m += np.diag(a[1:], -1)
        m += np.diag(a1[:-1], 1)
        return m


def commutation_check(theta: float, s: int, window_size: int = 60, margin: int = 10,
                      const: float = 0.0) -> float:
    """max |[D, J]| on the interior of the window {s, ..., s + window_size - 1}."""
    if window_size < 20:
        raise ValueError("window_size must be at least 20")
    window = np.arange(s, s + window_size)
    D = DifferenceOperator(theta, s, window, const).matrix()
    J = j_kernel_matrix(window, theta=theta)
    comm = D @ J - J @ D
    inner = comm[: window_size - margin, : window_size - margin]
    return float(np.max(np.abs(inner)))


# ---------------------------------------------------------------------------
# Frobenius coordinates near the diagonal


def diagonal_frobenius_check(n: int, sets: Sequence[Sequence[Fraction]] | None = None,
                             poissonized: bool = False) -> ConvergenceReport:
    """Exact rho(n, X) against det[D(x_i, x_j)] for small half-integer X.

    With ``poissonized`` the left side is the enumerated series at theta = n.
    """
    if sets is None:
        halves = [Fraction(2 * k + 1, 2) for k in range(-2, 2)]
        sets = [X for r in (1, 2) for X in itertools.combinations(halves, r)]
    rep = ConvergenceReport(f"diagonal n={n}")
    for X in sets:
        lhs = corr_poisson_series(n, X).value if poissonized else float(corr_exact_frobenius(n, X))
        Dm = np.array([[diagonal_kernel_D(x, y) for y in X] for x in X], dtype=float)
        rep.rows.append(ConvergenceRow(float(n), lhs, float(np.linalg.det(Dm))))
    return rep
