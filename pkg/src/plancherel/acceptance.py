"""Acceptance checks shared by the test suite and ``plancherel verify``.

Every criterion returns a list of :class:`Check`; ``observed <= tolerance``
unless the check is an exact identity, where both are recorded as 0/1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import asymptotics as asy
from .exact import descent_series_many, plancherel_table
from .fredholm import (
    IntervalFamily,
    airy_count_table,
    airy_gap,
    count_distribution_table,
    fredholm_det_L,
    j_tail_trace,
    joint_edge_cdf,
    resolvent_residual,
)
from .kernels import bessel_row_for, complement_kernel, epsilon_sign, j_kernel_matrix, k_kernel_matrix
from .partitions import dimension_hook, frobenius_det
from .sampling import SamplerConfig, sample_rows, sample_shapes, scaled_edge

__all__ = ["Check", "CRITERIA", "SUITES", "run_suite", "ks_distance"]


@dataclass(frozen=True)
class Check:
    name: str
    observed: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: observed={self.observed:.6g} tolerance={self.tolerance:.6g}"

    def as_dict(self) -> dict:
        return asdict(self)


def _le(name: str, observed: float, tol: float) -> Check:
    observed = float(observed)
    return Check(name, observed, tol, bool(observed <= tol))


def _exact(name: str, ok: bool) -> Check:
    return Check(name, 0.0 if ok else 1.0, 0.0, bool(ok))


def ks_distance(samples: np.ndarray, cdf: Callable[[float], float]) -> float:
    """sup_x |ECDF(x) - F(x)| for continuous F, ties handled via left limits."""
    x = np.sort(np.asarray(samples, dtype=float))
    k = len(x)
    uniq, first = np.unique(x, return_index=True)
    counts = np.diff(np.append(first, k))
    F = np.array([cdf(v) for v in uniq])
    below = first / k
    upto = (first + counts) / k
    return float(max(np.max(np.abs(upto - F)), np.max(np.abs(F - below))))


# ---------------------------------------------------------------------------


def c01(fast: bool = False) -> list[Check]:
    ok = all(sum(plancherel_table(n).weights, Fraction(0)) == 1 for n in range(21))
    return [_exact("c01 sum of M_n(lambda) = 1, n <= 20", ok)]


def c02(fast: bool = False) -> list[Check]:
    ok = all(
        frobenius_det(lam) == Fraction(dimension_hook(lam), math.factorial(n))
        for n in range(13)
        for lam in plancherel_table(n).partitions
    )
    return [_exact("c02 Frobenius determinant = dim/n!, n <= 12", ok)]


def c03(fast: bool = False) -> list[Check]:
    pts = range(-6, 7)
    sets = [X for r in (1, 2, 3) for X in itertools.combinations(pts, r)]
    out = []
    for theta in ((1.0,) if fast else (0.5, 1.0, 2.0, 4.0)):
        series, remainder = descent_series_many(theta, sets, N=80)
        dets = np.array([np.linalg.det(j_kernel_matrix(list(X), theta=theta)) for X in sets])
        excess = np.max(np.abs(dets - series) - remainder)
        out.append(_le(f"c03 det J vs series at theta={theta} (excess over remainder)", max(excess, 0.0), 1e-9))
    return out


def _conjugated_j_det(X: tuple[Fraction, ...], theta: float) -> float:
    shifted = [int(x - Fraction(1, 2)) for x in X]
    J = j_kernel_matrix(shifted, theta=theta)
    Jc = complement_kernel(J, shifted, [s for s in shifted if s < 0])
    eps = np.array([epsilon_sign(x) for x in X], dtype=float)
    return float(np.linalg.det(eps[:, None] * Jc * eps[None, :]))


def c04(fast: bool = False) -> list[Check]:
    halves = [Fraction(2 * k + 1, 2) for k in range(-6, 6)]
    sets = [X for r in (1, 2, 3) for X in itertools.combinations(halves, r)]
    worst = 0.0
    for theta in (0.5, 1.0, 4.0):
        for X in sets:
            dk = float(np.linalg.det(k_kernel_matrix(X, theta)))
            worst = max(worst, abs(dk - _conjugated_j_det(X, theta)))
    return [_le("c04 det K vs complemented J minors", worst, 1e-10)]


def c05(fast: bool = False) -> list[Check]:
    out = []
    for theta in (0.5, 1.0, 2.0, 4.0):
        val, _ = fredholm_det_L(theta)
        out.append(_le(f"c05 det(1+L) relative error at theta={theta}", abs(val / math.exp(theta) - 1), 1e-8))
        out.append(_le(f"c05 K - L(1+L)^-1 at theta={theta}", resolvent_residual(theta), 1e-8))
    return out


def c06(fast: bool = False) -> list[Check]:
    theta = 4.0
    window = np.arange(-40, 41)
    J = j_kernel_matrix(window, theta=theta)
    ev = np.linalg.eigvalsh(0.5 * (J + J.T))
    spill = max(0.0, -ev.min(), ev.max() - 1.0)
    # sum_{k >= s} J(k, k) = sum_{l >= 1} l J_{s+l}^2, s = -40
    row = bessel_row_for(theta, 200)
    ls = np.arange(1, row.N - 40 + 1)
    ray = math.fsum(ls * row(-40 + ls) ** 2)
    tail = j_tail_trace(theta, 40)
    gap = abs(ray - np.trace(J)) - tail
    return [
        _le("c06 eigenvalues of J on [-40,40] outside [0,1]", spill, 1e-8),
        _le("c06 trace identity excess over tail bound", max(gap, 0.0), 1e-12),
    ]


def c07(fast: bool = False) -> list[Check]:
    return [_le("c07 commutator [D, J] at theta=4, s=0, window 60", asy.commutation_check(4.0, 0, 60), 1e-8)]


def c08(fast: bool = False) -> list[Check]:
    # n = 1e6 costs one Bessel row, so the fast mode keeps it
    big = 1e6
    out = []
    for d in range(4):
        rep = asy.bulk_convergence(0.0, d, [1e2, big])
        out.append(_le(f"c08 |J - S({d},0)| at n={big:g}", rep.error_at(big), 1e-2))
        out.append(_le(f"c08 error ratio n={big:g} / n=100, d={d}", rep.error_at(big) / rep.error_at(1e2), 0.5))
    offsets = [X for r in (1, 2, 3) for X in itertools.combinations(range(4), r)]
    rep = asy.bulk_determinants(0.0, big, offsets)
    out.append(_le(f"c08 sine determinants |X| <= 3 at n={big:g}", float(np.max(rep.errors)), 2e-2))
    return out


def c09(fast: bool = False) -> list[Check]:
    grid = range(-3, 3)
    err_small = err_big = 0.0
    for x, y in itertools.product(grid, grid):
        rep = asy.edge_convergence(x, y, [1e2, 1e4])
        err_small = max(err_small, rep.error_at(1e2))
        err_big = max(err_big, rep.error_at(1e4))
    return [
        _le("c09 edge kernel error at r=1e4", err_big, 0.05),
        _le("c09 edge error ratio r=1e4 / r=1e2", err_big / err_small, 0.5),
    ]


def c10(fast: bool = False) -> list[Check]:
    theta = 1e4
    out = []
    for s in (-2, -1, 0, 1, 2):
        a = 2 * math.sqrt(theta) + s * theta ** (1.0 / 6.0)
        err = abs(joint_edge_cdf(theta, [a]) - airy_gap(s))
        out.append(_le(f"c10 lattice edge CDF vs Tracy-Widom at s={s}", err, 0.02))
    return out


def c11(fast: bool = False) -> list[Check]:
    from .exact import poisson_expectation

    fam = IntervalFamily(((0, 3), (3, 6)))
    table = count_distribution_table(1.0, fam, [2, 2])
    worst = 0.0
    for n1, n2 in itertools.product(range(3), range(3)):
        def stat(lam, n1=n1, n2=n2):
            d = [lam[i] - i - 1 for i in range(len(lam))]
            return float(sum(0 <= v < 3 for v in d) == n1 and sum(3 <= v < 6 for v in d) == n2)

        ref = poisson_expectation(1.0, stat)
        worst = max(worst, abs(table[n1, n2] - ref.value) - ref.remainder)
    total = count_distribution_table(1.0, fam, [6, 6]).sum()
    return [
        _le("c11 count distribution vs enumeration", max(worst, 0.0), 1e-6),
        _le("c11 total mass deviation", abs(total - 1.0), 1e-8),
    ]


def _second_row_cdf(s: float) -> float:
    return float(airy_count_table([(s, None)], [1]).sum())


def c12(fast: bool = False, seed: int = 20240607, threads: int = 1) -> list[Check]:
    n1, k1 = 10_000, (2_000 if fast else 10_000)
    cfg = SamplerConfig(n=n1, count=k1, seed=seed, rows=1, threads=threads)
    first = sample_rows(cfg, lambda lam: scaled_edge(lam, n1)[0]).values[:, 0]
    n2, k2 = 4_000, (500 if fast else 2_000)
    cfg = SamplerConfig(n=n2, count=k2, seed=seed + 1, rows=2, threads=threads)
    second = sample_rows(cfg, lambda lam: scaled_edge(lam, n2, 2)[1]).values[:, 0]
    return [
        _le(f"c12 KS of scaled lambda_1, n={n1}, {k1} samples", ks_distance(first, airy_gap), 0.1),
        _le(f"c12 KS of scaled lambda_2, n={n2}, {k2} samples", ks_distance(second, _second_row_cdf), 0.15),
    ]


def c13(fast: bool = False, seed: int = 20240608, threads: int = 1) -> list[Check]:
    n = 10_000
    count = 5 if fast else 20
    cfg = SamplerConfig(n=n, count=count, seed=seed, threads=threads, batch_size=4)
    dists = [asy.profile_distance(lam) for lam in sample_shapes(cfg)]
    out = [_le(f"c13 median sup |omega - Omega| over {count} samples", float(np.median(dists)), 0.1)]
    dens_cfg = SamplerConfig(n=n, count=40 if fast else 200, seed=seed + 1, threads=threads, batch_size=20)
    lams = sample_shapes(dens_cfg)
    for a in (-1.5, -1.0, 0.0, 1.0, 1.5):
        emp = asy.descent_density(lams, a, halfwidth=5)
        out.append(_le(f"c13 descent density at a={a}", abs(emp - asy.limit_density(a)), 0.03))
    return out


def c14(fast: bool = False) -> list[Check]:
    b20 = asy.depoissonize_contour(lambda z: np.exp(-z / 2.0), 20, 512)
    out = [_le("c14 contour recovery of 2^-20", abs(b20 - 2.0 ** -20), 1e-10)]
    for n in (8, 10, 12):
        out.append(_exact(f"c14 sandwich at n={n}", asy.sandwich_check(n).holds))
    out.append(_exact("c14 F_(n+1) <= F_n, n <= 13", asy.growth_monotonicity(13)))
    return out


CRITERIA: dict[str, Callable[..., list[Check]]] = {
    f"c{i:02d}": f for i, f in enumerate([c01, c02, c03, c04, c05, c06, c07, c08, c09, c10, c11, c12, c13, c14], 1)
}

SUITES: dict[str, list[str]] = {
    "exact": ["c01", "c02", "c03", "c14"],
    "kernels": ["c04", "c05", "c06", "c07"],
    "fredholm": ["c10", "c11"],
    "bulk": ["c08"],
    "edge": ["c09"],
    "sampling": ["c12", "c13"],
}
SUITES["all"] = [c for name in ("exact", "kernels", "fredholm", "bulk", "edge", "sampling") for c in SUITES[name]]


def run_suite(name: str, fast: bool = False, threads: int = 1) -> list[Check]:
    if name not in SUITES:
        raise KeyError(name)
    out = []
    for key in sorted(SUITES[name]):
        fn = CRITERIA[key]
        out.extend(fn(fast=fast, threads=threads) if key in ("c12", "c13") else fn(fast=fast))
    return out
