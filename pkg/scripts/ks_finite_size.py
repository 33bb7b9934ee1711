"""Kolmogorov distance between the exact lattice law of the scaled first and
second rows and their Airy limits, computed from Fredholm determinants.

This is the distance a Monte Carlo KS statistic converges to as the number of
samples grows.
"""
import math

from plancherel.fredholm import IntervalFamily, airy_count_table, airy_gap, count_distribution_table


def lattice_ks(theta, row):
    scale = theta ** (1 / 6)
    centre = 2 * math.sqrt(theta)
    limit = airy_gap if row == 1 else (lambda s: float(airy_count_table([(s, None)], [1]).sum()))
    worst = 0.0
    for m in range(int(centre - 7 * scale), int(centre + 4 * scale)):
        # P(lambda_row <= m) = P(at most row - 1 descents in [m + 1 - row, inf))
        table = count_distribution_table(theta, IntervalFamily(((m + 1 - row, None),)), [row - 1])
        p = float(table.sum())
        lo, hi = (m - centre) / scale, (m + 1 - centre) / scale
        worst = max(worst, abs(p - limit(lo)), abs(p - limit(hi)))
    return worst


for theta in (1e3, 4e3, 1e4, 1e5):
    print(f"theta={theta:.0e}  KS(row 1)={lattice_ks(theta, 1):.4f}  KS(row 2)={lattice_ks(theta, 2):.4f}")
