"""Lattice first-row CDF against Tracy-Widom as theta grows.

Prints |M^theta(lambda_1 < 2 sqrt(theta) + s theta^{1/6}) - F_2(s)| for a few
theta, under both the strict (<) and non-strict (<=) reading of the event.
"""
import math

from plancherel.fredholm import airy_gap, joint_edge_cdf

S = (-2, -1, 0, 1, 2)
print("theta, rule, " + ", ".join(f"s={s}" for s in S))
for theta in (1e2, 1e3, 1e4, 1e5, 1e6):
    for rule, shift in (("<", 0.0), ("<=", 1.0)):
        errs = []
        for s in S:
            a = 2 * math.sqrt(theta) + s * theta ** (1 / 6) + shift
            errs.append(abs(joint_edge_cdf(theta, [a]) - airy_gap(s)))
        print(f"{theta:.0e}, {rule:2s}, " + ", ".join(f"{e:.4f}" for e in errs))
