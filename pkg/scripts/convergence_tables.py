"""Bulk and edge kernel convergence tables, written as CSV to stdout."""
import csv
import sys

from plancherel.asymptotics import bulk_convergence, edge_convergence

w = csv.writer(sys.stdout, lineterminator="\n")
w.writerow(["regime", "point", "param", "lhs", "rhs", "error"])
for a in (0.0, 1.0):
    for d in range(4):
        for row in bulk_convergence(a, d, [1e2, 1e3, 1e4, 1e5, 1e6]).rows:
            w.writerow(["bulk", f"a={a};d={d}", row.param, f"{row.lhs:.17g}", f"{row.rhs:.17g}", f"{row.error:.3e}"])
for x, y in ((0, 0), (-2, 1), (1, 1), (-3, -3)):
    for row in edge_convergence(x, y, [1e2, 1e3, 1e4]).rows:
        w.writerow(["edge", f"x={x};y={y}", row.param, f"{row.lhs:.17g}", f"{row.rhs:.17g}", f"{row.error:.3e}"])
