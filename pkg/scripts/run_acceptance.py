"""Run every acceptance criterion and write a JSON report.

    python3 scripts/run_acceptance.py [--fast] [--out report.json]
"""
import argparse
import json
import time

from plancherel.acceptance import CRITERIA

parser = argparse.ArgumentParser()
parser.add_argument("--fast", action="store_true")
parser.add_argument("--out", default="acceptance_report.json")
args = parser.parse_args()

report = []
for key in sorted(CRITERIA):
    t0 = time.perf_counter()
    checks = CRITERIA[key](fast=args.fast)
    elapsed = time.perf_counter() - t0
    for c in checks:
        print(c.line())
    report.append({"criterion": key, "seconds": elapsed, "checks": [c.as_dict() for c in checks]})

with open(args.out, "w") as fh:
    json.dump(report, fh, indent=1)
n_fail = sum(not c["passed"] for r in report for c in r["checks"])
print(f"{n_fail} failing checks; report written to {args.out}")
