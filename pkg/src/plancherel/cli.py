"""Command-line front end: ``plancherel <subcommand> [flags]``.

Exit codes: 0 success, 1 numeric failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import acceptance
from .asymptotics import depoissonize_contour, profile_distance
from .exact import corr_poisson_series
from .fredholm import (
    IntervalFamily,
    TruncationError,
    build_truncation,
    count_distribution_table,
    gap_probability,
    joint_edge_cdf,
)
from .kernels import KernelFamily
from .sampling import SamplerConfig, sample_rows, sample_shapes, scaled_edge

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    subcommand: str
    theta: float | None = None
    n: int | None = None
    s: int | None = None
    x: str | None = None
    y: str | None = None
    points: str | None = None
    a: str | None = None
    eps: float = 1e-12
    seed: int = 0
    count: int = 1000
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    family: str = "J"
    suite: str | None = None
    fast: bool = False
    extra: dict[str, Any] = field(default_factory=dict)


def _default_threads() -> int:
    env = os.environ.get("PLANCHEREL_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _parse_values(text: str | None, name: str) -> list[Fraction]:
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _need(value, name: str):
    if value is None:
        raise UsageError(f"--{name} is required")
    return value


def _num(v) -> str | Any:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, Fraction):
        return str(v)
    return v


def _emit(cfg: RunConfig, header: list[str], rows: list[list[Any]]) -> str:
    if cfg.format == "json":
        # thread count is left out so output is identical for any --threads
        meta = {k: v for k, v in asdict(cfg).items() if k not in ("extra", "threads")}
        meta.update(cfg.extra)
        body = {"meta": meta, "rows": [dict(zip(header, map(_jsonable, r))) for r in rows]}
        text = json.dumps(body, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_num(v) for v in r])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, Fraction):
        return str(v)
    return v


# ---------------------------------------------------------------------------


def _cmd_kernel(cfg: RunConfig):
    xs = _parse_values(cfg.x, "x")
    ys = _parse_values(cfg.y, "y") if cfg.y is not None else xs
    fam = cfg.family
    if fam in ("J", "K", "L"):
        kern = KernelFamily(fam, theta=float(_need(cfg.theta, "theta")))
    elif fam == "Sine":
        kern = KernelFamily("Sine", a=float(cfg.extra.get("slope", 0.0)))
    else:
        kern = KernelFamily(fam)
    conv = (lambda v: int(v)) if fam in ("J", "Sine") else (lambda v: v)
    if fam == "Airy":
        conv = float
    rows = [[x, y, kern(conv(x), conv(y))] for x in xs for y in ys]
    return ["x", "y", "value"], rows


def _cmd_corr(cfg: RunConfig):
    theta = float(_need(cfg.theta, "theta"))
    pts = _parse_values(cfg.points, "points")
    from .exact import corr_poisson_det

    series = corr_poisson_series(theta, pts)
    det = corr_poisson_det(theta, pts)
    return ["theta", "points", "determinant", "series", "remainder"], [
        [theta, ";".join(map(str, pts)), det, series.value, series.remainder]
    ]


def _cmd_gap(cfg: RunConfig):
    theta = float(_need(cfg.theta, "theta"))
    s = int(_need(cfg.s, "s"))
    op = build_truncation(KernelFamily("J", theta=theta), s, cfg.eps)
    return ["theta", "s", "gap", "window_size", "tail_bound"], [
        [theta, s, gap_probability(op), op.size, op.tail_bound]
    ]


def _cmd_counts(cfg: RunConfig):
    theta = float(_need(cfg.theta, "theta"))
    # --points lo1,hi1,lo2,hi2,...  half-open intervals; --n max count per interval
    ends = [int(v) for v in _parse_values(cfg.points, "points")]
    if len(ends) % 2:
        raise UsageError("--points needs pairs lo,hi")
    intervals = tuple((ends[i], ends[i + 1]) for i in range(0, len(ends), 2))
    try:
        fam = IntervalFamily(intervals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    deg = int(cfg.n if cfg.n is not None else 2)
    table = count_distribution_table(theta, fam, [deg] * len(intervals), cfg.eps)
    header = [f"N{j + 1}" for j in range(len(intervals))] + ["probability"]
    rows = [list(idx) + [table[idx]] for idx in np.ndindex(table.shape)]
    return header, rows


def _cmd_edge_cdf(cfg: RunConfig):
    theta = float(_need(cfg.theta, "theta"))
    a = [float(v) for v in _parse_values(cfg.a, "a")]
    try:
        val = joint_edge_cdf(theta, a, cfg.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return ["theta", "a", "cdf"], [[theta, ";".join(map(repr, a)), val]]


def _cmd_sample(cfg: RunConfig):
    n = int(_need(cfg.n, "n"))
    rows_needed = 2
    sc = SamplerConfig(n=n, count=cfg.count, seed=cfg.seed, threads=cfg.threads, rows=rows_needed)
    batch = sample_rows(sc, lambda lam: [lam[0], lam[1], *scaled_edge(lam, n, 2)])
    rows = [[i, int(v[0]), int(v[1]), v[2], v[3]] for i, v in enumerate(batch.values)]
    return ["index", "lambda1", "lambda2", "scaled1", "scaled2"], rows


def _cmd_shape(cfg: RunConfig):
    n = int(_need(cfg.n, "n"))
    sc = SamplerConfig(n=n, count=cfg.count, seed=cfg.seed, threads=cfg.threads, batch_size=4)
    rows = [[i, lam[0], len(lam), profile_distance(lam)] for i, lam in enumerate(sample_shapes(sc))]
    return ["index", "lambda1", "length", "sup_distance"], rows


def _cmd_depoissonize(cfg: RunConfig):
    n = int(_need(cfg.n, "n"))
    # test sequence b_k = 2^{-k}, B(theta) = exp(-theta / 2)
    val = depoissonize_contour(lambda z: np.exp(-z / 2.0), n, int(cfg.extra.get("nodes", 512)))
    return ["n", "estimate", "exact", "error"], [[n, val, 2.0 ** -n, abs(val - 2.0 ** -n)]]


def _cmd_verify(cfg: RunConfig):
    name = cfg.suite
    if name not in acceptance.SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {sorted(acceptance.SUITES)}")
    checks = acceptance.run_suite(name, fast=cfg.fast, threads=cfg.threads)
    for c in checks:
        print(c.line(), file=sys.stderr)
    report = {"suite": name, "fast": cfg.fast, "checks": [c.as_dict() for c in checks],
              "passed": all(c.passed for c in checks)}
    text = json.dumps(report, indent=1) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report["passed"]


COMMANDS = {
    "kernel": _cmd_kernel,
    "corr": _cmd_corr,
    "gap": _cmd_gap,
    "counts": _cmd_counts,
    "edge-cdf": _cmd_edge_cdf,
    "sample": _cmd_sample,
    "shape": _cmd_shape,
    "depoissonize": _cmd_depoissonize,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="plancherel", description="Plancherel measure kernels, determinants and samplers")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--theta", type=float)
        sp.add_argument("--n", type=int)
        sp.add_argument("--s", type=int)
        sp.add_argument("--x")
        sp.add_argument("--y")
        sp.add_argument("--points")
        sp.add_argument("--a")
        sp.add_argument("--eps", type=float, default=1e-12)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--count", type=int, default=1000)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        common(sp)
        if name == "kernel":
            sp.add_argument("--family", choices=["J", "K", "L", "Sine", "Diagonal", "Airy"], default="J")
            sp.add_argument("--slope", type=float, default=0.0, help="sine-kernel slope a")
        if name == "depoissonize":
            sp.add_argument("--nodes", type=int, default=512)
    sp = sub.add_parser("verify")
    sp.add_argument("suite")
    sp.add_argument("--fast", action="store_true")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    extra = {k: getattr(ns, k) for k in ("slope", "nodes") if hasattr(ns, k)}
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    cfg = RunConfig(**fields, extra=extra)
    if ns.threads is None:
        cfg.threads = _default_threads()
    try:
        if cfg.threads < 1:
            raise UsageError("--threads must be positive")
        if cfg.subcommand == "verify":
            return EXIT_OK if _cmd_verify(cfg) else EXIT_NUMERIC
        header, rows = COMMANDS[cfg.subcommand](cfg)
        _emit(cfg, header, rows)
    except UsageError as exc:
        print(f"plancherel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationError, ZeroDivisionError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"plancherel: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"plancherel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
