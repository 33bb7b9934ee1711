"""Monte Carlo sampling of Plancherel-distributed partitions.

Uniform permutations are pushed through RSK row insertion (or patience
sorting when only lambda_1 is needed). Every batch draws from its own Philox
stream keyed by (master seed, batch index), so results do not depend on the
number of worker threads.
"""
from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numba
import numpy as np

from .partitions import Partition, dimension_hook

__all__ = [
    "SamplerConfig",
    "SampleBatch",
    "rng_for",
    "rsk_shape",
    "rsk_shape_reference",
    "patience_length",
    "patience_length_reference",
    "sample_plancherel",
    "sample_poissonized",
    "sample_growth",
    "scaled_edge",
    "sample_rows",
    "sample_shapes",
    "estimate",
]


def rng_for(seed: int, batch: int) -> np.random.Generator:
    """Counter-based generator for one batch of one run."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(batch,))))


def _check_permutation(perm: np.ndarray) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    if perm.ndim != 1:
        raise ValueError("permutation must be one-dimensional")
    n = len(perm)
    seen = np.zeros(n, dtype=bool)
    if n and (perm.min() < 0 or perm.max() >= n):
        raise ValueError("not a permutation of 0..n-1")
    seen[perm] = True
    if not seen.all():
        raise ValueError("not a permutation of 0..n-1")
    return perm


@numba.njit(cache=True, nogil=True)
def _lower_bound(row, length, v):
    lo, hi = 0, length
    while lo < hi:
        mid = (lo + hi) // 2
        if row[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@numba.njit(cache=True, nogil=True)
def _rsk_rows(perm, max_rows, cap):
    """Row lengths after inserting perm; -1 in slot 0 signals capacity overflow."""
    tab = np.empty((max_rows, cap), dtype=np.int64)
    lengths = np.zeros(max_rows, dtype=np.int64)
    for v in perm:
        x = v
        for r in range(max_rows):
            L = lengths[r]
            pos = _lower_bound(tab[r], L, x)
            if pos == L:
                if L == cap:
                    lengths[0] = -1
                    return lengths
                tab[r, L] = x
                lengths[r] = L + 1
                break
            bumped = tab[r, pos]
            tab[r, pos] = x
            x = bumped
    return lengths


@numba.njit(cache=True, nogil=True)
def _patience(perm):
    piles = np.empty(len(perm), dtype=np.int64)
    k = 0
    for v in perm:
        pos = _lower_bound(piles, k, v)
        piles[pos] = v
        if pos == k:
            k += 1
    return k


def rsk_shape(perm, rows: int | None = None) -> Partition:
    """RSK shape of a permutation of 0..n-1.

    With ``rows`` given only the first ``rows`` rows are tracked; their lengths
    are exact because later rows never feed back into earlier ones.
    """
    perm = _check_permutation(perm)
    n = len(perm)
    if n == 0:
        return Partition()
    max_rows = n if rows is None else max(1, min(rows, n))
    cap = min(n, int(4 * math.sqrt(n)) + 16)
    while True:
        lengths = _rsk_rows(perm, max_rows, cap)
        if lengths[0] >= 0:
            break
        cap = min(n, 2 * cap)
    return Partition(tuple(int(v) for v in lengths if v > 0))


def rsk_shape_reference(perm) -> Partition:
    """Plain-Python row insertion, for cross-checking."""
    perm = _check_permutation(perm)
    rows: list[list[int]] = []
    for v in perm.tolist():
        x = v
        for row in rows:
            pos = bisect.bisect_left(row, x)
            if pos == len(row):
                row.append(x)
                break
            row[pos], x = x, row[pos]
        else:
            rows.append([x])
    return Partition(tuple(len(r) for r in rows))


def patience_length(perm) -> int:
    """Longest increasing subsequence, i.e. lambda_1 of the RSK shape."""
    return int(_patience(_check_permutation(perm)))


def patience_length_reference(perm) -> int:
    piles: list[int] = []
    for v in _check_permutation(perm).tolist():
        pos = bisect.bisect_left(piles, v)
        if pos == len(piles):
            piles.append(v)
        else:
            piles[pos] = v
    return len(piles)


def sample_plancherel(n: int, rng: np.random.Generator, rows: int | None = None) -> Partition:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return rsk_shape(rng.permutation(n), rows)


def sample_poissonized(theta: float, rng: np.random.Generator, rows: int | None = None) -> Partition:
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    return sample_plancherel(int(rng.poisson(theta)), rng, rows)


def sample_growth(n: int, rng: np.random.Generator) -> Partition:
    """Plancherel growth process: add a box to lam with prob dim(mu) / ((k+1) dim(lam))."""
    parts: list[int] = []
    dim = 1
    for k in range(n):
        options = []
        for i in range(len(parts) + 1):
            if i == len(parts) or (i == 0 or parts[i - 1] > parts[i]):
                mu = parts.copy()
                if i == len(parts):
                    mu.append(1)
                else:
                    mu[i] += 1
                options.append((mu, dimension_hook(Partition(tuple(mu)))))
        probs = np.array([float(Fraction(d, (k + 1) * dim)) for _, d in options])
        j = int(rng.choice(len(options), p=probs / probs.sum()))
        parts, dim = options[j]
    return Partition(tuple(parts))


def scaled_edge(lam: Partition, n: float, count: int = 1) -> np.ndarray:
    """(lambda_i - 2 sqrt(n)) / n^{1/6} for i = 1..count."""
    return np.array([(lam[i] - 2.0 * math.sqrt(n)) / n ** (1.0 / 6.0) for i in range(count)])


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    count: int
    seed: int = 0
    batch_size: int = 256
    threads: int = 1
    rows: int | None = None
    poissonized: bool = False
    theta: float | None = None

    def __post_init__(self):
        if self.count < 0 or self.batch_size < 1 or self.threads < 1:
            raise ValueError("count >= 0, batch_size >= 1, threads >= 1 required")

    @property
    def batches(self) -> list[tuple[int, int]]:
        """(batch index, batch size) pairs covering ``count`` samples."""
        full, rest = divmod(self.count, self.batch_size)
        out = [(b, self.batch_size) for b in range(full)]
        if rest:
            out.append((full, rest))
        return out


@dataclass
class SampleBatch:
    values: np.ndarray
    seed: int = 0
    batches: list[int] = field(default_factory=list)

    @property
    def mean(self) -> np.ndarray:
        return self.values.mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        k = len(self.values)
        if k < 2:
            return np.full(self.values.shape[1:], np.inf)
        return self.values.std(axis=0, ddof=1) / math.sqrt(k)

    def merge(self, other: "SampleBatch") -> "SampleBatch":
        return SampleBatch(np.concatenate([self.values, other.values]), self.seed,
                           self.batches + other.batches)


def _batch_shapes(cfg: SamplerConfig, batch: int, size: int) -> list[Partition]:
    rng = rng_for(cfg.seed, batch)
    out = []
    for _ in range(size):
        if cfg.rows == 1:
            n = int(rng.poisson(cfg.theta)) if cfg.poissonized else cfg.n
            lam = Partition((patience_length(rng.permutation(n)),)) if n else Partition()
        elif cfg.poissonized:
            lam = sample_poissonized(cfg.theta, rng, cfg.rows)
        else:
            lam = sample_plancherel(cfg.n, rng, cfg.rows)
        out.append(lam)
    return out


def _run_batch(cfg: SamplerConfig, statistic, batch: int, size: int) -> np.ndarray:
    return np.array([np.atleast_1d(np.asarray(statistic(lam), dtype=float))
                     for lam in _batch_shapes(cfg, batch, size)])


def _map_batches(cfg: SamplerConfig, work) -> list:
    jobs = cfg.batches
    if cfg.threads == 1 or len(jobs) < 2:
        return [work(*job) for job in jobs]
    with ThreadPoolExecutor(cfg.threads) as pool:
        return list(pool.map(lambda job: work(*job), jobs))


def sample_shapes(cfg: SamplerConfig) -> list[Partition]:
    """``cfg.count`` shapes, in batch order."""
    if cfg.poissonized and cfg.theta is None:
        raise ValueError("poissonized sampling needs theta")
    return [lam for chunk in _map_batches(cfg, lambda b, k: _batch_shapes(cfg, b, k)) for lam in chunk]


def sample_rows(cfg: SamplerConfig, statistic: Callable[[Partition], Sequence[float] | float]) -> SampleBatch:
    """Apply ``statistic`` to ``cfg.count`` independent shapes, merged in batch order."""
    if cfg.poissonized and cfg.theta is None:
        raise ValueError("poissonized sampling needs theta")
    jobs = cfg.batches
    results = _map_batches(cfg, lambda b, k: _run_batch(cfg, statistic, b, k))
    if not results:
        return SampleBatch(np.zeros((0, 1)), cfg.seed, [])
    return SampleBatch(np.concatenate(results), cfg.seed, [b for b, _ in jobs])


def estimate(cfg: SamplerConfig, statistic) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and its standard error."""
    batch = sample_rows(cfg, statistic)
    return batch.mean, batch.stderr
