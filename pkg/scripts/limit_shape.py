"""Sample Plancherel diagrams and report the sup-distance to the limit shape
and the descent density at a few bulk points."""
import argparse

import numpy as np

from plancherel.asymptotics import descent_density, limit_density, profile_distance
from plancherel.sampling import SamplerConfig, sample_shapes

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=10_000)
parser.add_argument("--count", type=int, default=20)
parser.add_argument("--seed", type=int, default=1)
args = parser.parse_args()

shapes = sample_shapes(SamplerConfig(n=args.n, count=args.count, seed=args.seed, batch_size=4))
d = np.array([profile_distance(lam) for lam in shapes])
print(f"n={args.n}: sup-distance median {np.median(d):.4f}, max {d.max():.4f}")
for a in (-1.5, -1.0, 0.0, 1.0, 1.5):
    emp = descent_density(shapes, a, halfwidth=5)
    print(f"a={a:+.1f}: empirical {emp:.4f}  limit {limit_density(a):.4f}")
