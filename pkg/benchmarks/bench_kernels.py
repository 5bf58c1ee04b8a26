"""Compiled core vs pure-Python fallback on the three hot kernels.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import timeit

import numpy as np

from qpd import _fallback
from qpd.circle_pd import point_set
from qpd.rips_oracle import metric_from_cloud

try:
    from qpd import _kernels
except ImportError:  # extension not built
    _kernels = None

W3 = math.sqrt(3) / (2 * math.pi)
W5 = math.sqrt(5) / (2 * math.pi)


def cases():
    pts = point_set(W5, 500).points
    t = np.arange(2001)
    traj = np.stack([np.mod(t * W3, 1.0), np.mod(t * W5, 1.0)])
    grids = [point_set(w, 150).points for w in (W3, W5)]
    radii = np.ones(2)
    rng = np.random.default_rng(0)
    D = metric_from_cloud(rng.random((40, 3)).astype(complex)).dist
    return [
        ("triangle_cover  n=501", lambda k: k.triangle_cover(pts)),
        ("grid_to_traj    151^2 x 2001", lambda k: k.grid_to_traj(traj, grids, radii, 0.0, 1)),
        ("rips_pairs      n=40 dim<=2", lambda k: k.rips_pairs(D, 2)),
    ]


def _canon(x):
    # raw pair lists: drop zero-persistence pairs the way rips_persistence does
    return [sorted(p for p in d if p[1] > p[0]) for d in x] if isinstance(x, list) else x


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return
    print(f"{'kernel':32s} {'compiled':>12s} {'fallback':>12s} {'speedup':>9s}")
    for name, fn in cases():
        assert _canon(fn(_kernels)) == _canon(fn(_fallback)), name
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        print(f"{name:32s} {tc * 1e3:10.2f}ms {tp * 1e3:10.2f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
