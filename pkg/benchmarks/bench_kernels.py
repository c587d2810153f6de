#!/usr/bin/env python3
"""Benchmark the compiled scan kernels against the NumPy fallback.

Times the two hot primitives (full pairwise max, directed nearest-distance
scan) on synthetic clouds for each geometry, then an end-to-end width
profile.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--sizes 1000 3000 8000] [--grid 60]
"""

import argparse
import math
import time

import numpy as np

from geolens._kernels import _fallback

try:
    from geolens._kernels import _native
except ImportError:
    _native = None

GEOMETRIES = [
    ("euclidean", 0, 1.0),
    ("sphere", 1, 1.0),
    ("hyperboloid", 2, 1.0),
]


def _cloud(kind, n, rng):
    if kind == 0:
        return rng.normal(size=(n, 2))
    if kind == 1:
        pts = rng.normal(size=(n, 3))
        return pts / np.linalg.norm(pts, axis=1, keepdims=True)
    spatial = rng.normal(scale=0.8, size=(n, 2))
    x0 = np.sqrt(1.0 + np.sum(spatial**2, axis=1))
    return np.column_stack([x0, spatial])


def _time(fn, *args, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(sizes):
    rng = np.random.default_rng(0)
    print(f"{'geometry':<12} {'n':>6} {'op':<14} {'numpy':>10} {'native':>10} {'speedup':>8}")
    for name, kind, scale in GEOMETRIES:
        for n in sizes:
            pts = _cloud(kind, n, rng)
            half = _cloud(kind, n // 2, rng)
            for op, args in [
                ("pairwise_max", (pts, kind, scale)),
                ("min_dist_to", (pts, half, kind, scale)),
            ]:
                t_np = _time(getattr(_fallback, op), *args)
                if _native is None:
                    print(f"{name:<12} {n:>6} {op:<14} {t_np:>9.4f}s {'-':>10} {'-':>8}")
                    continue
                t_nat = _time(getattr(_native, op), *args)
                print(
                    f"{name:<12} {n:>6} {op:<14} {t_np:>9.4f}s {t_nat:>9.4f}s "
                    f"{t_np / t_nat:>7.1f}x"
                )


def bench_profile(grid):
    import os

    from geolens import BallPair, Euclidean, w_profile

    bp = BallPair.create(Euclidean(2), 2.0, 1.0)
    t0 = time.perf_counter()
    w_profile(bp, grid=grid, budget=4096, seed=0)
    elapsed = time.perf_counter() - t0
    backend = "native" if _native is not None and not os.environ.get(
        "GEOLENS_PURE_PYTHON"
    ) else "numpy"
    print(f"\nend-to-end width profile (grid={grid}, budget=4096, {backend} backend): "
          f"{elapsed:.2f}s")
    print("re-run with GEOLENS_PURE_PYTHON=1 to time the fallback end to end")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[1000, 3000, 8000])
    parser.add_argument("--grid", type=int, default=60)
    args = parser.parse_args()
    if _native is None:
        print("native kernel not built; timing the NumPy fallback only\n")
    bench_kernels(args.sizes)
    bench_profile(args.grid)


if __name__ == "__main__":
    main()
