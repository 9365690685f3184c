#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallbacks.

Two workloads, mirroring where the package spends its time:
  * F2 column reduction of the boundary matrix of an ambient Cech filtration;
  * the exact GH map-pair search on a pair of colored clouds.

Run: python3 benchmarks/bench_kernels.py [--points N] [--search-points N]
"""
import argparse
import random
import time

import numpy as np

from chromgh import ChromaticMetricPair, ConstraintSet, cech_filtration, validate_metric
from chromgh._kernels import _pure
from chromgh.constraints import candidate_targets
from chromgh.gh import _greedy_pair, gh_lower, pair_objective
from chromgh.persistence import _boundary_columns, _ordered

try:
    from chromgh._kernels import _speed
except ImportError:
    _speed = None


def _cloud_pair(rng, n, n_colors):
    pts = np.array([[rng.uniform(0, 1), rng.uniform(0, 1)] for _ in range(n)])
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    colors = {i: rng.randrange(n_colors) for i in range(n)}
    return ChromaticMetricPair(validate_metric(d), colors)


def bench_reduce(n_points, repeats):
    rng = random.Random(0)
    pair = _cloud_pair(rng, n_points, 1)
    filt = cech_filtration(pair, 2, simplex_budget=10**7)
    columns = _boundary_columns(_ordered(filt))
    print(f"reduce_columns: {len(columns)} columns "
          f"(Cech filtration of {n_points} points up to dim 2)")
    results = {}
    for name, mod in _backends():
        best = min(_timed(mod.reduce_columns, columns) for _ in range(repeats))
        results[name] = best
        print(f"  {name:9s} {best * 1e3:10.2f} ms")
    _speedup(results)
    if _speed is not None:
        assert _pure.reduce_columns(columns) == _speed.reduce_columns(columns)


def bench_reduce_dense(m, repeats):
    # worst-case regime: every column collides at the top row, so the
    # reduction cascades through dense columns (immutable bigints pay an
    # allocation per XOR here, the dense word matrix does not)
    rng = random.Random(2)
    columns = [rng.getrandbits(m) | (1 << (m - 1)) for _ in range(m)]
    print(f"reduce_columns (dense cascade): {m} columns")
    results = {}
    for name, mod in _backends():
        best = min(_timed(mod.reduce_columns, columns) for _ in range(repeats))
        results[name] = best
        print(f"  {name:9s} {best * 1e3:10.2f} ms")
    _speedup(results)


def bench_search(n_points, repeats):
    rng = random.Random(1)
    p1 = _cloud_pair(rng, n_points, 2)
    p2 = _cloud_pair(rng, n_points, 2)
    C = ConstraintSet.discrete({0, 1})
    cands1 = candidate_targets(p1, p2, C)
    cands2 = candidate_targets(p2, p1, C)
    if cands1 is None or cands2 is None:
        raise SystemExit("sampled instance admits no constrained map; change the seed")
    lb2 = 2.0 * gh_lower(p1, p2, C)
    fs, gs = _greedy_pair(p1, p2, cands1, cands2)
    ub = pair_objective(fs, gs)
    args = (p1.d.tolist(), p2.d.tolist(), cands1, cands2, lb2, ub, 10**9)
    print(f"pair_search: {n_points} x {n_points} points, 2 colors")
    results = {}
    nodes = None
    for name, mod in _backends():
        best = min(_timed(mod.pair_search, *args) for _ in range(repeats))
        out = mod.pair_search(*args)
        nodes = out[3]
        results[name] = best
        print(f"  {name:9s} {best * 1e3:10.2f} ms   ({out[3]} nodes, value {out[0] / 2:.6f})")
    _speedup(results)
    if _speed is not None:
        assert _pure.pair_search(*args) == _speed.pair_search(*args)


def _backends():
    out = [("pure", _pure)]
    if _speed is not None:
        out.append(("compiled", _speed))
    return out


def _timed(fn, *args):
    start = time.perf_counter()
    fn(*args)
    return time.perf_counter() - start


def _speedup(results):
    if "compiled" in results and results["compiled"] > 0:
        print(f"  speedup   {results['pure'] / results['compiled']:10.1f}x")
    elif _speed is None:
        print("  (compiled backend unavailable; built pure-only)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=35, help="cloud size for the reduction")
    parser.add_argument("--search-points", type=int, default=7, help="cloud size per side for the search")
    parser.add_argument("--dense", type=int, default=1200, help="column count for the cascade case")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    bench_reduce(args.points, args.repeats)
    print()
    bench_reduce_dense(args.dense, args.repeats)
    print()
    bench_search(args.search_points, args.repeats)


if __name__ == "__main__":
    main()
