"""Shared helpers: seeded random instances and brute-force oracles."""
import itertools
import math
import random

import numpy as np

from chromgh import ChromaticMetricPair, ConstraintSet, validate_metric


def euclidean_space(points):
    pts = np.asarray(points, dtype=np.float64)
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    return validate_metric(d)


def line_space(values):
    xs = np.asarray(values, dtype=np.float64)
    return validate_metric(np.abs(xs[:, None] - xs[None, :]))


def random_cloud(rng, n, dim=2):
    return [[rng.uniform(0.0, 1.0) for _ in range(dim)] for _ in range(n)]


def random_pair(rng, n, n_colors=2, colored_fraction=1.0):
    space = euclidean_space(random_cloud(rng, n))
    colors = {}
    for i in range(n):
        if rng.random() < colored_fraction:
            colors[i] = rng.randrange(n_colors)
    return ChromaticMetricPair(space, colors)


def random_constraints(rng, n_colors=3, max_members=4):
    universe = list(range(n_colors))
    members = []
    for _ in range(rng.randint(0, max_members)):
        size = rng.randint(1, n_colors)
        members.append(set(rng.sample(universe, size)))
    return ConstraintSet.make(members, universe=universe)


def iter_correspondences(n1, n2):
    """All relations on n1 x n2 covering both sides (brute force)."""
    cells = [(i, j) for i in range(n1) for j in range(n2)]
    for mask in range(1, 1 << len(cells)):
        chosen = [cells[k] for k in range(len(cells)) if mask >> k & 1]
        if {i for i, _ in chosen} == set(range(n1)) and {j for _, j in chosen} == set(range(n2)):
            yield chosen


def hausdorff_by_correspondences(d, A, B):
    """min over correspondences between A and B of the max edge length."""
    best = math.inf
    for rel in iter_correspondences(len(A), len(B)):
        worst = max(d[A[i], B[j]] for i, j in rel)
        best = min(best, worst)
    return best


def bottleneck_oracle(points1, points2):
    """Exhaustive bottleneck distance for small diagrams.

    Enumerates every partial bijection between the finite parts (unmatched
    points pay their diagonal deletion cost) and every bijection between the
    infinite parts.
    """
    ess1 = sorted(b for b, d in points1 if math.isinf(d))
    ess2 = sorted(b for b, d in points2 if math.isinf(d))
    if len(ess1) != len(ess2):
        return math.inf
    best_ess = math.inf
    if ess1:
        for perm in itertools.permutations(range(len(ess2))):
            best_ess = min(best_ess, max(abs(ess1[k] - ess2[perm[k]]) for k in range(len(ess1))))
    else:
        best_ess = 0.0
    fin1 = [(b, d) for b, d in points1 if not math.isinf(d)]
    fin2 = [(b, d) for b, d in points2 if not math.isinf(d)]
    best_fin = math.inf
    for k in range(0, min(len(fin1), len(fin2)) + 1):
        for S1 in itertools.combinations(range(len(fin1)), k):
            for S2 in itertools.permutations(range(len(fin2)), k):
                cost = 0.0
                for a, b in zip(S1, S2):
                    cost = max(cost, abs(fin1[a][0] - fin2[b][0]), abs(fin1[a][1] - fin2[b][1]))
                for a in range(len(fin1)):
                    if a not in S1:
                        cost = max(cost, (fin1[a][1] - fin1[a][0]) / 2.0)
                matched2 = set(S2)
                for b in range(len(fin2)):
                    if b not in matched2:
                        cost = max(cost, (fin2[b][1] - fin2[b][0]) / 2.0)
                best_fin = min(best_fin, cost)
    if not fin1 and not fin2:
        best_fin = 0.0
    return max(best_ess, best_fin)
