"""Constrained Gromov-Hausdorff distance on finite chromatic pairs.

``gh_exact`` minimizes max{dis f, dis g, codis(f, g)} over all pairs of
constrained maps by a pruned exhaustive search (half of that max is the
distance); ``gh_corr_oracle`` recomputes the same value through the
correspondence characterization by brute force and serves as the independent
cross-check.  ``gh_lower``/``gh_upper`` provide certified bounds: the lower
bound combines diameter gaps with the color-class invariants (radius,
separation, eccentricity/separation/distance sets and the local-set matching
distance), the upper bound evaluates an explicit admissible map pair.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .constraints import (
    ConstraintSet,
    candidate_targets,
    constrained_violation,
    sigma_family,
    topology,
)
from .errors import BudgetExceeded, EmptyColorClass, NotConstrained
from .metric import (
    ChromaticMetricPair,
    MapSpec,
    codistortion,
    distortion,
)

DEFAULT_NODE_BUDGET = 10**8

_CORR_ORACLE_CAP = 20  # |A1| * |A2| cap for the 2^(n*m) correspondence sweep


def pair_objective(f: MapSpec, g: MapSpec) -> float:
    """max{dis f, dis g, codis(f, g)} for an admissible map pair (unhalved)."""
    return max(distortion(f), distortion(g), codistortion(f, g))


def _hausdorff_1d(a, b) -> float:
    """Hausdorff distance between two non-empty finite sets of reals."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    gaps = np.abs(av[:, None] - bv[None, :])
    return float(max(gaps.min(axis=1).max(), gaps.min(axis=0).max()))


@dataclass(frozen=True, eq=False)
class InvariantRecord:
    """Color-class invariants of one chromatic pair for an ordered (sigma, tau).

    ``local[x]`` is the sorted tuple of distances from the sigma-colored point
    x to the tau-colored class; the remaining fields are its derived extremes:
    ecc/sep per point, their value sets, and the global radius/dist minima.
    """

    sigma: frozenset
    tau: frozenset
    local: dict
    distance_set: tuple
    ecc: dict
    sep: dict
    ecc_set: tuple
    sep_set: tuple
    radius: float
    dist: float


def chromatic_invariants(pair: ChromaticMetricPair, sigma, tau) -> InvariantRecord:
    sigma = frozenset(int(c) for c in sigma)
    tau = frozenset(int(c) for c in tau)
    cls_s = pair.color_class(sigma)
    cls_t = pair.color_class(tau)
    if not cls_s:
        raise EmptyColorClass(f"no point colored in {sorted(sigma)}")
    if not cls_t:
        raise EmptyColorClass(f"no point colored in {sorted(tau)}")
    sub = pair.d[np.ix_(cls_s, cls_t)]
    local = {x: tuple(sorted(sub[k])) for k, x in enumerate(cls_s)}
    ecc = {x: vals[-1] for x, vals in local.items()}
    sep = {x: vals[0] for x, vals in local.items()}
    distance_set = tuple(sorted({v for vals in local.values() for v in vals}))
    ecc_set = tuple(sorted(set(ecc.values())))
    sep_set = tuple(sorted(set(sep.values())))
    return InvariantRecord(
        sigma=sigma,
        tau=tau,
        local=local,
        distance_set=distance_set,
        ecc=ecc,
        sep=sep,
        ecc_set=ecc_set,
        sep_set=sep_set,
        radius=min(ecc_set),
        dist=min(sep_set),
    )


def _local_cost_matrix(inv1: InvariantRecord, inv2: InvariantRecord):
    xs1 = sorted(inv1.local)
    xs2 = sorted(inv2.local)
    c = np.empty((len(xs1), len(xs2)))
    for a, x1 in enumerate(xs1):
        for b, x2 in enumerate(xs2):
            c[a, b] = _hausdorff_1d(inv1.local[x1], inv2.local[x2])
    return c


def local_set_distance(p1, p2, sigma, tau) -> float:
    """Best worst-case matching of local distance sets between the two
    sigma-classes (bounds twice the constrained GH distance from below).

    Over finite classes the optimal correspondence pairs every point with its
    cheapest partner, so the value is the max of the two directed
    min-cost maxima of the pairwise Hausdorff costs; the exhaustive
    enumeration over correspondences is kept as a test-side oracle.
    """
    inv1 = chromatic_invariants(p1, sigma, tau)
    inv2 = chromatic_invariants(p2, sigma, tau)
    c = _local_cost_matrix(inv1, inv2)
    return float(max(c.min(axis=1).max(), c.min(axis=0).max()))


def gh_lower(p1: ChromaticMetricPair, p2: ChromaticMetricPair, C: ConstraintSet) -> float:
    """Largest certified lower bound from diameter gaps and class invariants.

    Scans the generated topology: +inf as soon as some open set has points on
    exactly one side (no constrained map can exist); otherwise the best of the
    ambient diameter gap, the per-open diameter gaps, and for every ordered
    pair of distinct populated opens the radius/dist gaps and the
    eccentricity-, separation-, distance- and local-set distances, each halved.
    """
    diam_gap = abs(p1.ambient.diameter() - p2.ambient.diameter()) / 2.0
    if C.ambient_only:
        return diam_gap
    Cx = C.expand_universe(p1.colors_used | p2.colors_used)
    opens = sorted(topology(Cx).opens, key=lambda s: (len(s), sorted(s)))
    populated = []
    for sig in opens:
        if not sig:
            continue
        c1 = p1.color_class(sig)
        c2 = p2.color_class(sig)
        if bool(c1) != bool(c2):
            return math.inf
        if c1:
            populated.append((sig, c1, c2))
    best = diam_gap
    for sig, c1, c2 in populated:
        best = max(best, abs(p1.ambient.diameter(c1) - p2.ambient.diameter(c2)) / 2.0)
    inv_cache = {}

    def inv(pair, key, sig, tau):
        if (key, sig, tau) not in inv_cache:
            inv_cache[(key, sig, tau)] = chromatic_invariants(pair, sig, tau)
        return inv_cache[(key, sig, tau)]

    for sig, _, _ in populated:
        for tau, _, _ in populated:
            if sig == tau:
                continue
            i1 = inv(p1, 1, sig, tau)
            i2 = inv(p2, 2, sig, tau)
            c = _local_cost_matrix(i1, i2)
            dl = float(max(c.min(axis=1).max(), c.min(axis=0).max()))
            best = max(
                best,
                abs(i1.radius - i2.radius) / 2.0,
                abs(i1.dist - i2.dist) / 2.0,
                _hausdorff_1d(i1.ecc_set, i2.ecc_set) / 2.0,
                _hausdorff_1d(i1.sep_set, i2.sep_set) / 2.0,
                _hausdorff_1d(i1.distance_set, i2.distance_set) / 2.0,
                dl / 2.0,
            )
    return best


def _greedy_pair(p1, p2, cands1, cands2):
    """Deterministic greedy seed pair; ties broken by lowest target index."""
    d1 = p1.d
    d2 = p2.d
    f = []
    for i in range(p1.n):
        best_y, best_cost = None, math.inf
        for y in cands1[i]:
            cost = 0.0
            for k in range(i):
                cost = max(cost, abs(d1[i, k] - d2[y, f[k]]))
            if cost < best_cost:
                best_cost, best_y = cost, y
        f.append(best_y)
    g = []
    for j in range(p2.n):
        best_x, best_cost = None, math.inf
        for x in cands2[j]:
            cost = 0.0
            for k in range(j):
                cost = max(cost, abs(d2[j, k] - d1[x, g[k]]))
            for i in range(p1.n):
                cost = max(cost, abs(d1[i, x] - d2[f[i], j]))
            if cost < best_cost:
                best_cost, best_x = cost, x
        g.append(best_x)
    return MapSpec(p1, p2, tuple(f)), MapSpec(p2, p1, tuple(g))


def gh_exact(
    p1: ChromaticMetricPair,
    p2: ChromaticMetricPair,
    C: ConstraintSet,
    budget: int = DEFAULT_NODE_BUDGET,
    return_witness: bool = False,
):
    """Exact constrained Gromov-Hausdorff distance by pruned exhaustive search.

    Enumerates map pairs point by point (rarest candidate lists first) with
    per-point target lists given by the sigma family, pruning any branch whose
    running max meets the incumbent and stopping early once the incumbent
    reaches the certified lower bound.  Returns +inf when no constrained map
    exists in one of the directions.  Raises BudgetExceeded - carrying the
    best upper/lower bounds found - when the node budget runs out before
    exactness is certified.
    """
    if budget <= 0:
        raise BudgetExceeded("budget must be positive", nodes=0)
    Cx = C if C.ambient_only else C.expand_universe(p1.colors_used | p2.colors_used)
    cands1 = candidate_targets(p1, p2, Cx)
    cands2 = candidate_targets(p2, p1, Cx)
    if cands1 is None or cands2 is None:
        return (math.inf, None) if return_witness else math.inf
    lb2 = 2.0 * gh_lower(p1, p2, Cx)
    fs, gs = _greedy_pair(p1, p2, cands1, cands2)
    ub = pair_objective(fs, gs)
    best, f, g, nodes, finished = _kernels.pair_search(
        p1.d.tolist(), p2.d.tolist(), cands1, cands2, lb2, ub, budget
    )
    if not finished:
        raise BudgetExceeded(
            f"gh_exact budget of {budget} nodes exhausted; exactness not certified",
            upper=best / 2.0,
            lower=lb2 / 2.0,
            nodes=nodes,
        )
    value = best / 2.0
    if not return_witness:
        return value
    if f is not None:
        return value, (MapSpec(p1, p2, tuple(f)), MapSpec(p2, p1, tuple(g)))
    return value, (fs, gs)


def gh_corr_oracle(
    p1: ChromaticMetricPair, p2: ChromaticMetricPair, C: ConstraintSet
) -> float:
    """Constrained GH distance via brute force over constrained correspondences.

    Enumerates every relation on A1 x A2 (2^(n*m) of them), keeps the
    correspondences whose restriction to each class of the sigma-augmented
    family covers both sides, and halves the minimum distortion.  The
    augmentation by the sigma family is mandatory: the raw members
    under-constrain correspondences.  Intentionally simple - this is the
    oracle that cross-checks gh_exact.
    """
    n1, n2 = p1.n, p2.n
    nbits = n1 * n2
    if nbits > _CORR_ORACLE_CAP:
        raise BudgetExceeded(f"correspondence oracle cap is {_CORR_ORACLE_CAP} cells, got {nbits}")
    if C.ambient_only:
        family = []
    else:
        Cx = C.expand_universe(p1.colors_used | p2.colors_used)
        family = sorted(
            set(Cx.effective_sets()) | set(sigma_family(Cx).values()),
            key=lambda s: (len(s), sorted(s)),
        )
    pair_of_bit = [(i, j) for i in range(n1) for j in range(n2)]
    bit_of = {ij: k for k, ij in enumerate(pair_of_bit)}
    row_need = [sum(1 << bit_of[(i, j)] for j in range(n2)) for i in range(n1)]
    col_need = [sum(1 << bit_of[(i, j)] for i in range(n1)) for j in range(n2)]
    constraints = []
    for sigma in family:
        c1 = p1.color_class(sigma)
        c2 = p2.color_class(sigma)
        if not c1 and not c2:
            continue
        rows = [sum(1 << bit_of[(i, j)] for j in c2) for i in c1]
        cols = [sum(1 << bit_of[(i, j)] for i in c1) for j in c2]
        constraints.append(rows + cols)
    d1 = p1.d
    d2 = p2.d
    diff = np.empty((nbits, nbits))
    for a, (i1, j1) in enumerate(pair_of_bit):
        for b, (i2, j2) in enumerate(pair_of_bit):
            diff[a, b] = abs(d1[i1, i2] - d2[j1, j2])
    best = math.inf
    for mask in range(1, 1 << nbits):
        if any(not mask & need for need in row_need):
            continue
        if any(not mask & need for need in col_need):
            continue
        ok = True
        for needs in constraints:
            for need in needs:
                if not mask & need:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        bits = []
        m = mask
        while m:
            low = m & -m
            bits.append(low.bit_length() - 1)
            m ^= low
        dis = 0.0
        for a in range(len(bits)):
            row = diff[bits[a]]
            for b in range(a, len(bits)):
                v = row[bits[b]]
                if v > dis:
                    dis = v
            if dis >= best:
                break
        if dis < best:
            best = dis
    return best / 2.0


def gh_upper(f: MapSpec, g: MapSpec, C: ConstraintSet) -> float:
    """Certified upper bound from an explicit admissible map pair.

    Both maps must be constrained (checked; NotConstrained reports the
    direction, the violated color set and a witness point).
    """
    Cx = C if C.ambient_only else C.expand_universe(
        f.source.colors_used | f.target.colors_used
    )
    bad = constrained_violation(f, Cx)
    if bad is not None:
        sigma, x = bad
        raise NotConstrained(
            f"forward map sends point {x} outside the {sorted(sigma)}-colored class",
            direction="forward",
            sigma=sigma,
            witness=x,
        )
    bad = constrained_violation(g, Cx)
    if bad is not None:
        sigma, x = bad
        raise NotConstrained(
            f"backward map sends point {x} outside the {sorted(sigma)}-colored class",
            direction="backward",
            sigma=sigma,
            witness=x,
        )
    return pair_objective(f, g) / 2.0


def constrained_isomorphic(
    p1: ChromaticMetricPair, p2: ChromaticMetricPair, C: ConstraintSet
) -> Tuple[bool, Optional[MapSpec]]:
    """Decide zero constrained GH distance on finite pairs.

    Searches for a bijection with zero distortion (within the metric
    tolerance) matching every minimal color class onto its counterpart; a
    point colored n may only pair with a point whose minimal constraint set
    equals sigma_n, and uncolored points pair with uncolored points.  Returns
    the first witness in index order when one exists.
    """
    n = p1.n
    if n != p2.n:
        return False, None
    if C.ambient_only:
        sig1 = [None] * n
        sig2 = [None] * n
    else:
        Cx = C.expand_universe(p1.colors_used | p2.colors_used)
        fam = sigma_family(Cx)
        sig1 = [fam[p1.coloring[i]] if i in p1.coloring else None for i in range(n)]
        sig2 = [fam[p2.coloring[j]] if j in p2.coloring else None for j in range(n)]
    if Counter(sig1) != Counter(sig2):
        return False, None
    tol = max(p1.ambient.tol, p2.ambient.tol)
    d1 = p1.d
    d2 = p2.d
    cands = [[j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)]
    assign = [-1] * n
    used = [False] * n

    def backtrack(i):
        if i == n:
            return True
        for j in cands[i]:
            if used[j]:
                continue
            if all(abs(d1[i, k] - d2[j, assign[k]]) <= tol for k in range(i)):
                assign[i] = j
                used[j] = True
                if backtrack(i + 1):
                    return True
                used[j] = False
                assign[i] = -1
        return False

    if backtrack(0):
        return True, MapSpec(p1, p2, tuple(assign))
    return False, None
