"""Ambient Cech filtrations, color-pattern subcomplexes, and tripod distances.

Filtration values are circumradii: the smallest radius of a ball centered at
an ambient point containing the simplex.  A pattern complex restricts which
color combinations may form simplices; its subfiltration keeps exactly the
simplices whose color set fits inside one of the pattern's maximal faces.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    EmptySimplex,
    IndexOutOfRange,
    NotACorrespondence,
    SizeBudget,
)
from .metric import ChromaticMetricPair

DEFAULT_SIMPLEX_BUDGET = 2_000_000


class ColorOutsidePatternWarning(UserWarning):
    """A colored point fell outside a pattern complex's color universe."""


@dataclass(frozen=True, eq=False)
class ComplexSpec:
    """A simplicial complex on colors, stored by its maximal faces only."""

    maximal_faces: tuple

    def __post_init__(self):
        faces = tuple(sorted({frozenset(int(c) for c in f) for f in self.maximal_faces},
                             key=lambda s: (len(s), sorted(s))))
        if any(not f for f in faces):
            raise EmptySimplex("pattern complexes cannot have an empty maximal face")
        object.__setattr__(self, "maximal_faces", faces)

    @property
    def universe(self) -> frozenset:
        out = frozenset()
        for f in self.maximal_faces:
            out |= f
        return out

    def contains(self, colors: Iterable[int]) -> bool:
        s = frozenset(colors)
        if not s:
            return False
        return any(s <= f for f in self.maximal_faces)

    def is_subcomplex_of(self, other: "ComplexSpec") -> bool:
        return all(any(f <= g for g in other.maximal_faces) for f in self.maximal_faces)

    @staticmethod
    def full(colors) -> "ComplexSpec":
        return ComplexSpec((frozenset(colors),))

    def __eq__(self, other):
        return isinstance(other, ComplexSpec) and self.maximal_faces == other.maximal_faces

    def __repr__(self):
        faces = ", ".join("{" + ",".join(map(str, sorted(f))) + "}" for f in self.maximal_faces)
        return f"ComplexSpec([{faces}])"


def simplex_sort_key(item):
    """Canonical filtration order: (value, dimension, lexicographic vertices)."""
    verts, value = item
    return (value, len(verts), tuple(sorted(verts)))


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices over the colored set with real filtration values.

    Stored in canonical (value, dimension, vertex) order; every face of a
    stored simplex is stored with a value no larger (circumradius growth),
    which the producers guarantee and :meth:`check_monotone` re-verifies.
    """

    simplices: tuple
    max_dim: int

    def __post_init__(self):
        sims = tuple(sorted(((frozenset(v), float(t)) for v, t in self.simplices),
                            key=simplex_sort_key))
        object.__setattr__(self, "simplices", sims)

    def values(self) -> dict:
        return {v: t for v, t in self.simplices}

    def vertices(self) -> tuple:
        return tuple(sorted({x for v, _ in self.simplices for x in v if len(v) == 1}))

    def critical_values(self) -> tuple:
        return tuple(sorted({t for _, t in self.simplices}))

    def check_monotone(self) -> bool:
        vals = self.values()
        for verts, t in self.simplices:
            if len(verts) == 1:
                continue
            for face in itertools.combinations(sorted(verts), len(verts) - 1):
                ft = vals.get(frozenset(face))
                if ft is None or ft > t + 1e-12:
                    return False
        return True

    def __len__(self):
        return len(self.simplices)

    def __eq__(self, other):
        return (
            isinstance(other, Filtration)
            and self.max_dim == other.max_dim
            and self.simplices == other.simplices
        )


def circumradius(pair: ChromaticMetricPair, simplex: Iterable[int]) -> float:
    """Smallest radius of a closed ball centered at an ambient point that
    contains the simplex; exact because the ambient set is finite."""
    verts = sorted({int(v) for v in simplex})
    if not verts:
        raise EmptySimplex("circumradius of the empty simplex")
    colored = pair.coloring
    for v in verts:
        if v not in colored:
            raise IndexOutOfRange(f"simplex vertex {v} is not in the colored set")
    return float(pair.d[:, verts].max(axis=1).min())


def _simplex_count(n: int, max_dim: int) -> int:
    total = 0
    for k in range(1, max_dim + 2):
        total += math.comb(n, k)
    return total


def _valued_simplices(pair, vertices, max_dim, admissible=None):
    d = pair.d
    out = []
    for k in range(1, max_dim + 2):
        combos = [c for c in itertools.combinations(vertices, k)
                  if admissible is None or admissible(c)]
        if not combos:
            continue
        idx = np.array(combos, dtype=np.intp)      # (m, k)
        radii = d[:, idx].max(axis=2).min(axis=0)  # (m,)
        out.extend((frozenset(c), float(r)) for c, r in zip(combos, radii))
    return out


def cech_filtration(
    pair: ChromaticMetricPair,
    max_dim: int,
    simplex_budget: int = DEFAULT_SIMPLEX_BUDGET,
) -> Filtration:
    """Ambient Cech filtration: every simplex over the colored set with at
    most max_dim+1 vertices, valued at its circumradius."""
    if max_dim < 0:
        raise SizeBudget("max_dim must be non-negative")
    X = pair.colored_indices
    if _simplex_count(len(X), max_dim) > simplex_budget:
        raise SizeBudget(
            f"{_simplex_count(len(X), max_dim)} simplices exceed the budget {simplex_budget}"
        )
    return Filtration(tuple(_valued_simplices(pair, X, max_dim)), max_dim)


def chromatic_filtration(
    pair: ChromaticMetricPair,
    gamma: ComplexSpec,
    max_dim: int,
    simplex_budget: int = DEFAULT_SIMPLEX_BUDGET,
    warn: bool = True,
) -> Filtration:
    """The pattern subfiltration: simplices whose color set is a face of gamma.

    Vertices whose color lies outside gamma's universe cannot appear in any
    face and are dropped (with a warning, since that usually signals a
    mismatched pattern).  Values are circumradii in the full ambient space.
    """
    if max_dim < 0:
        raise SizeBudget("max_dim must be non-negative")
    uni = gamma.universe
    X = [i for i in pair.colored_indices if pair.coloring[i] in uni]
    dropped = [i for i in pair.colored_indices if pair.coloring[i] not in uni]
    if dropped and warn:
        warnings.warn(
            f"{len(dropped)} colored points fall outside the pattern universe "
            f"{sorted(uni)} and were dropped",
            ColorOutsidePatternWarning,
            stacklevel=2,
        )
    if _simplex_count(len(X), max_dim) > simplex_budget:
        raise SizeBudget("chromatic filtration exceeds the simplex budget")
    coloring = pair.coloring

    def admissible(verts):
        return gamma.contains({coloring[v] for v in verts})

    return Filtration(tuple(_valued_simplices(pair, X, max_dim, admissible)), max_dim)


class FilteredSpace:
    """A finite point set with a monotone filtration value on small subsets.

    Wraps the circumradius of a chromatic pair as a function on subsets of the
    colored set with at most max_dim+1 elements, with caching (tripod searches
    revisit the same subsets many times).
    """

    def __init__(self, pair: ChromaticMetricPair, max_dim: int):
        self.pair = pair
        self.max_dim = max_dim
        self.points = pair.colored_indices
        self._cache: dict = {}

    def value(self, subset: Iterable[int]) -> float:
        key = frozenset(subset)
        if not key:
            raise EmptySimplex("filtration value of the empty set")
        if len(key) > self.max_dim + 1:
            raise SizeBudget(
                f"subset of size {len(key)} exceeds the max_dim+1 = {self.max_dim + 1} cap"
            )
        if key not in self._cache:
            self._cache[key] = circumradius(self.pair, key)
        return self._cache[key]

    def __repr__(self):
        return f"FilteredSpace({len(self.points)} points, max_dim={self.max_dim})"


def filtered_space(pair: ChromaticMetricPair, max_dim: int) -> FilteredSpace:
    return FilteredSpace(pair, max_dim)


@dataclass(frozen=True, eq=False)
class Tripod:
    """A relation between two point sets covering both sides (a common
    parameter set mapping onto each space)."""

    points1: tuple
    points2: tuple
    pairs: frozenset

    def __post_init__(self):
        ps = frozenset((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", ps)
        p1 = set(self.points1)
        p2 = set(self.points2)
        for a, b in ps:
            if a not in p1 or b not in p2:
                raise IndexOutOfRange(f"tripod pair ({a}, {b}) off the point sets")
        if {a for a, _ in ps} != p1 or {b for _, b in ps} != p2:
            raise NotACorrespondence("tripod projections must cover both sides")


def _achievable_pairs(tripod: Tripod, cap1: int, cap2: int):
    """All (S1, S2) realizable as the two projections of a subset of the
    tripod relation, with |S1| <= cap1 and |S2| <= cap2.

    A pair is realizable iff the relation restricted to S1 x S2 still covers
    both sides; the filtration values only depend on these image sets.
    """
    partners1 = {a: set() for a in tripod.points1}
    partners2 = {b: set() for b in tripod.points2}
    for a, b in tripod.pairs:
        partners1[a].add(b)
        partners2[b].add(a)
    for k1 in range(1, cap1 + 1):
        for S1 in itertools.combinations(tripod.points1, k1):
            reach = set().union(*(partners1[a] for a in S1))
            for k2 in range(1, cap2 + 1):
                for S2 in itertools.combinations(sorted(reach), k2):
                    s2 = set(S2)
                    if all(partners1[a] & s2 for a in S1) and all(
                        partners2[b] & set(S1) for b in S2
                    ):
                        yield S1, S2


def tripod_defect(F1: FilteredSpace, F2: FilteredSpace, tripod: Tripod) -> float:
    """Worst filtration-value discrepancy over subsets of the tripod relation,
    with each projection capped at the corresponding max_dim+1 size."""
    if len(tripod.pairs) > 22:
        raise BudgetExceeded(f"tripod relation of {len(tripod.pairs)} pairs exceeds the 22 cap")
    worst = 0.0
    for S1, S2 in _achievable_pairs(tripod, F1.max_dim + 1, F2.max_dim + 1):
        gap = abs(F1.value(S1) - F2.value(S2))
        if gap > worst:
            worst = gap
    return worst


def filtration_distance(F1: FilteredSpace, F2: FilteredSpace) -> float:
    """Brute-force tripod distance: minimum defect over all relations covering
    both point sets (tripods factor through their image relation)."""
    n1 = len(F1.points)
    n2 = len(F2.points)
    if n1 * n2 > 9:
        raise BudgetExceeded(f"filtration_distance cap is 9 cells, got {n1 * n2}")
    cells = [(a, b) for a in F1.points for b in F2.points]
    best = math.inf
    for mask in range(1, 1 << len(cells)):
        chosen = [cells[k] for k in range(len(cells)) if mask >> k & 1]
        if {a for a, _ in chosen} != set(F1.points) or {b for _, b in chosen} != set(F2.points):
            continue
        defect = tripod_defect(F1, F2, Tripod(F1.points, F2.points, frozenset(chosen)))
        if defect < best:
            best = defect
    return best
