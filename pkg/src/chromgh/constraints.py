"""Constraint-set algebra over a finite color universe.

A constraint set is a family of color sets; a map between chromatic pairs is
admissible when every class of points colored inside a member lands inside the
same member on the other side.  The minimal sets sigma_n (intersection of all
members containing color n) generate an Alexandrov topology whose inclusion
order captures exactly the relative strength of constraint sets, so strength
comparison, candidate-target computation and correspondence checks all go
through the sigma family.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import MetricError, SizeBudget, UniverseMismatch
from .metric import ChromaticMetricPair, MapSpec, Relation

UNIVERSE_TOKEN = "N"

_MAX_TOPOLOGY_COLORS = 20


def _as_color_set(s) -> frozenset:
    out = frozenset(int(c) for c in s)
    if any(c < 0 for c in out):
        raise MetricError("colors must be non-negative integers")
    return out


def _canonical(sets: Iterable[frozenset]) -> tuple:
    return tuple(sorted(set(sets), key=lambda s: (len(s), sorted(s))))


@dataclass(frozen=True)
class ConstraintSet:
    """A normalized family of color sets over an explicit finite universe.

    The full universe is always an (implicit) member, mirroring the standing
    normalization that the set of all colors belongs to every constraint set;
    it tracks the universe when the latter grows via :meth:`expand_universe`.
    Explicitly given members are kept verbatim.  ``ambient_only`` encodes the
    empty constraint set with no normalization at all: no color constraints,
    not even colored-to-colored.
    """

    universe: frozenset
    members: tuple
    ambient_only: bool = False

    @staticmethod
    def make(sets=(), universe=None, ambient_only: bool = False) -> "ConstraintSet":
        if ambient_only:
            if tuple(sets):
                raise MetricError("ambient_only constraint sets must have no members")
            return ConstraintSet(frozenset() if universe is None else _as_color_set(universe), (), True)
        members = []
        for s in sets:
            if isinstance(s, str):
                if s != UNIVERSE_TOKEN:
                    raise MetricError(f"unknown constraint token {s!r}")
                # the universe member is implicit; the token adds nothing
                continue
            members.append(_as_color_set(s))
        if universe is not None:
            uni = _as_color_set(universe)
        else:
            uni = frozenset().union(*members) if members else frozenset()
        for m in members:
            if not m <= uni:
                raise UniverseMismatch(f"member {sorted(m)} outside the universe {sorted(uni)}")
        return ConstraintSet(uni, _canonical(members), False)

    @staticmethod
    def trivial(universe) -> "ConstraintSet":
        return ConstraintSet.make((), universe)

    @staticmethod
    def discrete(universe) -> "ConstraintSet":
        """The full power set of the universe (all constraints)."""
        uni = sorted(_as_color_set(universe))
        if len(uni) > _MAX_TOPOLOGY_COLORS:
            raise SizeBudget("discrete constraint set over too many colors")
        subsets = [frozenset()]
        for c in uni:
            subsets += [s | {c} for s in subsets]
        return ConstraintSet.make(subsets, universe=uni)

    @staticmethod
    def singletons(universe) -> "ConstraintSet":
        return ConstraintSet.make([{c} for c in _as_color_set(universe)], universe=universe)

    def expand_universe(self, colors) -> "ConstraintSet":
        extra = _as_color_set(colors)
        if extra <= self.universe:
            return self
        return ConstraintSet(self.universe | extra, self.members, self.ambient_only)

    def effective_sets(self) -> tuple:
        """All members including the implicit universe member."""
        if self.ambient_only:
            return ()
        return _canonical(self.members + (self.universe,))

    def __repr__(self):
        if self.ambient_only:
            return "ConstraintSet(ambient_only)"
        mem = ", ".join("{" + ",".join(map(str, sorted(s))) + "}" for s in self.members)
        return f"ConstraintSet(universe={sorted(self.universe)}, members=[{mem}])"


@dataclass(frozen=True)
class ColorTopology:
    """An Alexandrov topology on a finite color universe with its sigma base."""

    universe: frozenset
    opens: frozenset
    base: tuple

    def contains(self, s) -> bool:
        return frozenset(s) in self.opens


def sigma_family(C: ConstraintSet) -> dict:
    """The minimal constraint containing each color: sigma_n = intersection of
    all members containing n (the whole universe when only the implicit
    universe member contains n)."""
    fam = {}
    sets = C.effective_sets()
    for n in sorted(C.universe):
        holding = [s for s in sets if n in s]
        sig = frozenset(C.universe)
        for s in holding:
            sig &= s
        fam[n] = sig
    return fam


def topology(C: ConstraintSet) -> ColorTopology:
    """The topology generated by the sigma family (all unions of base sets).

    This is the smallest Alexandrov topology containing the constraint set;
    two constraint sets admit exactly the same constrained maps iff they
    generate the same topology.
    """
    if len(C.universe) > _MAX_TOPOLOGY_COLORS:
        raise SizeBudget(f"topology over {len(C.universe)} colors")
    fam = sigma_family(C)
    base = sorted(set(fam.values()), key=lambda s: (len(s), sorted(s)))
    opens = {frozenset()}
    for b in base:
        opens |= {u | b for u in opens}
    return ColorTopology(C.universe, frozenset(opens), tuple(base))


def compare_strength(C1: ConstraintSet, C2: ConstraintSet) -> str:
    """Compare constraint strength: 'stronger', 'weaker', 'equal' or 'incomparable'.

    Both sets are first re-normalized over the union of their universes; the
    comparison is inclusion of the generated topologies.
    """
    uni = C1.universe | C2.universe
    T1 = topology(C1.expand_universe(uni)).opens
    T2 = topology(C2.expand_universe(uni)).opens
    if T1 == T2:
        return "equal"
    if T1 >= T2:
        return "stronger"
    if T1 <= T2:
        return "weaker"
    return "incomparable"


def _check_universe(C: ConstraintSet, *pairs: ChromaticMetricPair):
    for p in pairs:
        if not p.colors_used <= C.universe:
            raise UniverseMismatch(
                f"pair uses colors {sorted(p.colors_used - C.universe)} outside the universe"
            )


def is_constrained_map(f: MapSpec, C: ConstraintSet) -> bool:
    """True iff every member-colored source point maps to a point colored in
    the same member.  Uncolored points are unconstrained; the implicit
    universe member forces colored points to land on colored points."""
    if C.ambient_only:
        return True
    _check_universe(C, f.source, f.target)
    return constrained_violation(f, C) is None


def constrained_violation(f: MapSpec, C: ConstraintSet):
    """First (sigma, witness index) violated by f, or None.  Sets are tried in
    canonical order and witnesses in index order, so reports are stable."""
    if C.ambient_only:
        return None
    src, tgt = f.source, f.target
    for sigma in C.effective_sets():
        for x in src.color_class(sigma):
            y = f.assignment[x]
            cy = tgt.coloring.get(y)
            if cy is None or cy not in sigma:
                return sigma, x
    return None


def is_constrained_correspondence(R: Relation, C: ConstraintSet) -> bool:
    """True iff R is a correspondence and each member-restriction is one too.

    The restriction of R to the sigma-colored points on both sides must cover
    both classes; classes empty on both sides restrict to the (vacuously
    covering) empty correspondence.
    """
    if not R.is_correspondence():
        return False
    if C.ambient_only:
        return True
    src = R.source
    tgt = R.target
    if not (isinstance(src, ChromaticMetricPair) and isinstance(tgt, ChromaticMetricPair)):
        raise MetricError("constrained correspondences need chromatic pairs on both sides")
    Cx = C.expand_universe(src.colors_used | tgt.colors_used)
    for sigma in Cx.effective_sets():
        left = set(src.color_class(sigma))
        right = set(tgt.color_class(sigma))
        if not left and not right:
            continue
        sub = [(a, b) for a, b in R.pairs if a in left and b in right]
        if {a for a, _ in sub} != left or {b for _, b in sub} != right:
            return False
    return True


def candidate_targets(src: ChromaticMetricPair, tgt: ChromaticMetricPair, C: ConstraintSet):
    """Admissible target indices per source point, or None when no constrained
    map exists.

    A point colored n may go exactly to the sigma_n-colored targets (the
    sigma-family restriction is equivalent to the full constraint family);
    uncolored points may go anywhere.
    """
    everything = list(range(tgt.n))
    if C.ambient_only:
        return [everything for _ in range(src.n)]
    Cx = C.expand_universe(src.colors_used | tgt.colors_used)
    fam = sigma_family(Cx)
    class_cache = {}
    out = []
    for i in range(src.n):
        c = src.coloring.get(i)
        if c is None:
            out.append(everything)
            continue
        sig = fam[c]
        if sig not in class_cache:
            class_cache[sig] = list(tgt.color_class(sig))
        cands = class_cache[sig]
        if not cands:
            return None
        out.append(cands)
    return out
