"""Finite metric spaces, colored pairs, and the comparison primitives.

The central objects are :class:`FiniteMetricSpace` (a validated distance
matrix) and :class:`ChromaticMetricPair` (an ambient space plus a partial
coloring of a subset of its points).  Relations and maps between two spaces
carry distortion/codistortion, and subsets inside one space carry plain and
color-constrained Hausdorff distances.  All values are immutable and every
operation is a pure function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    AsymmetricMatrix,
    EmptyRelation,
    EmptySubset,
    IndexOutOfRange,
    MetricError,
    MismatchedSpaces,
    NonzeroDiagonal,
    NotACorrespondence,
    TriangleViolation,
    ZeroOffDiagonal,
)


def metric_tolerance(d: np.ndarray) -> float:
    """Relative tolerance for metric-axiom checks: 1e-9 * (1 + max entry)."""
    top = float(d.max()) if d.size else 0.0
    return 1e-9 * (1.0 + top)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A finite (pseudo)metric space given by its distance matrix.

    Points are the indices 0..n-1.  The matrix is validated on construction
    through :func:`validate_metric`; ``pseudo`` marks spaces where distinct
    points may sit at distance zero (only glue_metric outputs set it).
    """

    d: np.ndarray
    pseudo: bool = False

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @property
    def tol(self) -> float:
        return metric_tolerance(self.d)

    def diameter(self, indices: Sequence[int] | None = None) -> float:
        if indices is None:
            return float(self.d.max())
        idx = list(indices)
        if not idx:
            raise EmptySubset("diameter of an empty subset")
        return float(self.d[np.ix_(idx, idx)].max())

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMetricSpace)
            and self.pseudo == other.pseudo
            and self.d.shape == other.d.shape
            and bool(np.array_equal(self.d, other.d))
        )

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n}, pseudo={self.pseudo})"


def validate_metric(matrix, allow_pseudo: bool = False) -> FiniteMetricSpace:
    """Validate a square matrix as a finite metric and wrap it.

    Checks, within the relative tolerance of :func:`metric_tolerance`: zero
    diagonal, symmetry, the triangle inequality (reporting the worst triple),
    and positivity off the diagonal unless ``allow_pseudo``.
    """
    d = np.array(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise MetricError(f"expected a non-empty square matrix, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise MetricError("distance entries must be finite")
    if float(d.min()) < 0.0:
        i, j = np.unravel_index(int(np.argmin(d)), d.shape)
        raise MetricError(f"negative distance d[{i}][{j}] = {d[i, j]}")
    tol = metric_tolerance(d)
    n = d.shape[0]

    diag = np.abs(np.diagonal(d))
    if float(diag.max()) > tol:
        i = int(np.argmax(diag))
        raise NonzeroDiagonal(f"d[{i}][{i}] = {d[i, i]} != 0")
    asym = np.abs(d - d.T)
    if float(asym.max()) > tol:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise AsymmetricMatrix(f"d[{i}][{j}] = {d[i, j]} != d[{j}][{i}] = {d[j, i]}")

    # Worst triangle violation: d[i,j] - min_k(d[i,k] + d[k,j]); the trivial
    # witnesses k = i, j make the minimum <= d[i,j], so positives are genuine.
    best = None
    for k in range(n):
        via_k = d[:, k : k + 1] + d[k : k + 1, :]
        best = via_k if best is None else np.minimum(best, via_k)
    gap = d - best
    if float(gap.max()) > tol:
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        k = int(np.argmin(d[i, :] + d[:, j]))
        raise TriangleViolation(
            f"d[{i}][{j}] = {d[i, j]} > d[{i}][{k}] + d[{k}][{j}] = {d[i, k] + d[k, j]}",
            triple=(int(i), int(j), k),
        )

    off = d + np.diag(np.full(n, np.inf))
    is_pseudo = bool(float(off.min()) <= tol) and n > 1
    if is_pseudo and not allow_pseudo:
        i, j = np.unravel_index(int(np.argmin(off)), off.shape)
        raise ZeroOffDiagonal(f"d[{i}][{j}] = {d[i, j]} for distinct points {i}, {j}")

    d.flags.writeable = False
    return FiniteMetricSpace(d=d, pseudo=is_pseudo and allow_pseudo)


@dataclass(frozen=True, eq=False)
class ChromaticMetricPair:
    """An ambient finite metric space with a coloring of a subset of points.

    ``coloring`` maps a subset X of ambient indices to non-negative integer
    colors; indices outside X are ambient-only.
    """

    ambient: FiniteMetricSpace
    coloring: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        n = self.ambient.n
        col = {}
        for i, c in dict(self.coloring).items():
            i = int(i)
            if not 0 <= i < n:
                raise IndexOutOfRange(f"colored index {i} outside 0..{n - 1}")
            if int(c) != c or int(c) < 0:
                raise MetricError(f"color of point {i} must be a non-negative integer, got {c!r}")
            col[i] = int(c)
        object.__setattr__(self, "coloring", col)

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def d(self) -> np.ndarray:
        return self.ambient.d

    @property
    def colored_indices(self) -> tuple:
        return tuple(sorted(self.coloring))

    @property
    def colors_used(self) -> frozenset:
        return frozenset(self.coloring.values())

    def color_class(self, sigma: Iterable[int]) -> tuple:
        """Indices of points whose color lies in the color set sigma."""
        s = frozenset(sigma)
        return tuple(i for i in sorted(self.coloring) if self.coloring[i] in s)

    def __eq__(self, other):
        return (
            isinstance(other, ChromaticMetricPair)
            and self.ambient == other.ambient
            and self.coloring == other.coloring
        )

    def __repr__(self):
        return f"ChromaticMetricPair(n={self.n}, colored={len(self.coloring)})"


def chromatic_space(space: FiniteMetricSpace, colors: Sequence[int]) -> ChromaticMetricPair:
    """Pair where every point is colored (a chromatic metric space)."""
    if len(colors) != space.n:
        raise MetricError("one color per point required")
    return ChromaticMetricPair(space, dict(enumerate(colors)))


SpaceLike = Union[FiniteMetricSpace, ChromaticMetricPair]


def _ambient(space: SpaceLike) -> FiniteMetricSpace:
    return space.ambient if isinstance(space, ChromaticMetricPair) else space


@dataclass(frozen=True, eq=False)
class Relation:
    """A set of (source index, target index) pairs between two spaces."""

    source: SpaceLike
    target: SpaceLike
    pairs: frozenset

    def __post_init__(self):
        ps = frozenset((int(a), int(b)) for a, b in self.pairs)
        n1 = _ambient(self.source).n
        n2 = _ambient(self.target).n
        for a, b in ps:
            if not (0 <= a < n1 and 0 <= b < n2):
                raise IndexOutOfRange(f"relation pair ({a}, {b}) out of range")
        object.__setattr__(self, "pairs", ps)

    def inverse(self) -> "Relation":
        return Relation(self.target, self.source, frozenset((b, a) for a, b in self.pairs))

    def is_correspondence(self) -> bool:
        n1 = _ambient(self.source).n
        n2 = _ambient(self.target).n
        return (
            len({a for a, _ in self.pairs}) == n1 and len({b for _, b in self.pairs}) == n2
        )

    def __repr__(self):
        return f"Relation({len(self.pairs)} pairs)"


@dataclass(frozen=True, eq=False)
class MapSpec:
    """A total map between the ambient sets of two chromatic pairs."""

    source: ChromaticMetricPair
    target: ChromaticMetricPair
    assignment: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.assignment)
        if len(a) != self.source.n:
            raise MismatchedSpaces("assignment must be total on the source ambient set")
        if a and not all(0 <= x < self.target.n for x in a):
            raise IndexOutOfRange("assignment hits an index outside the target space")
        object.__setattr__(self, "assignment", a)

    def graph(self) -> Relation:
        return Relation(
            self.source, self.target, frozenset(enumerate(self.assignment))
        )

    def __call__(self, i: int) -> int:
        return self.assignment[i]


def identity_map(pair: ChromaticMetricPair) -> MapSpec:
    return MapSpec(pair, pair, tuple(range(pair.n)))


def distortion(rel: Union[Relation, MapSpec]) -> float:
    """Worst discrepancy |d_src - d_tgt| over pairs of related pairs.

    The distortion of a map is the distortion of its graph.
    """
    if isinstance(rel, MapSpec):
        rel = rel.graph()
    if not rel.pairs:
        raise EmptyRelation("distortion of an empty relation")
    P = np.array(sorted(rel.pairs), dtype=np.intp)
    d1 = _ambient(rel.source).d
    d2 = _ambient(rel.target).d
    D1 = d1[np.ix_(P[:, 0], P[:, 0])]
    D2 = d2[np.ix_(P[:, 1], P[:, 1])]
    return float(np.abs(D1 - D2).max())


def codistortion(f: MapSpec, g: MapSpec) -> float:
    """max over (x, y) of |d1(x, g(y)) - d2(f(x), y)| for f: A1->A2, g: A2->A1."""
    if f.source.n != g.target.n or f.target.n != g.source.n:
        raise MismatchedSpaces("codistortion needs f: A1->A2 and g: A2->A1")
    d1 = f.source.ambient.d
    d2 = f.target.ambient.d
    gi = np.asarray(g.assignment, dtype=np.intp)
    fi = np.asarray(f.assignment, dtype=np.intp)
    lhs = d1[:, gi]      # (x, y) -> d1(x, g(y))
    rhs = d2[fi, :]      # (x, y) -> d2(f(x), y)
    return float(np.abs(lhs - rhs).max())


def hausdorff(space: SpaceLike, A: Sequence[int], B: Sequence[int]) -> float:
    """Hausdorff distance between two non-empty index subsets of one space."""
    d = _ambient(space).d
    A = list(A)
    B = list(B)
    if not A or not B:
        raise EmptySubset("hausdorff of an empty subset")
    sub = d[np.ix_(A, B)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def constrained_hausdorff(
    pair: ChromaticMetricPair, Y: Sequence[int], Z: Sequence[int], C
) -> float:
    """Color-constrained Hausdorff distance inside one chromatic pair.

    Equals max(d_H(Y, Z), max over constraint sets sigma of d_H(Y_sigma,
    Z_sigma)); +inf when some sigma has points on exactly one side (no
    sigma-constrained correspondence exists then).
    """
    Y = sorted(set(int(i) for i in Y))
    Z = sorted(set(int(i) for i in Z))
    if not Y or not Z:
        raise EmptySubset("constrained_hausdorff of an empty subset")
    colored = set(pair.coloring)
    for i in Y + Z:
        if i not in colored:
            raise IndexOutOfRange(f"index {i} is not in the colored set of the pair")
    best = hausdorff(pair, Y, Z)
    if C.ambient_only:
        return best
    Cx = C.expand_universe(pair.colors_used)
    for sigma in Cx.effective_sets():
        Ys = [i for i in Y if pair.coloring[i] in sigma]
        Zs = [i for i in Z if pair.coloring[i] in sigma]
        if bool(Ys) != bool(Zs):
            return math.inf
        if Ys:
            best = max(best, hausdorff(pair, Ys, Zs))
    return best


def glue_metric(
    X: FiniteMetricSpace, Y: FiniteMetricSpace, R: Relation
) -> FiniteMetricSpace:
    """Glue two metrics along a correspondence R.

    The result lives on the disjoint union (X first, then Y), restricts to the
    inputs bit-exactly, and sets cross distances to
    min over (x, y) in R of d_X(z, x) + eps + d_Y(y, z') with eps = dis R / 2.
    The Hausdorff distance between the two halves is then at most eps; the
    pseudometric flag is set when dis R = 0 (matched points collapse).
    """
    if not R.is_correspondence():
        raise NotACorrespondence("glue_metric needs a correspondence")
    eps = distortion(R) / 2.0
    n, m = X.n, Y.n
    dX, dY = X.d, Y.d
    cross = np.full((n, m), np.inf)
    for x, y in sorted(R.pairs):
        np.minimum(cross, dX[:, x : x + 1] + eps + dY[y : y + 1, :], out=cross)
    out = np.empty((n + m, n + m), dtype=np.float64)
    out[:n, :n] = dX
    out[n:, n:] = dY
    out[:n, n:] = cross
    out[n:, :n] = cross.T
    pseudo = eps == 0.0 or X.pseudo or Y.pseudo
    glued = validate_metric(out, allow_pseudo=pseudo)
    # Restriction must be bit-exact, not merely tolerance-close.
    assert np.array_equal(glued.d[:n, :n], dX) and np.array_equal(glued.d[n:, n:], dY)
    return glued


def subspace(pair: ChromaticMetricPair, indices: Sequence[int]) -> ChromaticMetricPair:
    """Restrict a chromatic pair to a subset of ambient indices.

    Indices are deduplicated and kept in sorted order; the coloring restricts
    to the retained points.
    """
    idx = sorted(set(int(i) for i in indices))
    n = pair.n
    for i in idx:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"index {i} outside 0..{n - 1}")
    if not idx:
        raise EmptySubset("subspace needs at least one index")
    sub = pair.ambient.d[np.ix_(idx, idx)].copy()
    sub.flags.writeable = False
    space = FiniteMetricSpace(d=sub, pseudo=pair.ambient.pseudo)
    pos = {orig: new for new, orig in enumerate(idx)}
    colors = {pos[i]: c for i, c in pair.coloring.items() if i in pos}
    return ChromaticMetricPair(space, colors)
