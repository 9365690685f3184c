"""Persistence over the two-element field: diagrams, six-packs, rank oracle,
and the bottleneck distance.

Diagrams come from boundary-matrix column reduction in the canonical simplex
order (value, dimension, vertices), with the half-open [birth, death)
convention and zero-length intervals dropped.  The six-pack bundles the
domain, codomain, image, kernel, cokernel and relative diagrams of the
inclusion of a pattern subfiltration into a larger one; image/kernel/cokernel
diagrams are recovered from reduction-derived cycle and boundary bases by
inclusion-exclusion over the critical grid, while ``rank_oracle`` recomputes
any structure-map rank from scratch and is the binding correctness contract.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple, Union

from . import _kernels
from .cech import ComplexSpec, Filtration, chromatic_filtration, simplex_sort_key
from .errors import (
    DegreeMismatch,
    InsufficientDimension,
    NotASubcomplex,
)
from .metric import ChromaticMetricPair


class DiagramPoint(NamedTuple):
    birth: float
    death: float


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """A finite multiset of birth-death pairs in one homology degree.

    Deaths may be +inf; births are strictly below deaths (trivial intervals
    are dropped at emission and rejected here).
    """

    degree: int
    points: tuple

    def __post_init__(self):
        pts = tuple(sorted(DiagramPoint(float(b), float(d)) for b, d in self.points))
        for b, d in pts:
            if not b < d:
                raise ValueError(f"diagram point ({b}, {d}) must have birth < death")
        object.__setattr__(self, "points", pts)

    def count_alive(self, t: float) -> int:
        return sum(1 for b, d in self.points if b <= t < d)

    def count_rect(self, s: float, t: float) -> int:
        """Points with birth <= s and death > t: the rank of the structure map
        from s to t in the decomposed module."""
        return sum(1 for b, d in self.points if b <= s and d > t)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, PersistenceDiagram)
            and self.degree == other.degree
            and self.points == other.points
        )

    def __repr__(self):
        return f"PersistenceDiagram(degree={self.degree}, {list(self.points)})"


@dataclass(frozen=True)
class SixPack:
    dom: PersistenceDiagram
    cod: PersistenceDiagram
    img: PersistenceDiagram
    ker: PersistenceDiagram
    cok: PersistenceDiagram
    rel: PersistenceDiagram

    @property
    def degree(self) -> int:
        return self.dom.degree

    def as_dict(self) -> dict:
        return {
            "dom": self.dom,
            "cod": self.cod,
            "img": self.img,
            "ker": self.ker,
            "cok": self.cok,
            "rel": self.rel,
        }


# ---------------------------------------------------------------------------
# reduction pipeline


def _ordered(filtration: Filtration):
    return list(filtration.simplices)  # already canonical


def _boundary_columns(simplices, members=None):
    """Bitmask boundary columns in the given order; faces outside ``members``
    (when given) are quotiented away."""
    pos = {verts: k for k, (verts, _) in enumerate(simplices)}
    cols = []
    for verts, _ in simplices:
        col = 0
        if len(verts) > 1:
            for v in verts:
                face = verts - {v}
                k = pos.get(face)
                if k is None:
                    if members is None:
                        raise InsufficientDimension(
                            f"face {sorted(face)} missing from the filtration"
                        )
                    continue
                col |= 1 << k
        cols.append(col)
    return cols


def _pairing_points(simplices, R, lows, p):
    """Degree-p diagram points from a reduced boundary matrix."""
    killed = set()
    points = []
    for j, low in enumerate(lows):
        if low < 0:
            continue
        killed.add(low)
        verts_i, val_i = simplices[low]
        _, val_j = simplices[j]
        if len(verts_i) - 1 == p and val_i < val_j:
            points.append((val_i, val_j))
    for j, (verts, val) in enumerate(simplices):
        if len(verts) - 1 == p and R[j] == 0 and j not in killed:
            points.append((val, math.inf))
    return points


def dgm(filtration: Filtration, p: int) -> PersistenceDiagram:
    """Degree-p persistence diagram of a monotone filtration over F2."""
    if p < 0:
        raise InsufficientDimension("degree must be non-negative")
    if filtration.max_dim < p + 1:
        raise InsufficientDimension(
            f"degree {p} needs simplices of dimension {p + 1}; filtration caps at {filtration.max_dim}"
        )
    simplices = _ordered(filtration)
    R, _, lows = _kernels.reduce_columns(_boundary_columns(simplices))
    return PersistenceDiagram(p, tuple(_pairing_points(simplices, R, lows, p)))


# ---------------------------------------------------------------------------
# F2 span utilities for the image/kernel/cokernel tables


def _ech_add(ech: dict, vec: int) -> bool:
    while vec:
        piv = vec.bit_length() - 1
        other = ech.get(piv)
        if other is None:
            ech[piv] = vec
            return True
        vec ^= other
    return False


def _span_kernel(vecs, mod_ech):
    """Basis of span(vecs) ∩ span(mod_ech) via residue elimination with
    tracked combinations.

    Work-eliminations can re-expose pivots owned by the modulo echelon, so
    reduction against it is interleaved; every stored residue keeps a top
    pivot outside the modulo span.
    """
    out = []
    work = {}
    for v in vecs:
        r = v
        t = v
        while r:
            piv = r.bit_length() - 1
            mod = mod_ech.get(piv)
            if mod is not None:
                r ^= mod
                continue
            got = work.get(piv)
            if got is None:
                work[piv] = (r, t)
                break
            r ^= got[0]
            t ^= got[1]
        if r == 0:
            out.append(t)
    return out


def _remap_bits(vec: int, remap) -> int:
    out = 0
    while vec:
        low = vec & -vec
        out |= 1 << remap[low.bit_length() - 1]
        vec ^= low
    return out


def _degree_generators(simplices, p, global_pos):
    """(cycle gens, boundary gens) for degree p from one reduction, both as
    (value, vector) lists over the global p-simplex coordinates, value-sorted.

    Cycle generators are the V-columns of positive p-simplices (independent,
    one per new cycle); boundary generators are the reduced R-columns of
    negative (p+1)-simplices (independent, spanning the boundaries at every
    prefix).
    """
    R, V, lows = _kernels.reduce_columns(_boundary_columns(simplices))
    remap = {k: global_pos[verts] for k, (verts, _) in enumerate(simplices) if len(verts) - 1 == p}
    Z = []
    B = []
    for j, (verts, val) in enumerate(simplices):
        dim = len(verts) - 1
        if dim == p and R[j] == 0:
            Z.append((val, _remap_bits(V[j], remap)))
        elif dim == p + 1 and R[j] != 0:
            B.append((val, _remap_bits(R[j], remap)))
    Z.sort(key=lambda g: g[0])
    B.sort(key=lambda g: g[0])
    return Z, B


def _prefix_counts(gens, grid):
    counts = []
    idx = 0
    for t in grid:
        while idx < len(gens) and gens[idx][0] <= t:
            idx += 1
        counts.append(idx)
    return counts


def _union_dims(seed_vecs, gens, grid):
    """dims[j] = dim span(seed ∪ {vec : value <= grid[j]})."""
    ech = {}
    cur = 0
    for v in seed_vecs:
        if _ech_add(ech, v):
            cur += 1
    dims = []
    idx = 0
    for t in grid:
        while idx < len(gens) and gens[idx][0] <= t:
            if _ech_add(ech, gens[idx][1]):
                cur += 1
            idx += 1
        dims.append(cur)
    return dims


def _prefix_dims(gens, grid):
    return _union_dims((), gens, grid)


def _diagram_from_ranks(rank_rows, grid, degree) -> PersistenceDiagram:
    """Interval multiplicities by inclusion-exclusion over the rank function.

    rank_rows[i][j] (0-based) is the rank of the structure map from grid[i] to
    grid[j] for i <= j; the module vanishes before grid[0] and is constant
    after grid[-1].
    """
    k = len(grid)

    def rank(i, j):
        if i == 0:
            return 0
        return rank_rows[i - 1][j - 1]

    points = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            mult = rank(i, j - 1) - rank(i, j) - rank(i - 1, j - 1) + rank(i - 1, j)
            if mult < 0:
                raise AssertionError("negative interval multiplicity: rank table is inconsistent")
            points.extend([(grid[i - 1], grid[j - 1])] * mult)
        mult = rank(i, k) - rank(i - 1, k)
        if mult < 0:
            raise AssertionError("negative essential multiplicity: rank table is inconsistent")
        points.extend([(grid[i - 1], math.inf)] * mult)
    return PersistenceDiagram(degree, tuple(points))


def _relative_points(gsimplices, in_lambda, p):
    rel = [(verts, val) for verts, val in gsimplices if not in_lambda(verts)]
    rel.sort(key=simplex_sort_key)
    members = {verts for verts, _ in rel}
    R, _, lows = _kernels.reduce_columns(_boundary_columns(rel, members=members))
    return _pairing_points(rel, R, lows, p)


def sixpack(
    pair: ChromaticMetricPair,
    lam: ComplexSpec,
    gam: ComplexSpec,
    p: int,
    simplex_budget: int = 2_000_000,
    warn: bool = True,
) -> SixPack:
    """The six persistence diagrams of the inclusion of the lam-subfiltration
    into the gam-subfiltration of a chromatic pair, in degree p.

    dom/cod/rel come from direct reductions (of the two filtrations and of the
    quotient complex); img/ker/cok come from the reduction-derived cycle and
    boundary bases through their rank functions.  All six agree with
    ``rank_oracle`` at every pair of critical values; the test suite enforces
    that contract.
    """
    if not lam.is_subcomplex_of(gam):
        raise NotASubcomplex("lam must be a subcomplex of gam (maximal-face containment)")
    if p < 0:
        raise InsufficientDimension("degree must be non-negative")
    max_dim = p + 1
    gfilt = chromatic_filtration(pair, gam, max_dim, simplex_budget, warn=warn)
    coloring = pair.coloring

    def in_lambda(verts):
        return lam.contains({coloring[v] for v in verts})

    gsimplices = _ordered(gfilt)
    lsimplices = [s for s in gsimplices if in_lambda(s[0])]
    lfilt = Filtration(tuple(lsimplices), max_dim)
    lsimplices = _ordered(lfilt)

    dom = dgm(lfilt, p)
    cod = dgm(gfilt, p)
    rel = PersistenceDiagram(p, tuple(_relative_points(gsimplices, in_lambda, p)))

    grid = list(gfilt.critical_values())
    global_pos = {
        verts: k
        for k, (verts, _) in enumerate(v for v in gsimplices if len(v[0]) - 1 == p)
    }
    ZL, BL = _degree_generators(lsimplices, p, global_pos)
    ZG, BG = _degree_generators(gsimplices, p, global_pos)

    k = len(grid)
    dim_BG = _prefix_counts(BG, grid)
    dim_BL = _prefix_counts(BL, grid)
    zl_at = _prefix_counts(ZL, grid)
    zg_at = _prefix_counts(ZG, grid)
    merged = sorted(BG + ZL, key=lambda g: g[0])
    dim_T2 = _prefix_dims(merged, grid)

    img_rows = []
    ker_rows = []
    cok_rows = []
    for i in range(k):
        zl_vecs = [vec for _, vec in ZL[: zl_at[i]]]
        img_dims = _union_dims(zl_vecs, BG, grid)
        img_rows.append([img_dims[j] - dim_BG[j] for j in range(k)])

        bg_ech = {}
        for val, vec in BG:
            if val <= grid[i]:
                _ech_add(bg_ech, vec)
        W = _span_kernel(zl_vecs, bg_ech)
        ker_dims = _union_dims(W, BL, grid)
        ker_rows.append([ker_dims[j] - dim_BL[j] for j in range(k)])

        zg_vecs = [vec for _, vec in ZG[: zg_at[i]]]
        cok_dims = _union_dims(zg_vecs, merged, grid)
        cok_rows.append([cok_dims[j] - dim_T2[j] for j in range(k)])

    img = _diagram_from_ranks(img_rows, grid, p)
    ker = _diagram_from_ranks(ker_rows, grid, p)
    cok = _diagram_from_ranks(cok_rows, grid, p)
    return SixPack(dom=dom, cod=cod, img=img, ker=ker, cok=cok, rel=rel)


# ---------------------------------------------------------------------------
# rank oracle: from-scratch linear algebra, deliberately sharing no code with
# the reduction pipeline above


def _o_present(filtration: Filtration, value: float, exclude=None):
    out = []
    for verts, t in filtration.simplices:
        if t <= value and (exclude is None or verts not in exclude):
            out.append((verts, t))
    return out


def _o_dim(vectors) -> int:
    pivots = {}
    dim = 0
    for v in vectors:
        while v:
            piv = v.bit_length() - 1
            if piv not in pivots:
                pivots[piv] = v
                dim += 1
                break
            v ^= pivots[piv]
    return dim


def _o_kernel(columns):
    """Kernel of a bitmask-column matrix, as combinations of column indices."""
    pivots = {}
    kernel = []
    for idx, col in enumerate(columns):
        combo = 1 << idx
        while col:
            piv = col.bit_length() - 1
            got = pivots.get(piv)
            if got is None:
                pivots[piv] = (col, combo)
                break
            col ^= got[0]
            combo ^= got[1]
        if col == 0:
            kernel.append(combo)
    return kernel


def _o_intersection(vectors, modulo):
    """Basis of span(vectors) ∩ span(modulo), fresh elimination."""
    mod_pivots = {}
    for v in modulo:
        while v:
            piv = v.bit_length() - 1
            if piv not in mod_pivots:
                mod_pivots[piv] = v
                break
            v ^= mod_pivots[piv]
    out = []
    work = {}
    for v in vectors:
        r = v
        t = v
        while r:
            piv = r.bit_length() - 1
            if piv in mod_pivots:  # interleave: work XORs can re-expose these
                r ^= mod_pivots[piv]
                continue
            got = work.get(piv)
            if got is None:
                work[piv] = (r, t)
                break
            r ^= got[0]
            t ^= got[1]
        if r == 0:
            out.append(t)
    return out


def _o_boundary_cols(present, dim, pos_of_face):
    """Columns of the boundary of the dim-simplices in ``present``, with rows
    given by pos_of_face (faces missing from it are quotiented away)."""
    cols = []
    for verts, _ in present:
        if len(verts) - 1 != dim:
            continue
        col = 0
        for v in verts:
            k = pos_of_face.get(verts - {v})
            if k is not None:
                col |= 1 << k
        cols.append(col)
    return cols


def _o_cycles(present, p, global_p_pos):
    """Basis of the p-cycles of the listed simplices, over global coordinates."""
    plist = [verts for verts, _ in present if len(verts) - 1 == p]
    qpos = {}
    for verts, _ in present:
        if len(verts) - 1 == p - 1:
            qpos[verts] = len(qpos)
    cols = []
    for verts in plist:
        col = 0
        if p > 0:
            for v in verts:
                col |= 1 << qpos[verts - {v}]
        cols.append(col)
    combos = _o_kernel(cols)
    out = []
    for combo in combos:
        vec = 0
        while combo:
            low = combo & -combo
            vec |= 1 << global_p_pos[plist[low.bit_length() - 1]]
            combo ^= low
        out.append(vec)
    return out


def _o_boundaries(present, p, global_p_pos):
    """Spanning vectors of the p-boundaries of the listed simplices."""
    cols = []
    for verts, _ in present:
        if len(verts) - 1 != p + 1:
            continue
        col = 0
        for v in verts:
            face = verts - {v}
            if face in global_p_pos:
                col |= 1 << global_p_pos[face]
        cols.append(col)
    return cols


FiltrationsArg = Union[Filtration, Tuple[Filtration, Filtration]]


def rank_oracle(filtrations: FiltrationsArg, p: int, s: float, t: float, kind: str) -> int:
    """Rank of the degree-p structure map from index s to index t of the
    selected six-pack module, computed from scratch.

    For a module's diagram D the count of points with birth <= s and death > t
    must equal this rank; that agreement is the binding correctness contract
    for ``dgm`` and ``sixpack``.  ``dom`` reads the first (or only) filtration,
    ``cod`` the second (or only); the remaining kinds need the nested pair.
    """
    if s > t:
        raise ValueError("rank_oracle needs s <= t")
    if kind not in {"dom", "cod", "img", "ker", "cok", "rel"}:
        raise ValueError(f"unknown module kind {kind!r}")
    if isinstance(filtrations, Filtration):
        lam_f = gam_f = filtrations
        if kind not in {"dom", "cod"}:
            raise ValueError(f"kind {kind!r} needs a (lam, gam) filtration pair")
    else:
        lam_f, gam_f = filtrations
    if min(lam_f.max_dim, gam_f.max_dim) < p + 1:
        raise InsufficientDimension(
            f"degree {p} needs max_dim >= {p + 1}, filtration caps at "
            f"{min(lam_f.max_dim, gam_f.max_dim)}"
        )

    if kind in {"dom", "cod"}:
        filt = lam_f if kind == "dom" else gam_f
        present_t = _o_present(filt, t)
        gpos = {verts: k for k, (verts, _) in enumerate(v for v in present_t if len(v[0]) - 1 == p)}
        Zs = _o_cycles(_o_present(filt, s), p, gpos)
        Bt = _o_boundaries(present_t, p, gpos)
        return _o_dim(Zs + Bt) - _o_dim(Bt)

    if kind == "rel":
        lam_members_t = {verts for verts, _ in _o_present(lam_f, t)}
        rel_t = _o_present(gam_f, t, exclude=lam_members_t)
        lam_members_s = {verts for verts, _ in _o_present(lam_f, s)}
        rel_s = _o_present(gam_f, s, exclude=lam_members_s)
        gpos = {verts: k for k, (verts, _) in enumerate(v for v in rel_t if len(v[0]) - 1 == p)}
        # cycles of the quotient complex at s, over global rel coordinates
        plist = [verts for verts, _ in rel_s if len(verts) - 1 == p]
        qindex = {}
        for verts, _ in rel_s:
            if len(verts) - 1 == p - 1:
                qindex[verts] = len(qindex)
        cols = []
        for verts in plist:
            col = 0
            if p > 0:
                for v in verts:
                    face = verts - {v}
                    if face in qindex:
                        col |= 1 << qindex[face]
            cols.append(col)
        Zs = []
        for combo in _o_kernel(cols):
            vec = 0
            while combo:
                low = combo & -combo
                vec |= 1 << gpos[plist[low.bit_length() - 1]]
                combo ^= low
            Zs.append(vec)
        Bt = []
        for verts, _ in rel_t:
            if len(verts) - 1 != p + 1:
                continue
            col = 0
            for v in verts:
                face = verts - {v}
                if face in gpos:
                    col |= 1 << gpos[face]
            Bt.append(col)
        return _o_dim(Zs + Bt) - _o_dim(Bt)

    gam_t = _o_present(gam_f, t)
    gpos = {verts: k for k, (verts, _) in enumerate(v for v in gam_t if len(v[0]) - 1 == p)}
    if kind == "img":
        ZLs = _o_cycles(_o_present(lam_f, s), p, gpos)
        BGt = _o_boundaries(gam_t, p, gpos)
        return _o_dim(ZLs + BGt) - _o_dim(BGt)
    if kind == "ker":
        ZLs = _o_cycles(_o_present(lam_f, s), p, gpos)
        BGs = _o_boundaries(_o_present(gam_f, s), p, gpos)
        W = _o_intersection(ZLs, BGs)
        BLt = _o_boundaries(_o_present(lam_f, t), p, gpos)
        return _o_dim(W + BLt) - _o_dim(BLt)
    # cok
    ZGs = _o_cycles(_o_present(gam_f, s), p, gpos)
    BGt = _o_boundaries(gam_t, p, gpos)
    ZLt = _o_cycles(_o_present(lam_f, t), p, gpos)
    return _o_dim(ZGs + BGt + ZLt) - _o_dim(BGt + ZLt)


# ---------------------------------------------------------------------------
# bottleneck distance


def _hopcroft_karp(adj, n_left, n_right) -> int:
    """Maximum bipartite matching size; adj[i] lists right neighbours of i."""
    INF = math.inf
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    size = 0
    while True:
        dist = [INF] * n_left
        queue = deque()
        for i in range(n_left):
            if match_l[i] == -1:
                dist[i] = 0
                queue.append(i)
        found = False
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                k = match_r[j]
                if k == -1:
                    found = True
                elif dist[k] == INF:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        if not found:
            return size

        def try_augment(i):
            for j in adj[i]:
                k = match_r[j]
                if k == -1 or (dist[k] == dist[i] + 1 and try_augment(k)):
                    match_l[i] = j
                    match_r[j] = i
                    return True
            dist[i] = INF
            return False

        for i in range(n_left):
            if match_l[i] == -1 and try_augment(i):
                size += 1


def _bottleneck_feasible(fin1, fin2, cost, dels1, dels2, c) -> bool:
    n1 = len(fin1)
    n2 = len(fin2)
    adj = []
    for i in range(n1):  # left reals
        nbrs = [j for j in range(n2) if cost[i][j] <= c]
        if dels1[i] <= c:
            nbrs.append(n2 + i)  # its own diagonal copy
        adj.append(nbrs)
    all_diags = list(range(n2, n2 + n1))
    for j in range(n2):  # left diagonal copies of the second diagram
        nbrs = list(all_diags)
        if dels2[j] <= c:
            nbrs.append(j)
        adj.append(nbrs)
    return _hopcroft_karp(adj, n1 + n2, n1 + n2) == n1 + n2


def bottleneck(D1: PersistenceDiagram, D2: PersistenceDiagram) -> float:
    """Exact bottleneck distance between two same-degree diagrams.

    Finite points are matched under the L-infinity cost or deleted to the
    diagonal at cost (death - birth)/2; infinite-death points must match
    infinite-death points (sorted-birth pairing is optimal), +inf when their
    counts differ.  The finite part binary-searches the finite candidate cost
    set with a Hopcroft-Karp feasibility test.
    """
    if D1.degree != D2.degree:
        raise DegreeMismatch(f"degrees {D1.degree} and {D2.degree} differ")
    ess1 = sorted(b for b, d in D1.points if math.isinf(d))
    ess2 = sorted(b for b, d in D2.points if math.isinf(d))
    if len(ess1) != len(ess2):
        return math.inf
    ess = max((abs(a - b) for a, b in zip(ess1, ess2)), default=0.0)
    fin1 = [(b, d) for b, d in D1.points if not math.isinf(d)]
    fin2 = [(b, d) for b, d in D2.points if not math.isinf(d)]
    if not fin1 and not fin2:
        return ess
    dels1 = [(d - b) / 2.0 for b, d in fin1]
    dels2 = [(d - b) / 2.0 for b, d in fin2]
    cost = [
        [max(abs(b1 - b2), abs(d1 - d2)) for b2, d2 in fin2] for b1, d1 in fin1
    ]
    cands = sorted(set(dels1) | set(dels2) | {v for row in cost for v in row} | {0.0})
    lo, hi = 0, len(cands) - 1
    # the largest candidate (everything deletable or matchable) is feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if _bottleneck_feasible(fin1, fin2, cost, dels1, dels2, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(ess, cands[lo])
