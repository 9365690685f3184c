"""Built-in example families: interval colorings, an L1 diamond pair, the
offset half-line, the shifted two-block segment, and an ellipse with its
center.

Each generator returns a chromatic metric pair discretized with a uniform
step; half-open segments [u, v) include u and exclude v, isolated points are
always included.  The companion ``*_maps`` builders produce the admissible map
pairs that certify the known distances of these families, with out-of-grid
images clamped to the nearest retained grid point.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import BadParams, UnknownExample
from .metric import ChromaticMetricPair, FiniteMetricSpace, MapSpec, validate_metric


def _steps(length: float, step: float) -> int:
    if step <= 0:
        raise BadParams(f"step must be positive, got {step}")
    k = length / step
    if abs(k - round(k)) > 1e-9:
        raise BadParams(f"length {length} is not a multiple of the step {step}")
    return int(round(k))


def _line_pair(segments, step) -> ChromaticMetricPair:
    """Points and colors from [u, v) segments given as (u, v, color)."""
    values = []
    colors = []
    for u, v, color in segments:
        for i in range(_steps(v - u, step)):
            values.append(u + i * step)
            colors.append(color)
    order = sorted(range(len(values)), key=lambda k: values[k])
    xs = np.array([values[k] for k in order])
    space = validate_metric(np.abs(xs[:, None] - xs[None, :]))
    return ChromaticMetricPair(space, {i: colors[order[i]] for i in range(len(order))})


def _interval_segments(which: int, r: float):
    if which == 1:
        return [(0.0, 3 * r, 0)]
    if which == 2:
        return [(0.0, r, 1), (r, 4 * r, 0)]
    if which == 3:
        return [(0.0, r, 1), (r, 4 * r, 0), (4 * r, 5 * r, 1)]
    if which == 4:
        return [(0.0, 3 * r, 1)]
    raise UnknownExample(f"interval coloring {which}")


def interval_pair(which: int, r: float = 1.0, step: float = 0.25) -> ChromaticMetricPair:
    if r <= 0:
        raise BadParams("r must be positive")
    return _line_pair(_interval_segments(which, r), step)


def interval_map_pair(i: int, j: int, r: float = 1.0, step: float = 0.25, exact_colors: bool = False):
    """The admissible map pair certifying the interval-family distances.

    Forward: the isometric embedding of the i-th space onto the matching block
    of the j-th (a shift by r for targets whose colored block starts at r, the
    identity inclusion for (2, 3)).  Backward: the piecewise retraction
    collapsing [0, r) to 0 and clamping the tail; with ``exact_colors`` the
    (2, 3) pair instead uses (inclusion, fold-by-4r), which preserves colors
    pointwise.
    """
    if not (1 <= i < j <= 3):
        raise BadParams("map pairs exist for 1 <= i < j <= 3")
    src = interval_pair(i, r, step)
    tgt = interval_pair(j, r, step)
    m = _steps(r, step)
    ni = src.n
    nj = tgt.n
    if exact_colors:
        if (i, j) != (2, 3):
            raise BadParams("the color-exact pair is the (2, 3) one")
        fwd = MapSpec(src, tgt, tuple(range(ni)))
        back = MapSpec(tgt, src, tuple(k if k < 4 * m else k - 4 * m for k in range(nj)))
        return fwd, back
    if (i, j) == (2, 3):
        fwd = MapSpec(src, tgt, tuple(range(ni)))
        back = MapSpec(tgt, src, tuple(min(k, ni - 1) for k in range(nj)))
        return fwd, back
    # i == 1: embed [0, 3r) onto the 0-colored block [r, 4r)
    fwd = MapSpec(src, tgt, tuple(k + m for k in range(ni)))
    back_assign = []
    for k in range(nj):
        if k < m:
            back_assign.append(0)
        elif k < 4 * m:
            back_assign.append(k - m)
        else:
            back_assign.append(ni - 1)
    back = MapSpec(tgt, src, tuple(back_assign))
    return fwd, back


_DIAMOND_LEFT = [(0.0, 0.0), (1.0, 1.0), (0.0, 2.0)]


def _diamond_side_points(step, shift):
    if _steps(2.0, step) < 1:
        raise BadParams("step too large for the diamond sides")
    pts = []
    for a, b in zip(_DIAMOND_LEFT, _DIAMOND_LEFT[1:]):
        n = _steps(2.0, step)  # each leg has L1 length 2
        start = 0 if not pts else 1  # legs share the corner
        for k in range(start, n + 1):
            t = k / n
            pts.append((a[0] + t * (b[0] - a[0]) + shift, a[1] + t * (b[1] - a[1])))
    return pts


def plane_pair(which: int, step: float = 0.25) -> ChromaticMetricPair:
    """Two interleaved L1 diamonds; coloring 1 paints the left one in the
    first variant and the right one in the second."""
    if which not in (1, 2):
        raise UnknownExample(f"plane coloring {which}")
    left = _diamond_side_points(step, 0.0)
    right = _diamond_side_points(step, 1.0)
    pts = np.array(left + right)
    d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
    space = validate_metric(d)
    n = len(left)
    colors = {}
    for k in range(len(pts)):
        on_left = k < n
        colors[k] = (0 if on_left else 1) if which == 1 else (1 if on_left else 0)
    return ChromaticMetricPair(space, colors)


def plane_swap_maps(step: float = 0.25):
    """The color-preserving swap of the two diamonds (a unit translation each
    way), between the two opposite colorings."""
    p1 = plane_pair(1, step)
    p2 = plane_pair(2, step)
    n = p1.n // 2
    swap = tuple(k + n if k < n else k - n for k in range(p1.n))
    return MapSpec(p1, p2, swap), MapSpec(p2, p1, swap)


def offset_line_pair(eps: float = 0.5, n: int = 10) -> ChromaticMetricPair:
    """{-eps} plus the first n naturals on the line; the negative point is the
    single 1-colored point."""
    if not 0 < eps <= 1:
        raise BadParams("eps must lie in (0, 1]")
    if n < 1:
        raise BadParams("need at least one natural point")
    xs = np.array([-float(eps)] + [float(k) for k in range(n)])
    space = validate_metric(np.abs(xs[:, None] - xs[None, :]))
    colors = {0: 1}
    colors.update({i: 0 for i in range(1, n + 1)})
    return ChromaticMetricPair(space, colors)


def offset_bijection_maps(eps: float = 0.5, n: int = 10):
    """The color-preserving bijection between the eps=1 space and the eps one
    (identity on the naturals, negative point to negative point)."""
    p1 = offset_line_pair(1.0, n)
    p2 = offset_line_pair(eps, n)
    ident = tuple(range(p1.n))
    return MapSpec(p1, p2, ident), MapSpec(p2, p1, ident)


def two_block_pair(which: int, r: float = 1.0, step: float = 0.25) -> ChromaticMetricPair:
    """[0, 2r] plus the isolated point 3r; colors split at r with the closed
    endpoint 2r attached to the first block and 3r to the second, swapped in
    the second variant."""
    if which not in (1, 2):
        raise UnknownExample(f"two-block coloring {which}")
    m = _steps(r, step)
    xs = np.array([k * step for k in range(2 * m + 1)] + [3.0 * r])
    space = validate_metric(np.abs(xs[:, None] - xs[None, :]))
    colors = {}
    for k in range(len(xs)):
        if k < m:
            c = 0
        elif k < 2 * m:
            c = 1
        elif k == 2 * m:
            c = 0
        else:
            c = 1
        colors[k] = c if which == 1 else 1 - c
    return ChromaticMetricPair(space, colors)


def block_shift_maps(r: float = 1.0, step: float = 0.25):
    """The shift-by-r map pair between the two opposite block colorings: each
    0-colored point moves one block to the right (wrapping 2r to 3r), and back."""
    p1 = two_block_pair(1, r, step)
    p2 = two_block_pair(2, r, step)
    m = _steps(r, step)
    last = p1.n - 1
    fwd = []
    for k in range(p1.n):
        if p1.coloring[k] == 0:
            fwd.append(last if k == 2 * m else k + m)
        else:
            fwd.append(k)
    back = []
    for k in range(p2.n):
        if p2.coloring[k] == 0:
            back.append(2 * m if k == last else k - m)
        else:
            back.append(k)
    return MapSpec(p1, p2, tuple(fwd)), MapSpec(p2, p1, tuple(back))


def ellipse_pair(a: float = 2.0, b: float = 1.0, step: float = 0.25) -> ChromaticMetricPair:
    """An ellipse sampled uniformly in angle plus its center; the center and
    the rightmost vertex are 0-colored, the rest of the ellipse 1-colored.

    The sample count is a multiple of 4, so the four axis vertices are always
    present and the sampled radii are step-dense in [b, a].
    """
    if not 0 < b <= a:
        raise BadParams("need 0 < b <= a")
    if step <= 0:
        raise BadParams("step must be positive")
    # arc-length density plus a radial-density term: |dr/dtheta| is bounded by
    # (a^2 - b^2) / (2b), so this sample count keeps consecutive radii within
    # one step even for flat ellipses
    quarter = max(
        2,
        math.ceil(math.pi * a / (2.0 * step)),
        math.ceil(math.pi * (a * a - b * b) / (4.0 * b * step)),
    )
    m = 4 * quarter
    theta = 2.0 * math.pi * np.arange(m) / m
    ring = np.stack([a * np.cos(theta), b * np.sin(theta)], axis=1)
    pts = np.vstack([[[0.0, 0.0]], ring])
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    space = validate_metric(d)
    colors = {0: 0, 1: 0}  # center, then the theta=0 vertex (a, 0)
    colors.update({k: 1 for k in range(2, m + 1)})
    return ChromaticMetricPair(space, colors)


_GENERATORS = {
    "ex-cgh-chi1": lambda p: interval_pair(1, p["r"], p["step"]),
    "ex-cgh-chi2": lambda p: interval_pair(2, p["r"], p["step"]),
    "ex-cgh-chi3": lambda p: interval_pair(3, p["r"], p["step"]),
    "ex-cgh-chi4": lambda p: interval_pair(4, p["r"], p["step"]),
    "ex-inv-plane-chi1": lambda p: plane_pair(1, p["step"]),
    "ex-inv-plane-chi2": lambda p: plane_pair(2, p["step"]),
    "ex-dist-chi1": lambda p: offset_line_pair(1.0, p["n"]),
    "ex-dist-chi-eps": lambda p: offset_line_pair(p["eps"], p["n"]),
    "ex-sixpack-chi1": lambda p: two_block_pair(1, p["r"], p["step"]),
    "ex-sixpack-chi2": lambda p: two_block_pair(2, p["r"], p["step"]),
    "ex-ellipse": lambda p: ellipse_pair(p["a"], p["b"], p["step"]),
}

EXAMPLE_NAMES = tuple(sorted(_GENERATORS))


def gen_example(
    name: str,
    r: float = 1.0,
    step: float = 0.25,
    eps: float = 0.5,
    n: int = 10,
    a: float = 2.0,
    b: float = 1.0,
) -> ChromaticMetricPair:
    """Build a named example pair (see EXAMPLE_NAMES for the catalogue)."""
    gen = _GENERATORS.get(name)
    if gen is None:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(EXAMPLE_NAMES)}")
    return gen({"r": r, "step": step, "eps": eps, "n": n, "a": a, "b": b})
