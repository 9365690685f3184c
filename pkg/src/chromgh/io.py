"""JSON (and CSV point-cloud) ingestion and emission.

JSON is the canonical interchange; floats go through Python's shortest
round-trip repr so every emitted file re-parses to an equal in-memory value.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .cech import ComplexSpec
from .constraints import ConstraintSet
from .errors import ParseError
from .metric import ChromaticMetricPair, validate_metric
from .persistence import PersistenceDiagram

_METRICS = {
    "euclidean": lambda diff: np.sqrt((diff**2).sum(axis=2)),
    "l1": lambda diff: np.abs(diff).sum(axis=2),
    "linf": lambda diff: np.abs(diff).max(axis=2),
}


def _load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", line=exc.lineno) from exc


def _line_of(text: str, needle: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def matrix_from_points(points, metric: str = "euclidean") -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ParseError("points must be a list of equal-length coordinate rows")
    fn = _METRICS.get(metric)
    if fn is None:
        raise ParseError(f"unknown metric {metric!r}; use euclidean, l1 or linf")
    return fn(pts[:, None, :] - pts[None, :, :])


def _pair_from_dict(data: dict, text: str = "", default_metric: str = "euclidean") -> ChromaticMetricPair:
    if "distance_matrix" in data:
        matrix = np.asarray(data["distance_matrix"], dtype=np.float64)
    elif "points" in data:
        matrix = matrix_from_points(data["points"], data.get("metric", default_metric))
    else:
        raise ParseError("pair files need either 'points' or 'distance_matrix'")
    space = validate_metric(matrix, allow_pseudo=bool(data.get("pseudo", False)))
    colors = {}
    for key, value in (data.get("colors") or {}).items():
        try:
            idx = int(key)
            color = int(value)
            if color < 0 or isinstance(value, float) and value != int(value):
                raise ValueError
        except (TypeError, ValueError):
            raise ParseError(
                f"malformed color entry {key!r}: {value!r}",
                line=_line_of(text, '"colors"'),
            ) from None
        colors[idx] = color
    return ChromaticMetricPair(space, colors)


def _pair_from_csv(path, default_metric: str = "euclidean") -> ChromaticMetricPair:
    rows = list(csv.reader(Path(path).open()))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError(f"{path}: empty point cloud")
    color_col = None
    start = 0
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = [c.strip().lower() for c in rows[0]]
        if "color" in header:
            color_col = header.index("color")
        start = 1
    points = []
    colors = {}
    for lineno, row in enumerate(rows[start:], start=start + 1):
        try:
            coords = [float(c) for i, c in enumerate(row) if i != color_col]
        except ValueError as exc:
            raise ParseError(f"{path}: bad coordinate {exc}", line=lineno) from None
        if color_col is not None and row[color_col].strip():
            colors[len(points)] = int(row[color_col])
        points.append(coords)
    space = validate_metric(matrix_from_points(points, default_metric))
    if color_col is None:
        colors = {i: 0 for i in range(len(points))}
    return ChromaticMetricPair(space, colors)


def parse_pair(path, metric: str = "euclidean") -> ChromaticMetricPair:
    """Read a chromatic pair from a JSON file (or a CSV point cloud)."""
    if str(path).endswith(".csv"):
        return _pair_from_csv(path, metric)
    data, text = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return _pair_from_dict(data, text, metric)


def pair_to_dict(pair: ChromaticMetricPair) -> dict:
    out = {
        "distance_matrix": [[float(v) for v in row] for row in pair.d],
        "colors": {str(i): c for i, c in sorted(pair.coloring.items())},
    }
    if pair.ambient.pseudo:
        out["pseudo"] = True
    return out


def parse_constraints(path) -> ConstraintSet:
    data, _ = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    try:
        return ConstraintSet.make(
            data.get("sets", ()),
            universe=data.get("universe"),
            ambient_only=bool(data.get("ambient_only", False)),
        )
    except Exception as exc:
        raise ParseError(f"{path}: {exc}") from exc


def constraints_to_dict(C: ConstraintSet) -> dict:
    out = {"universe": sorted(C.universe), "sets": [sorted(s) for s in C.members]}
    if C.ambient_only:
        out["ambient_only"] = True
    return out


def parse_complex(path) -> ComplexSpec:
    data, _ = _load_json(path)
    if not isinstance(data, dict) or "maximal_faces" not in data:
        raise ParseError(f"{path}: expected an object with 'maximal_faces'")
    return ComplexSpec(tuple(frozenset(f) for f in data["maximal_faces"]))


def complex_to_dict(spec: ComplexSpec) -> dict:
    return {"maximal_faces": [sorted(f) for f in spec.maximal_faces]}


def _encode_death(d: float):
    return "inf" if math.isinf(d) else d


def diagram_to_dict(dgm: PersistenceDiagram) -> dict:
    return {"degree": dgm.degree, "pairs": [[b, _encode_death(d)] for b, d in dgm.points]}


def parse_diagram(path) -> PersistenceDiagram:
    data, _ = _load_json(path)
    if not isinstance(data, dict) or "degree" not in data or "pairs" not in data:
        raise ParseError(f"{path}: expected an object with 'degree' and 'pairs'")
    points = []
    for item in data["pairs"]:
        if len(item) != 2:
            raise ParseError(f"{path}: diagram pairs must be [birth, death]")
        b, d = item
        points.append((float(b), math.inf if d == "inf" else float(d)))
    return PersistenceDiagram(int(data["degree"]), tuple(points))


def filtration_to_dict(filtration) -> dict:
    return {
        "max_dim": filtration.max_dim,
        "simplices": [
            {"vertices": sorted(v), "value": t} for v, t in filtration.simplices
        ],
    }


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
