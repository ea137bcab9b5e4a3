"""JSON formats for graphs, drawings, gadget labels and layout configs.

Exact coordinates are written as rational strings (``"7/3"``, ``"-2"``) so a
write/read cycle is lossless.  Float drawings keep JSON numbers and carry
``"kind": "float"``.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Mapping, Union

from .errors import InvalidParameter, SchemaError
from .geometry import Point, format_rational, parse_rational
from .graph import Drawing, Graph, LabeledGraph
from .layout import FloatDrawing, LayoutConfig
from .reduction.gadgets import GadgetLabels

FORMAT_VERSION = 1


def _require(obj, key, kind, path):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path)
    val = obj[key]
    if not isinstance(val, kind):
        raise SchemaError(f"expected {getattr(kind, '__name__', kind)}", f"{path}.{key}")
    return val


# ---------------------------------------------------------------------------
# graphs


def graph_to_obj(g: Union[Graph, LabeledGraph]) -> dict:
    roles = {}
    if isinstance(g, LabeledGraph):
        roles = g.roles
        g = g.graph
    return {
        "version": FORMAT_VERSION,
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges],
        "roles": {k: (v if isinstance(v, str) else list(v)) for k, v in roles.items()},
    }


def graph_from_obj(obj: Any, path: str = "$") -> LabeledGraph:
    verts = _require(obj, "vertices", list, path)
    for k, v in enumerate(verts):
        if not isinstance(v, str):
            raise SchemaError("vertex ids must be strings", f"{path}.vertices[{k}]")
    if len(set(verts)) != len(verts):
        raise SchemaError("duplicate vertex ids", f"{path}.vertices")
    known = set(verts)
    edges = _require(obj, "edges", list, path)
    seen = set()
    for k, e in enumerate(edges):
        where = f"{path}.edges[{k}]"
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise SchemaError("an edge is a pair of vertex ids", where)
        if e[0] == e[1]:
            raise SchemaError("self-loop", where)
        for x in e:
            if x not in known:
                raise SchemaError(f"unknown vertex {x!r}", where)
        key = tuple(sorted(e))
        if key in seen:
            raise SchemaError("duplicate edge", where)
        seen.add(key)
    roles = obj.get("roles", {})
    if not isinstance(roles, dict):
        raise SchemaError("expected an object", f"{path}.roles")
    for name, target in roles.items():
        where = f"{path}.roles.{name}"
        ids = [target] if isinstance(target, str) else target
        if not isinstance(ids, list) or not all(isinstance(x, str) for x in ids):
            raise SchemaError("a role maps to a vertex id or a list of ids", where)
        for x in ids:
            if x not in known:
                raise SchemaError(f"unknown vertex {x!r}", where)
    try:
        return LabeledGraph(Graph(tuple(verts), tuple(tuple(e) for e in edges)), roles)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


# ---------------------------------------------------------------------------
# drawings


def drawing_to_obj(d: Union[Drawing, FloatDrawing], roles: Mapping = None) -> dict:
    g = graph_to_obj(LabeledGraph(d.graph, roles or {}))
    if isinstance(d, FloatDrawing):
        pos = {v: [x, y] for v, (x, y) in d.positions.items()}
        kind = "float"
    else:
        pos = {v: [format_rational(p.x), format_rational(p.y)] for v, p in d.positions.items()}
        kind = "exact"
    return {"version": FORMAT_VERSION, "kind": kind, "graph": g,
            "positions": {v: pos[v] for v in d.graph.vertices}}


def _coord(val, path, exact):
    if exact:
        if isinstance(val, bool) or not isinstance(val, (str, int)):
            raise SchemaError("exact coordinates are rational strings or integers", path)
        try:
            return parse_rational(val) if isinstance(val, str) else Fraction(val)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {val!r}", path) from exc
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SchemaError("float coordinates are JSON numbers", path)
    if not math.isfinite(val):
        raise SchemaError("non-finite coordinate", path)
    return float(val)


def drawing_from_obj(obj: Any, path: str = "$"):
    """Returns ``(drawing, labeled_graph)``; the drawing is exact unless ``kind`` is float."""
    kind = obj.get("kind", "exact") if isinstance(obj, dict) else None
    if kind not in ("exact", "float"):
        raise SchemaError("kind must be 'exact' or 'float'", f"{path}.kind")
    lg = graph_from_obj(_require(obj, "graph", dict, path), f"{path}.graph")
    pos_obj = _require(obj, "positions", dict, path)
    exact = kind == "exact"
    pos = {}
    for v in lg.graph.vertices:
        where = f"{path}.positions.{v}"
        if v not in pos_obj:
            raise SchemaError("vertex has no position", where)
        xy = pos_obj[v]
        if not (isinstance(xy, list) and len(xy) == 2):
            raise SchemaError("a position is a pair [x, y]", where)
        pos[v] = tuple(_coord(c, f"{where}[{k}]", exact) for k, c in enumerate(xy))
    extra = set(pos_obj) - set(pos)
    if extra:
        raise SchemaError(f"positions for unknown vertices {sorted(extra)[:3]}", f"{path}.positions")
    try:
        if exact:
            d = Drawing(lg.graph, {v: Point(*p) for v, p in pos.items()})
        else:
            d = FloatDrawing(lg.graph, pos)
    except ValueError as exc:
        raise SchemaError(str(exc), f"{path}.positions") from exc
    return d, lg


# ---------------------------------------------------------------------------
# labels and configs


def labels_to_obj(labels: GadgetLabels) -> dict:
    return {"version": FORMAT_VERSION, **labels.to_dict()}


def labels_from_obj(obj: Any, path: str = "$") -> GadgetLabels:
    n = _require(obj, "num_variables", int, path)
    m = _require(obj, "num_clauses", int, path)
    roles = _require(obj, "roles", dict, path)
    for name, ids in roles.items():
        if not isinstance(ids, list) or not all(isinstance(x, str) for x in ids):
            raise SchemaError("a role maps to a list of vertex ids", f"{path}.roles.{name}")
    return GadgetLabels(n, m, {k: list(v) for k, v in roles.items()})


def config_from_obj(obj: Any, path: str = "$") -> LayoutConfig:
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    try:
        return LayoutConfig.from_dict(obj)
    except (InvalidParameter, TypeError) as exc:
        raise SchemaError(str(exc), path) from exc


def config_to_obj(cfg: LayoutConfig) -> dict:
    return cfg.to_dict()


# ---------------------------------------------------------------------------
# file helpers


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc


def write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_graph(path: str) -> LabeledGraph:
    return graph_from_obj(load_json(path))


def write_graph(path: str, g: Union[Graph, LabeledGraph]):
    write_text(path, dumps(graph_to_obj(g)))


def read_drawing(path: str):
    return drawing_from_obj(load_json(path))


def write_drawing(path: str, d, roles: Mapping = None):
    write_text(path, dumps(drawing_to_obj(d, roles)))


def read_labels(path: str) -> GadgetLabels:
    return labels_from_obj(load_json(path))


def write_labels(path: str, labels: GadgetLabels):
    write_text(path, dumps(labels_to_obj(labels)))


def read_config(path: str) -> LayoutConfig:
    return config_from_obj(load_json(path))
