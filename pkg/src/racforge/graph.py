"""Graphs, labelled graphs, exact drawings and the augmented antiprism family."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .errors import InvalidAttachment, InvalidParameter
from .geometry import Point, as_rational

VertexId = str
Edge = Tuple[VertexId, VertexId]
RoleTarget = Union[VertexId, List[VertexId]]


def edge_key(u: VertexId, v: VertexId) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with an ordered vertex list.

    Edges are stored normalised (``u <= v``) and sorted, so two graphs with the
    same vertex order and edge set compare equal and serialize identically.
    """

    vertices: Tuple[VertexId, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex ids")
        known = set(vs)
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in known or v not in known:
                raise ValueError(f"edge ({u!r}, {v!r}) references an unknown vertex")
            k = edge_key(u, v)
            if k in norm:
                raise ValueError(f"duplicate edge {k}")
            norm.add(k)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def build(cls, vertices: Iterable[VertexId], edges: Iterable[Sequence[VertexId]]) -> "Graph":
        """Like the constructor, but silently collapses repeated edges."""
        uniq = {edge_key(u, v) for u, v in edges}
        return cls(tuple(vertices), tuple(uniq))

    @cached_property
    def adjacency(self) -> Dict[VertexId, frozenset]:
        adj: Dict[VertexId, set] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(n) for v, n in adj.items()}

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return edge_key(u, v) in self.edge_set

    def degree(self, v: VertexId) -> int:
        return len(self.adjacency[v])

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def triangles(self) -> List[Tuple[VertexId, VertexId, VertexId]]:
        return list(self._triangles)

    def triangle_indices(self) -> List[Tuple[int, int, int]]:
        """Triangles as sorted index triples into ``vertices``."""
        return list(self._triangle_idx)

    @cached_property
    def _triangles(self) -> Tuple[Tuple[VertexId, VertexId, VertexId], ...]:
        vs = self.vertices
        return tuple((vs[a], vs[b], vs[c]) for a, b, c in self._triangle_idx)

    @cached_property
    def _triangle_idx(self) -> Tuple[Tuple[int, int, int], ...]:
        index = {v: i for i, v in enumerate(self.vertices)}
        up: List[set] = [set() for _ in self.vertices]
        for u, v in self.edges:
            a, b = index[u], index[v]
            if a > b:
                a, b = b, a
            up[a].add(b)
        out = []
        for a, higher in enumerate(up):
            for b in higher:
                for c in higher & up[b]:
                    out.append((a, b, c))
        out.sort()
        return tuple(out)


@dataclass(frozen=True)
class LabeledGraph:
    graph: Graph
    roles: Mapping[str, RoleTarget] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.graph.vertices)
        clean: Dict[str, RoleTarget] = {}
        for name, target in self.roles.items():
            ids = [target] if isinstance(target, str) else list(target)
            missing = [v for v in ids if v not in known]
            if missing:
                raise ValueError(f"role {name!r} names unknown vertices {missing[:3]}")
            clean[name] = target if isinstance(target, str) else list(target)
        central = set(self.role_list_of(clean, "central"))
        if central & set(self.role_list_of(clean, "outer-quad")):
            raise ValueError("a vertex cannot be both central and outer-quad")
        if central & set(self.role_list_of(clean, "inner-quad")):
            raise ValueError("a vertex cannot be both central and inner-quad")
        object.__setattr__(self, "roles", clean)

    @staticmethod
    def role_list_of(roles: Mapping[str, RoleTarget], name: str) -> List[VertexId]:
        t = roles.get(name)
        if t is None:
            return []
        return [t] if isinstance(t, str) else list(t)

    def role_list(self, name: str) -> List[VertexId]:
        return self.role_list_of(self.roles, name)


@dataclass(frozen=True)
class Drawing:
    """Straight-line drawing with exact rational vertex positions."""

    graph: Graph
    positions: Mapping[VertexId, Point]

    def __post_init__(self):
        pos = {}
        for v in self.graph.vertices:
            if v not in self.positions:
                raise ValueError(f"vertex {v!r} has no position")
            p = self.positions[v]
            pos[v] = p if isinstance(p, Point) else Point.of(*p)
        extra = set(self.positions) - set(pos)
        if extra:
            raise ValueError(f"positions for unknown vertices {sorted(extra)[:3]}")
        seen: Dict[tuple, VertexId] = {}
        for v, p in pos.items():
            key = (p.x.numerator, p.x.denominator, p.y.numerator, p.y.denominator)
            if key in seen:
                raise ValueError(f"vertices {seen[key]!r} and {v!r} share position {p}")
            seen[key] = v
        object.__setattr__(self, "positions", pos)

    def transformed(self, fn) -> "Drawing":
        """Apply an exact point map ``fn(Point) -> Point`` to every vertex."""
        return Drawing(self.graph, {v: fn(p) for v, p in self.positions.items()})

    def mirrored(self) -> "Drawing":
        return self.transformed(lambda p: Point(-p.x, p.y))


# ---------------------------------------------------------------------------
# augmented k-gon antiprism


def augmented_antiprism(k: int, prefix: str = "") -> LabeledGraph:
    """Central vertex joined to two k-cycles that form an antiprism.

    Vertices are ``c``, ``o0..o{k-1}`` (outer ring) and ``i0..i{k-1}`` (inner
    ring), all prefixed with ``prefix``.  Inner vertex ``i_t`` is adjacent to
    ``o_t`` and ``o_{t+1}``.  |V| = 2k+1 and |E| = 6k.
    """
    if not isinstance(k, int) or k < 3:
        raise InvalidParameter(f"k must be an integer >= 3, got {k!r}")
    c = f"{prefix}c"
    o = [f"{prefix}o{t}" for t in range(k)]
    i = [f"{prefix}i{t}" for t in range(k)]
    edges = []
    for t in range(k):
        edges.append((c, o[t]))
        edges.append((c, i[t]))
        edges.append((o[t], o[(t + 1) % k]))
        edges.append((i[t], i[(t + 1) % k]))
        edges.append((i[t], o[t]))
        edges.append((i[t], o[(t + 1) % k]))
    graph = Graph((c, *o, *i), tuple(edges))
    roles: Dict[str, RoleTarget] = {"central": [c], "outer-quad": o, "inner-quad": i}
    if k == 4:
        roles.update(_square_attach_roles(o, i))
        roles["external-attach"] = roles["external-attach:east"]
        roles["internal-attach"] = roles["internal-attach:east"]
    else:
        roles["external-attach"] = [o[0], o[1]]
        roles["internal-attach"] = i[0]
    return LabeledGraph(graph, roles)


# side -> (outer pair, inner vertex); pairs run bottom->top (east/west) or
# left->right (north/south) in the seed geometry
_SIDES = {
    "east": ((0, 1), 0),
    "north": ((2, 1), 1),
    "west": ((3, 2), 2),
    "south": ((3, 0), 3),
}
_MATING = {"horizontal": ("east", "west"), "vertical": ("north", "south")}


def _square_attach_roles(o, i):
    roles = {}
    for side, ((a, b), inner) in _SIDES.items():
        roles[f"external-attach:{side}"] = [o[a], o[b]]
        roles[f"internal-attach:{side}"] = i[inner]
    return roles


def _attach(lg: LabeledGraph, side: str, who: str):
    ext = lg.roles.get(f"external-attach:{side}")
    inner = lg.roles.get(f"internal-attach:{side}")
    if ext is None or inner is None:
        raise InvalidAttachment(f"{who} has no {side} attachment roles")
    if isinstance(ext, str) or len(ext) != 2 or not isinstance(inner, str):
        raise InvalidAttachment(f"{who}: malformed {side} attachment roles")
    a, b = ext
    g = lg.graph
    if not g.has_edge(a, b):
        raise InvalidAttachment(f"{who}: external pair {a!r},{b!r} is not adjacent")
    if not (g.has_edge(inner, a) and g.has_edge(inner, b)):
        raise InvalidAttachment(f"{who}: internal vertex {inner!r} is not adjacent to the external pair")
    return a, b, inner


def extend(g: LabeledGraph, h: LabeledGraph, mode: str = "horizontal") -> LabeledGraph:
    """Glue ``h`` onto ``g``: identify an outer edge and join the inner vertices.

    ``horizontal`` glues h's west side onto g's east side, ``vertical`` glues
    h's south side onto g's north side.  Vertices of ``h`` are renamed with
    the suffix ``@j`` (j = number of instances already in ``g``) except for
    the two identified ones, which keep g's names.
    """
    if mode not in _MATING:
        raise InvalidParameter(f"mode must be 'horizontal' or 'vertical', got {mode!r}")
    g_side, h_side = _MATING[mode]
    ga, gb, gu = _attach(g, g_side, "left operand")
    ha, hb, hu = _attach(h, h_side, "right operand")

    j = max(1, len(g.role_list("central")))
    rename = {v: f"{v}@{j}" for v in h.graph.vertices}
    rename[ha] = ga
    rename[hb] = gb
    clash = {rename[v] for v in h.graph.vertices if v not in (ha, hb)} & set(g.graph.vertices)
    if clash:
        raise InvalidAttachment(f"renamed vertices collide with the left operand: {sorted(clash)[:3]}")

    vertices = list(g.graph.vertices) + [rename[v] for v in h.graph.vertices if v not in (ha, hb)]
    edges = list(g.graph.edges) + [(rename[a], rename[b]) for a, b in h.graph.edges]
    edges.append((gu, rename[hu]))
    graph = Graph.build(vertices, edges)

    def mapped(target):
        if isinstance(target, str):
            return rename[target]
        return [rename[v] for v in target]

    def merge(name):
        out = []
        for v in g.role_list(name) + [rename[x] for x in h.role_list(name)]:
            if v not in out:
                out.append(v)
        return out

    roles: Dict[str, RoleTarget] = {}
    for name in ("central", "outer-quad", "inner-quad"):
        roles[name] = merge(name)
    keep_from_g = {"horizontal": "west", "vertical": "south"}[mode]
    for side in _SIDES:
        src, tr = (g, None) if side == keep_from_g else (h, mapped)
        for kind in ("external-attach", "internal-attach"):
            key = f"{kind}:{side}"
            if key in src.roles:
                roles[key] = src.roles[key] if tr is None else tr(src.roles[key])
    far = g_side
    roles["external-attach"] = roles[f"external-attach:{far}"]
    roles["internal-attach"] = roles[f"internal-attach:{far}"]
    return LabeledGraph(graph, roles)


# ---------------------------------------------------------------------------
# exact seed drawings


SQUARE_OUTER = ((3, -3), (3, 3), (-3, 3), (-3, -3))
SQUARE_INNER = ((2, 0), (0, 2), (-2, 0), (0, -2))


def square_unit_positions(prefix: str, cx, cy, mirror: bool = False) -> Dict[VertexId, Point]:
    """Exact class-A coordinates of an augmented square antiprism centred at (cx, cy).

    Spokes to the outer corners have slope +-1 and the inner diamond edges
    they cross have slope -+1, so all four crossings are exactly right angles.
    """
    cx, cy = as_rational(cx), as_rational(cy)
    sx = -1 if mirror else 1
    pos = {f"{prefix}c": Point(cx, cy)}
    for t, (x, y) in enumerate(SQUARE_OUTER):
        pos[f"{prefix}o{t}"] = Point(cx + sx * x, cy + y)
    for t, (x, y) in enumerate(SQUARE_INNER):
        pos[f"{prefix}i{t}"] = Point(cx + sx * x, cy + y)
    return pos


def seed_drawing(k4_class: str = "A") -> Drawing:
    """Exact RAC drawing of the augmented square antiprism; class B mirrors class A."""
    cls = str(k4_class).upper()
    if cls not in ("A", "B"):
        raise InvalidParameter(f"embedding class must be 'A' or 'B', got {k4_class!r}")
    g = augmented_antiprism(4).graph
    return Drawing(g, square_unit_positions("", 0, 0, mirror=(cls == "B")))


def chain_drawing(count: int = 2, mode: str = "horizontal") -> Tuple[LabeledGraph, Drawing]:
    """Chain ``count`` square antiprisms with :func:`extend` and draw them exactly.

    Each instance is a translated class-A unit, 6 grid units apart, so glued
    sides coincide and each joining inner edge crosses the shared side at a
    right angle.
    """
    if count < 1:
        raise InvalidParameter("count must be >= 1")
    lg = augmented_antiprism(4)
    dx, dy = (6, 0) if mode == "horizontal" else (0, 6)
    pos = square_unit_positions("", 0, 0)
    for j in range(1, count):
        h = augmented_antiprism(4)
        lg = extend(lg, h, mode)
        for v, p in square_unit_positions("", j * dx, j * dy).items():
            name = f"{v}@{j}"
            if name in lg.graph.adjacency:
                pos[name] = p
    return lg, Drawing(lg.graph, pos)
