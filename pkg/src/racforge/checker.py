"""Exact RAC validity checking, Property 1/2 diagnostics and embedding extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import _exact_kernels as K
from .errors import DegenerateDrawing, GraphMismatch
from .geometry import Kind, Point, Segment, angle_degrees, intersect, line_intersection, on_segment
from .graph import Drawing, Edge, Graph, VertexId, edge_key


@dataclass(frozen=True)
class Crossing:
    edge1: Edge
    edge2: Edge
    point: Point
    perpendicular: bool
    angle: float

    def to_dict(self):
        from .geometry import format_rational
        return {
            "edge1": list(self.edge1),
            "edge2": list(self.edge2),
            "point": [format_rational(self.point.x), format_rational(self.point.y)],
            "perpendicular": self.perpendicular,
            "angle_degrees": self.angle,
        }


@dataclass(frozen=True)
class Degeneracy:
    kind: str  # vertex-on-edge | collinear-overlap | endpoint-touch
    items: Tuple

    def __str__(self):
        return f"{self.kind}: {self.items}"

    def to_dict(self):
        return {"kind": self.kind, "items": _jsonable(self.items)}


@dataclass(frozen=True)
class FenceViolation:
    triangle: Tuple[VertexId, VertexId, VertexId]
    apex: VertexId
    inner_neighbors: Tuple[VertexId, ...]

    def to_dict(self):
        return {"triangle": list(self.triangle), "apex": self.apex,
                "inner_neighbors": list(self.inner_neighbors)}


@dataclass(frozen=True)
class BoundCheck:
    status: str  # within | exceeds | not-applicable
    edges: int
    bound: Optional[int]
    formula: str

    def to_dict(self):
        return {"status": self.status, "edges": self.edges, "bound": self.bound, "formula": self.formula}


@dataclass
class RacReport:
    crossings: List[Crossing]
    is_rac: bool
    degeneracies: List[Degeneracy]
    property1_violations: List[Tuple[Edge, Edge, Edge]]
    property2_violations: List[FenceViolation]
    property2_boundary: List[Tuple[Tuple[VertexId, ...], VertexId]]
    min_angle_degrees: Optional[float]
    edge_bound: BoundCheck

    def to_dict(self):
        return {
            "is_rac": self.is_rac,
            "crossing_count": len(self.crossings),
            "min_angle_degrees": self.min_angle_degrees,
            "crossings": [c.to_dict() for c in self.crossings],
            "degeneracies": [d.to_dict() for d in self.degeneracies],
            "property1_violations": [[list(e) for e in t] for t in self.property1_violations],
            "property2_violations": [v.to_dict() for v in self.property2_violations],
            "property2_boundary": [[list(t), a] for t, a in self.property2_boundary],
            "edge_bound": self.edge_bound.to_dict(),
        }


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# contact detection


@dataclass
class _Prepared:
    verts: Tuple[VertexId, ...]
    edges: Tuple[Edge, ...]
    pts: List[Point]
    eu: np.ndarray
    ev: np.ndarray
    X: Optional[np.ndarray]  # scaled int64 coordinates, None if too large
    Y: Optional[np.ndarray]
    scale: int = 1


def _prepare(d: Drawing) -> _Prepared:
    verts = d.graph.vertices
    index = {v: i for i, v in enumerate(verts)}
    pts = [d.positions[v] for v in verts]
    edges = d.graph.edges
    eu = np.array([index[u] for u, _ in edges], dtype=np.int64)
    ev = np.array([index[v] for _, v in edges], dtype=np.int64)
    den = 1
    for p in pts:
        den = math.lcm(den, p.x.denominator, p.y.denominator)
    xs = [p.x.numerator * (den // p.x.denominator) for p in pts]
    ys = [p.y.numerator * (den // p.y.denominator) for p in pts]
    big = max((max(abs(a), abs(b)) for a, b in zip(xs, ys)), default=0)
    if big < K.INT_LIMIT:
        X = np.array(xs, dtype=np.int64)
        Y = np.array(ys, dtype=np.int64)
    else:
        X = Y = None
    return _Prepared(verts, edges, pts, eu, ev, X, Y, den)


def _segment(prep: _Prepared, e: int) -> Segment:
    return Segment(prep.pts[prep.eu[e]], prep.pts[prep.ev[e]])


def _contacts(prep: _Prepared):
    """(pair list [(i, j, code)], vertex-on-edge list [(p, e)])."""
    if prep.X is not None:
        X, Y, eu, ev = prep.X, prep.Y, prep.eu, prep.ev
        pi, pj, pc = K.segment_pairs(X[eu], Y[eu], X[ev], Y[ev], eu, ev)
        vp, ve = K.points_on_edges(X, Y, X[eu], Y[eu], X[ev], Y[ev], eu, ev)
        return list(zip(pi.tolist(), pj.tolist(), pc.tolist())), list(zip(vp.tolist(), ve.tolist()))
    return _contacts_python(prep)


def _contacts_python(prep: _Prepared):
    # slow exact path for coordinates that do not fit the int64 kernels
    segs = [_segment(prep, e) for e in range(len(prep.edges))]
    order = sorted(range(len(segs)), key=lambda e: min(segs[e].a.x, segs[e].b.x))
    code = {Kind.PROPER_CROSSING: K.CROSS, Kind.ENDPOINT_TOUCH: K.TOUCH, Kind.COLLINEAR_OVERLAP: K.OVERLAP}
    pairs = []
    for a, i in enumerate(order):
        si = segs[i]
        xmax = max(si.a.x, si.b.x)
        ends_i = {prep.eu[i], prep.ev[i]}
        for j in order[a + 1:]:
            sj = segs[j]
            if min(sj.a.x, sj.b.x) > xmax:
                break
            if {prep.eu[j], prep.ev[j]} & ends_i:
                continue
            r = intersect(si, sj)
            if r.kind is not Kind.DISJOINT:
                pairs.append((min(i, j), max(i, j), code[r.kind]))
    pairs.sort()
    on_edge = []
    for p, pt in enumerate(prep.pts):
        for e, s in enumerate(segs):
            if p in (prep.eu[e], prep.ev[e]):
                continue
            if on_segment(pt, s):
                on_edge.append((p, e))
    return pairs, on_edge


def _int_crossings(prep: _Prepared, pairs):
    """Point, perpendicularity and angle of each crossing pair from the scaled ints."""
    if prep.X is None:
        return None
    if not pairs:
        return {}
    I = np.array([p[0] for p in pairs], dtype=np.int64)
    J = np.array([p[1] for p in pairs], dtype=np.int64)
    X, Y, eu, ev = prep.X, prep.Y, prep.eu, prep.ev
    ax, ay = X[eu[I]], Y[eu[I]]
    d1x, d1y = X[ev[I]] - ax, Y[ev[I]] - ay
    cx, cy = X[eu[J]], Y[eu[J]]
    d2x, d2y = X[ev[J]] - cx, Y[ev[J]] - cy
    dot = d1x * d2x + d1y * d2y
    crs = d1x * d2y - d1y * d2x
    num = (cx - ax) * d2y - (cy - ay) * d2x
    ang = np.degrees(np.arctan2(np.abs(crs.astype(float)), np.abs(dot.astype(float))))
    scale = prep.scale
    out = {}
    for k, key in enumerate(pairs):
        den, t = int(crs[k]), int(num[k])
        px = Fraction(int(ax[k]) * den + int(d1x[k]) * t, den * scale)
        py = Fraction(int(ay[k]) * den + int(d1y[k]) * t, den * scale)
        out[key] = (Point(px, py), bool(dot[k] == 0), float(ang[k]))
    return out


def _analyse(d: Drawing):
    prep = _prepare(d)
    pairs, on_edge = _contacts(prep)
    crossings: List[Crossing] = []
    degens: List[Degeneracy] = []
    for p, e in on_edge:
        degens.append(Degeneracy("vertex-on-edge", (prep.verts[p], prep.edges[e])))
    fast = _int_crossings(prep, [(i, j) for i, j, c in pairs if c == K.CROSS])
    for i, j, c in pairs:
        e1, e2 = prep.edges[i], prep.edges[j]
        if c == K.CROSS and fast is not None:
            pt, perp, ang = fast[(i, j)]
            crossings.append(Crossing(e1, e2, pt, perp, ang))
        elif c == K.CROSS:
            s1, s2 = _segment(prep, i), _segment(prep, j)
            d1x, d1y = s1.direction
            d2x, d2y = s2.direction
            perp = d1x * d2x + d1y * d2y == 0
            crossings.append(Crossing(e1, e2, line_intersection(s1, s2), perp, angle_degrees(s1, s2)))
        elif c == K.OVERLAP:
            degens.append(Degeneracy("collinear-overlap", (e1, e2)))
        else:
            degens.append(Degeneracy("endpoint-touch", (e1, e2)))
    crossings.sort(key=lambda c: (c.edge1, c.edge2))
    return prep, crossings, degens


def enumerate_crossings(d: Drawing) -> List[Crossing]:
    """Every proper crossing between non-adjacent edges, with exact points.

    Raises :class:`DegenerateDrawing` naming all degeneracies if the drawing
    has a vertex inside a foreign edge, a collinear overlap or a touch.
    """
    _, crossings, degens = _analyse(d)
    if degens:
        raise DegenerateDrawing(degens)
    return crossings


def _three_mutual(crossings: Sequence[Crossing]) -> List[Tuple[Edge, Edge, Edge]]:
    ids = sorted({e for c in crossings for e in (c.edge1, c.edge2)})
    index = {e: k for k, e in enumerate(ids)}
    up: List[set] = [set() for _ in ids]
    for c in crossings:
        a, b = sorted((index[c.edge1], index[c.edge2]))
        up[a].add(b)
    out = []
    for a, higher in enumerate(up):
        for b in higher:
            for c in higher & up[b]:
                out.append((a, b, c))
    out.sort()
    return [(ids[a], ids[b], ids[c]) for a, b, c in out]


def diagnose_three_mutual(d: Drawing) -> List[Tuple[Edge, Edge, Edge]]:
    """Edge triples that pairwise cross (forbidden in any RAC drawing)."""
    return _three_mutual(enumerate_crossings(d))


def _fence(d: Drawing, prep: Optional[_Prepared] = None):
    """Triangle-fence violations and boundary incidences."""
    if prep is None:
        prep = _prepare(d)
    g = d.graph
    tris = g.triangles()
    if not tris:
        return [], []
    index = {v: i for i, v in enumerate(prep.verts)}
    T = np.array(g.triangle_indices(), dtype=np.int64)
    if prep.X is not None:
        inside_pairs, boundary_pairs = _fence_candidates_int(prep.X, prep.Y, T)
    else:
        inside_pairs, boundary_pairs = _fence_candidates_python(prep.pts, T)

    inside: Dict[int, List[int]] = {}
    for t, p in inside_pairs:
        inside.setdefault(t, []).append(p)
    on_boundary: Dict[int, set] = {}
    for t, p in boundary_pairs:
        on_boundary.setdefault(t, set()).add(p)

    adj = g.adjacency
    violations = []
    for t in sorted(inside):
        ins = inside[t]
        tri = tris[t]
        if len(ins) < 1:
            continue
        inside_set = {prep.verts[p] for p in ins}
        excluded = inside_set | set(tri) | {prep.verts[p] for p in on_boundary.get(t, ())}
        counts: Dict[VertexId, List[VertexId]] = {}
        for b in sorted(inside_set):
            for a in adj[b]:
                if a not in excluded:
                    counts.setdefault(a, []).append(b)
        for a in sorted(counts, key=index.__getitem__):
            if len(counts[a]) >= 2:
                violations.append(FenceViolation(tri, a, tuple(sorted(counts[a]))))
    boundary = [(tris[t], prep.verts[p]) for t in sorted(on_boundary) for p in sorted(on_boundary[t])]
    return violations, boundary


def _fence_candidates_int(X, Y, T):
    t, p, strict = K.points_in_triangles(X, Y, T)
    st = strict == 1
    return (list(zip(t[st].tolist(), p[st].tolist())),
            list(zip(t[~st].tolist(), p[~st].tolist())))


def _fence_candidates_python(pts, T):
    from .geometry import orientation
    ins, bnd = [], []
    for t, (a, b, c) in enumerate(T.tolist()):
        area = orientation(pts[a], pts[b], pts[c])
        if area == 0:
            continue
        for p, q in enumerate(pts):
            if p in (a, b, c):
                continue
            s = [orientation(pts[a], pts[b], q) * area,
                 orientation(pts[b], pts[c], q) * area,
                 orientation(pts[c], pts[a], q) * area]
            if min(s) > 0:
                ins.append((t, p))
            elif min(s) >= 0:
                bnd.append((t, p))
    return ins, bnd


def diagnose_triangle_fence(d: Drawing) -> List[FenceViolation]:
    """Triangles with an outside vertex having two neighbours strictly inside."""
    prep, _, degens = _analyse(d)
    if degens:
        raise DegenerateDrawing(degens)
    return _fence(d, prep)[0]


def edge_bound_check(g: Graph) -> BoundCheck:
    """Compare |E| with the 4n-10 edge bound for straight-line RAC drawings."""
    n, m = g.n, g.m
    if n < 4:
        return BoundCheck("not-applicable", m, None, "4n-10")
    bound = 4 * n - 10
    return BoundCheck("within" if m <= bound else "exceeds", m, bound, "4n-10")


def planar_bound_check(g: Graph) -> BoundCheck:
    """Compare |E| with 3n-6; exceeding it certifies non-planarity."""
    n, m = g.n, g.m
    if n < 3:
        return BoundCheck("not-applicable", m, None, "3n-6")
    bound = 3 * n - 6
    return BoundCheck("within" if m <= bound else "exceeds", m, bound, "3n-6")


def check_rac(d: Drawing) -> RacReport:
    prep, crossings, degens = _analyse(d)
    p1 = _three_mutual(crossings)
    p2, p2b = _fence(d, prep)
    min_angle = min((c.angle for c in crossings), default=None)
    is_rac = not degens and all(c.perpendicular for c in crossings)
    return RacReport(crossings, is_rac, degens, p1, p2, p2b, min_angle, edge_bound_check(d.graph))


# ---------------------------------------------------------------------------
# planarization and combinatorial embeddings


def dummy_id(e1: Edge, e2: Edge) -> str:
    a, b = sorted((edge_key(*e1), edge_key(*e2)))
    return f"X({a[0]}~{a[1]}|{b[0]}~{b[1]})"


@dataclass(frozen=True)
class PlanarizedEmbedding:
    """Rotation system of a drawing's planarization.

    ``rotation[node]`` lists the neighbouring planarization nodes in
    counterclockwise order.  Crossing nodes are named by :func:`dummy_id`.
    """

    rotation: Mapping[str, Tuple[str, ...]]
    dummy_meta: Mapping[str, Tuple[Edge, Edge]]
    vertices: Tuple[VertexId, ...] = ()

    @property
    def node_count(self) -> int:
        return len(self.rotation)

    def normalized(self, reverse: bool = False) -> Dict[str, Tuple[str, ...]]:
        return {v: _cyc_norm(r[::-1] if reverse else r) for v, r in self.rotation.items()}

    def code(self, reverse: bool = False) -> str:
        norm = self.normalized(reverse)
        return ";".join(f"{v}:{','.join(norm[v])}" for v in sorted(norm))


def _cyc_norm(seq: Sequence[str]) -> Tuple[str, ...]:
    seq = tuple(seq)
    if not seq:
        return seq
    k = min(range(len(seq)), key=lambda i: seq[i])
    return seq[k:] + seq[:k]


def _exact_sign(v) -> int:
    return (v > 0) - (v < 0)


def _angular_cmp(sign: Callable) -> Callable:
    def half(d):
        dx, dy = d
        sy = sign(dy)
        return 0 if (sy > 0 or (sy == 0 and sign(dx) > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a[0]), half(b[0])
        if ha != hb:
            return ha - hb
        c = sign(a[0][0] * b[0][1] - a[0][1] * b[0][0])
        if c:
            return -c
        return (a[1] > b[1]) - (a[1] < b[1])
    return cmp


def planarize(vertices, positions, edges, crossings, sign=_exact_sign) -> PlanarizedEmbedding:
    """Build the planarization rotation system.

    ``crossings`` is a sequence of ``(edge1, edge2, (x, y))``; coordinates may
    be exact Fractions or floats, ``sign`` decides orientations.
    """
    node_pos = {v: positions[v] for v in vertices}
    on_edge: Dict[Edge, List[Tuple[object, str]]] = {edge_key(*e): [] for e in edges}
    meta = {}
    for e1, e2, pt in crossings:
        name = dummy_id(e1, e2)
        meta[name] = tuple(sorted((edge_key(*e1), edge_key(*e2))))
        node_pos[name] = pt
        for e in (edge_key(*e1), edge_key(*e2)):
            u, v = e
            ux, uy = positions[u]
            vx, vy = positions[v]
            t = (pt[0] - ux) * (vx - ux) + (pt[1] - uy) * (vy - uy)
            on_edge[e].append((t, name))
    nbrs: Dict[str, List[str]] = {v: [] for v in node_pos}
    for (u, v), mids in on_edge.items():
        chain = [u] + [name for _, name in sorted(mids, key=lambda x: x[0])] + [v]
        for a, b in zip(chain, chain[1:]):
            nbrs[a].append(b)
            nbrs[b].append(a)
    cmp = cmp_to_key(_angular_cmp(sign))
    rotation = {}
    for node, ns in nbrs.items():
        px, py = node_pos[node]
        keyed = [((node_pos[w][0] - px, node_pos[w][1] - py), w) for w in ns]
        keyed.sort(key=cmp)
        rotation[node] = tuple(w for _, w in keyed)
    return PlanarizedEmbedding(rotation, meta, tuple(vertices))


def extract_embedding(d: Drawing) -> PlanarizedEmbedding:
    """Rotation system of the planarization, by exact angular sorting."""
    crossings = enumerate_crossings(d)
    pos = {v: (p.x, p.y) for v, p in d.positions.items()}
    cr = [(c.edge1, c.edge2, (c.point.x, c.point.y)) for c in crossings]
    return planarize(d.graph.vertices, pos, d.graph.edges, cr)


def embedding_relation(e1: PlanarizedEmbedding, e2: PlanarizedEmbedding) -> str:
    """``identical``, ``mirror`` (all cyclic orders reversed) or ``distinct``."""
    v1 = set(e1.vertices) if e1.vertices else {v for v in e1.rotation if v not in e1.dummy_meta}
    v2 = set(e2.vertices) if e2.vertices else {v for v in e2.rotation if v not in e2.dummy_meta}
    if v1 != v2:
        raise GraphMismatch("embeddings are over different vertex sets")
    a = e1.normalized()
    if a == e2.normalized():
        return "identical"
    if a == e2.normalized(reverse=True):
        return "mirror"
    return "distinct"
