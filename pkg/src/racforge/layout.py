"""Numerical search for near-RAC drawings and the embedding survey.

The optimizer minimises a crossing-angle energy (see ``_float_kernels``) by
gradient descent with Armijo backtracking, from seeded random starts.  A
second "polish" phase scales the spring and repulsion weights down so the
crossing term dominates and angles settle close to 90 degrees.  Each phase is
monotone in its own energy.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from . import _float_kernels as F
from .checker import PlanarizedEmbedding, dummy_id, planarize
from .errors import InvalidParameter, NonFinite
from .geometry import Point
from .graph import Drawing, Graph, VertexId

SIGN_TOL = 1e-9
ENERGY_TIE = 1e-12


@dataclass(frozen=True)
class FloatDrawing:
    graph: Graph
    positions: Mapping[VertexId, Tuple[float, float]]

    def __post_init__(self):
        pos = {}
        for v in self.graph.vertices:
            if v not in self.positions:
                raise ValueError(f"vertex {v!r} has no position")
            x, y = self.positions[v]
            x, y = float(x), float(y)
            if not (math.isfinite(x) and math.isfinite(y)):
                raise NonFinite(f"vertex {v!r} has a non-finite coordinate")
            pos[v] = (x, y)
        object.__setattr__(self, "positions", pos)

    @classmethod
    def from_drawing(cls, d: Drawing) -> "FloatDrawing":
        return cls(d.graph, {v: (float(p.x), float(p.y)) for v, p in d.positions.items()})

    @classmethod
    def from_array(cls, g: Graph, P) -> "FloatDrawing":
        return cls(g, {v: (float(P[i, 0]), float(P[i, 1])) for i, v in enumerate(g.vertices)})

    def as_array(self) -> np.ndarray:
        return np.array([self.positions[v] for v in self.graph.vertices], dtype=np.float64).reshape(-1, 2)

    def min_separation(self) -> float:
        P = self.as_array()
        if len(P) < 2:
            return math.inf
        diff = P[:, None, :] - P[None, :, :]
        dist = np.sqrt((diff ** 2).sum(-1))
        dist[np.diag_indices(len(P))] = np.inf
        return float(dist.min())

    def snapped(self) -> Drawing:
        """Exact drawing with the binary-exact rational value of every float."""
        return Drawing(self.graph, {v: Point(Fraction(x), Fraction(y)) for v, (x, y) in self.positions.items()})


@dataclass(frozen=True)
class LayoutConfig:
    step: float = 0.05
    max_iterations: int = 3000
    restarts: int = 1
    seed: int = 0
    rest_length: float = 1.0
    w_spring: float = 0.0
    w_repulsion: float = 1.0
    w_crossing: float = 1.0
    eps_deg: float = 0.1
    separation: float = 1e-3
    repulsion_radius: float = 0.3
    polish_factor: float = 1e-6
    polish_iterations: int = 3000
    gradient_tolerance: float = 1e-12
    seeded_fraction: float = 0.0
    perturbation: float = 0.25

    def __post_init__(self):
        for name in ("w_spring", "w_repulsion", "w_crossing", "polish_factor", "perturbation"):
            if getattr(self, name) < 0:
                raise InvalidParameter(f"{name} must be >= 0")
        if not 0 < self.eps_deg <= 1:
            raise InvalidParameter("eps_deg must lie in (0, 1]")
        if self.restarts < 1:
            raise InvalidParameter("restarts must be >= 1")
        if self.step <= 0 or self.rest_length <= 0 or self.separation <= 0:
            raise InvalidParameter("step, rest_length and separation must be positive")
        if min(self.max_iterations, self.polish_iterations) < 0:
            raise InvalidParameter("iteration counts must be >= 0")
        if not 0 <= self.seeded_fraction <= 1:
            raise InvalidParameter("seeded_fraction must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "LayoutConfig":
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise InvalidParameter(f"unknown config fields {sorted(unknown)}")
        return cls(**dict(data))


@dataclass
class OptReport:
    energy: float
    min_angle: Optional[float]
    iterations: int
    converged: bool
    embedding_class: Optional[str] = None
    restarts: List[dict] = field(default_factory=list)
    best_restart: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


class _Problem:
    """Edge index arrays plus precomputed pair lists for one graph."""

    def __init__(self, g: Graph):
        self.graph = g
        index = {v: i for i, v in enumerate(g.vertices)}
        self.eu = np.array([index[u] for u, _ in g.edges], dtype=np.int64)
        self.ev = np.array([index[v] for _, v in g.edges], dtype=np.int64)
        self.pairs = F.disjoint_pairs(self.eu, self.ev)

    def eval(self, P, cfg: LayoutConfig, scale: float = 1.0, grad=True):
        E, ec, G = F.energy_grad(P, self.eu, self.ev, cfg.w_crossing, cfg.w_spring * scale,
                                 cfg.rest_length, cfg.w_repulsion * scale, cfg.repulsion_radius,
                                 grad, self.pairs)
        if not math.isfinite(E) or (grad and not np.all(np.isfinite(G))):
            raise NonFinite("energy or gradient overflowed")
        return E, ec, G

    def min_angle(self, P) -> Optional[float]:
        _, _, cos = F.crossings(P, self.eu, self.ev, self.pairs)
        if len(cos) == 0:
            return None
        return float(np.degrees(np.arccos(np.clip(cos.max(), 0.0, 1.0))))


def _as_problem(d: FloatDrawing) -> Tuple[_Problem, np.ndarray]:
    return _Problem(d.graph), d.as_array()


def energy(d: FloatDrawing, cfg: LayoutConfig) -> float:
    prob, P = _as_problem(d)
    return float(prob.eval(P, cfg, grad=False)[0])


def crossing_energy(d: FloatDrawing) -> float:
    """Unweighted sum of cos^2 over all crossings."""
    prob, P = _as_problem(d)
    return float(F.energy_grad(P, prob.eu, prob.ev, 1.0, 0.0, 1.0, 0.0, 0.0, False, prob.pairs)[1])


def gradient(d: FloatDrawing, cfg: LayoutConfig) -> Dict[VertexId, Tuple[float, float]]:
    prob, P = _as_problem(d)
    G = prob.eval(P, cfg)[2]
    return {v: (float(G[i, 0]), float(G[i, 1])) for i, v in enumerate(d.graph.vertices)}


def _descend(prob: _Problem, P, cfg: LayoutConfig, scale: float, iters: int, trace: List[float]):
    E, _, G = prob.eval(P, cfg, scale)
    trace.append(E)
    t = cfg.step
    done = 0
    converged = False
    for done in range(1, iters + 1):
        gn2 = float(np.sum(G * G))
        if gn2 <= cfg.gradient_tolerance ** 2:
            converged = True
            break
        while True:
            Q = P - t * G
            E2 = prob.eval(Q, cfg, scale, grad=False)[0]
            if E2 <= E - 1e-4 * t * gn2:
                break
            t *= 0.5
            if t < 1e-18:
                # no descent direction left at machine precision
                return P, E, done, True
        P = Q
        E, _, G = prob.eval(P, cfg, scale)
        trace.append(E)
        t = min(t * 2.0, 1e3 * cfg.step)
    return P, E, done, converged


def _initial(n: int, cfg: LayoutConfig, rng: np.random.Generator):
    side = cfg.rest_length * math.sqrt(max(n, 1))
    return rng.uniform(0.0, side, size=(n, 2))


def _run(prob: _Problem, P0, cfg: LayoutConfig):
    trace_main: List[float] = []
    trace_polish: List[float] = []
    P, _, it1, conv1 = _descend(prob, P0, cfg, 1.0, cfg.max_iterations, trace_main)
    P, _, it2, conv2 = _descend(prob, P, cfg, cfg.polish_factor, cfg.polish_iterations, trace_polish)
    E = prob.eval(P, cfg, grad=False)[0]
    return P, {
        "energy": float(E),
        "min_angle": prob.min_angle(P),
        "crossings": int(len(F.crossings(P, prob.eu, prob.ev, prob.pairs)[0])),
        "iterations": it1 + it2,
        "converged": bool(conv2),
        "trace": {"main": trace_main, "polish": trace_polish},
    }


def _rng(cfg: LayoutConfig, r: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed & 0xFFFFFFFF, r])


def _better(a: dict, b: dict) -> bool:
    # energies within 1e-12 count as tied; fewer crossings wins the tie
    if a["energy"] < b["energy"] - ENERGY_TIE:
        return True
    return abs(a["energy"] - b["energy"]) <= ENERGY_TIE and a["crossings"] < b["crossings"]


def optimize(g: Graph, cfg: LayoutConfig, starts: Optional[Sequence[np.ndarray]] = None,
             keep_traces: bool = False) -> Tuple[FloatDrawing, OptReport]:
    """Best of ``cfg.restarts`` descents.

    The winner has the lowest final energy; near-ties go to the layout with
    fewer crossings, then to the earlier restart.

    ``starts`` optionally fixes initial position arrays per restart; missing
    entries are drawn uniformly from a square of side ``L * sqrt(n)``.
    """
    prob = _Problem(g)
    best = None
    summaries = []
    for r in range(cfg.restarts):
        P0 = starts[r] if starts is not None and r < len(starts) and starts[r] is not None \
            else _initial(g.n, cfg, _rng(cfg, r))
        P, info = _run(prob, np.array(P0, dtype=np.float64), cfg)
        if not keep_traces:
            info = dict(info)
            tr = info.pop("trace")
            info["trace"] = {k: {"start": v[0] if v else None, "end": v[-1] if v else None, "steps": len(v)}
                             for k, v in tr.items()}
        summaries.append(info)
        if best is None or _better(info, summaries[best[0]]):
            best = (r, P)
    r, P = best
    info = summaries[r]
    rep = OptReport(info["energy"], info["min_angle"], info["iterations"], info["converged"],
                    None, summaries, r)
    return FloatDrawing.from_array(g, P), rep


# ---------------------------------------------------------------------------
# near-RAC classification


@dataclass
class NearRacResult:
    near_rac: bool
    embedding: Optional[PlanarizedEmbedding]
    min_angle: Optional[float]
    reason: str = ""


def _tol_sign(v) -> int:
    return 0 if abs(v) <= SIGN_TOL else (1 if v > 0 else -1)


def _float_degeneracies(P, eu, ev, pairs) -> List[str]:
    out = []
    scale = max(1.0, float(np.abs(P).max()) if len(P) else 1.0)
    tol = SIGN_TOL * scale * scale
    n = len(P)
    # vertex on a foreign edge
    for e in range(len(eu)):
        a, b = P[eu[e]], P[ev[e]]
        d = b - a
        for p in range(n):
            if p == eu[e] or p == ev[e]:
                continue
            q = P[p]
            cr = d[0] * (q[1] - a[1]) - d[1] * (q[0] - a[0])
            if abs(cr) <= tol:
                t = float(np.dot(q - a, d))
                if -tol <= t <= float(np.dot(d, d)) + tol:
                    out.append(f"vertex {p} on edge {e}")
    # touching or overlapping disjoint edges
    I, J = pairs
    for i, j in zip(I.tolist(), J.tolist()):
        a, b, c, d = P[eu[i]], P[ev[i]], P[eu[j]], P[ev[j]]
        d1, d2 = b - a, d - c
        o = [d1[0] * (c[1] - a[1]) - d1[1] * (c[0] - a[0]),
             d1[0] * (d[1] - a[1]) - d1[1] * (d[0] - a[0]),
             d2[0] * (a[1] - c[1]) - d2[1] * (a[0] - c[0]),
             d2[0] * (b[1] - c[1]) - d2[1] * (b[0] - c[0])]
        if all(abs(x) <= tol for x in o):
            lo = max(min(a[0], b[0]), min(c[0], d[0]))
            hi = min(max(a[0], b[0]), max(c[0], d[0]))
            lo_y = max(min(a[1], b[1]), min(c[1], d[1]))
            hi_y = min(max(a[1], b[1]), max(c[1], d[1]))
            if lo <= hi + tol and lo_y <= hi_y + tol:
                out.append(f"edges {i},{j} overlap")
    return out


def classify_near_rac(d: FloatDrawing, eps_deg: float = 0.1) -> NearRacResult:
    """near-RAC iff no tolerance-level degeneracy and every crossing angle >= 90 - eps_deg."""
    prob, P = _as_problem(d)
    bad = _float_degeneracies(P, prob.eu, prob.ev, prob.pairs)
    ia, ib, cos = F.crossings(P, prob.eu, prob.ev, prob.pairs)
    angle = float(np.degrees(np.arccos(np.clip(cos.max(), 0, 1)))) if len(cos) else None
    if bad:
        return NearRacResult(False, None, angle, "degenerate: " + "; ".join(bad[:3]))
    if angle is not None and angle < 90.0 - eps_deg:
        return NearRacResult(False, None, angle, f"min crossing angle {angle:.4f}")
    edges = d.graph.edges
    cr = []
    for a, b in zip(ia.tolist(), ib.tolist()):
        p, q = P[prob.eu[a]], P[prob.ev[a]]
        r, s = P[prob.eu[b]], P[prob.ev[b]]
        d1, d2 = q - p, s - r
        den = d1[0] * d2[1] - d1[1] * d2[0]
        t = ((r[0] - p[0]) * d2[1] - (r[1] - p[1]) * d2[0]) / den
        cr.append((edges[a], edges[b], (float(p[0] + t * d1[0]), float(p[1] + t * d1[1]))))
    emb = planarize(d.graph.vertices, d.positions, edges, cr, sign=_tol_sign)
    return NearRacResult(True, emb, angle, "")


# ---------------------------------------------------------------------------
# embedding classes modulo graph automorphisms and reflection


def automorphisms(g: Graph) -> List[Dict[VertexId, VertexId]]:
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    maps = list(nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter())
    maps.sort(key=lambda m: [m[v] for v in g.vertices])
    return maps


def relabel(e: PlanarizedEmbedding, sigma: Mapping[VertexId, VertexId]) -> PlanarizedEmbedding:
    names = {}
    meta = {}
    for node in e.rotation:
        if node in e.dummy_meta:
            e1, e2 = e.dummy_meta[node]
            m1, m2 = tuple(sigma[v] for v in e1), tuple(sigma[v] for v in e2)
            names[node] = dummy_id(m1, m2)
            meta[names[node]] = tuple(sorted((tuple(sorted(m1)), tuple(sorted(m2)))))
        else:
            names[node] = sigma[node]
    rotation = {names[v]: tuple(names[w] for w in r) for v, r in e.rotation.items()}
    return PlanarizedEmbedding(rotation, meta, tuple(sigma[v] for v in e.vertices))


def canonical_code(e: PlanarizedEmbedding, autos: Sequence[Mapping]) -> str:
    """Smallest code over all automorphic relabelings and both orientations."""
    best = None
    for sigma in autos:
        r = relabel(e, sigma)
        for rev in (False, True):
            c = r.code(rev)
            if best is None or c < best:
                best = c
    return best


def class_id(code: str) -> str:
    return hashlib.sha1(code.encode()).hexdigest()[:12]


def _orientation_tag(e: PlanarizedEmbedding, ref: PlanarizedEmbedding) -> str:
    norm = e.normalized()
    if norm == ref.normalized():
        return "A"
    if norm == ref.normalized(reverse=True):
        return "B"
    return "relabeled"


@dataclass
class SurveyResult:
    classes: Dict[str, dict]
    runs: List[dict]
    near_rac: int
    total: int
    automorphisms: int
    drawings: Dict[int, FloatDrawing] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {"classes": self.classes, "runs": self.runs, "near_rac": self.near_rac,
                "total": self.total, "automorphisms": self.automorphisms}


def survey_embeddings(g: Graph, cfg: LayoutConfig, fixtures: Sequence[Drawing] = (),
                      run_log: bool = True) -> SurveyResult:
    """Optimize from ``cfg.restarts`` starts and bucket near-RAC outcomes by embedding class.

    Classes are taken modulo graph automorphisms and reflection.  When
    ``fixtures`` are given, a ``cfg.seeded_fraction`` share of the starts are
    fixture layouts (rescaled to mean edge length ``L``) with uniform noise of
    amplitude ``cfg.perturbation * L``, cycling through the fixtures.  The
    orientation tally compares each outcome, with its labels as drawn, to the
    first fixture: ``A`` identical, ``B`` mirrored, ``relabeled`` otherwise
    (random starts rarely keep the fixture's labelling).
    """
    from .checker import extract_embedding

    prob = _Problem(g)
    autos = automorphisms(g)
    ref = extract_embedding(fixtures[0]) if fixtures else None
    fix_arrays = []
    for f in fixtures:
        A = FloatDrawing.from_drawing(f).as_array()
        mean_len = float(np.mean(np.linalg.norm(A[prob.ev] - A[prob.eu], axis=1))) or 1.0
        fix_arrays.append((A - A.mean(axis=0)) * (cfg.rest_length / mean_len))
    n_seeded = int(round(cfg.seeded_fraction * cfg.restarts)) if fixtures else 0
    classes: Dict[str, dict] = {}
    runs = []
    drawings: Dict[int, FloatDrawing] = {}
    near = 0
    for r in range(cfg.restarts):
        rng = _rng(cfg, r)
        if r < n_seeded:
            base = fix_arrays[r % len(fix_arrays)]
            P0 = base + rng.uniform(-1, 1, size=base.shape) * cfg.perturbation * cfg.rest_length
            start = f"fixture-{r % len(fix_arrays)}"
        else:
            P0 = _initial(g.n, cfg, rng)
            start = "random"
        P, info = _run(prob, P0, cfg)
        fd = FloatDrawing.from_array(g, P)
        res = classify_near_rac(fd, cfg.eps_deg)
        rec = {"restart": r, "start": start, "energy": info["energy"], "min_angle": info["min_angle"],
               "near_rac": res.near_rac, "class": None}
        if res.near_rac:
            near += 1
            code = canonical_code(res.embedding, autos)
            cid = class_id(code)
            rec["class"] = cid
            entry = classes.setdefault(code, {"id": cid, "count": 0, "orientation": {}, "starts": {}})
            entry["count"] += 1
            if ref is not None:
                tag = _orientation_tag(res.embedding, ref)
                entry["orientation"][tag] = entry["orientation"].get(tag, 0) + 1
            entry["starts"][start.split("-")[0]] = entry["starts"].get(start.split("-")[0], 0) + 1
            drawings[r] = fd
        runs.append(rec)
    if not run_log:
        runs = []
    return SurveyResult(classes, runs, near, cfg.restarts, len(autos), drawings)
