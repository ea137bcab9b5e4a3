"""Compilation of a 3-CNF formula into the gadget graph, its exact drawing, and decoding.

Layout (all coordinates on an integer grid, antiprism units are 6x6):

* horizontal part: a floor of square antiprisms glued side by side, a post
  glued on each end, and two long horizontal rails between the posts;
* columns above the floor, 12 units apart: left dummy tower, variable towers
  1..n, right dummy tower and the vertical part; every column hangs off the
  floor by one vertical edge that crosses the rails;
* a variable tower is a stack of m slots (four glued units each, literal
  endpoints on both sides of the second unit) joined by corridor links and
  topped by a cap unit carrying two connectors and hung from it by the axis;
* clause gadgets sit to the right of the vertical part: a jaw unit, two
  parallel trap edges from the vertical part to the jaw, and a centre vertex
  with three clause endpoints, each reaching its literal endpoint through a
  path of length two.

The graph depends only on the formula.  The drawing depends on the
assignment: it decides which side of each tower carries the negated
endpoints and which clause endpoint stays trapped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from ..errors import InconsistentGeometry, UnsatAssignment
from ..geometry import Point, orientation
from ..graph import SQUARE_INNER, SQUARE_OUTER, Drawing, Graph, LabeledGraph
from .cnf import Assignment, CnfFormula, satisfies

PITCH = 12          # distance between tower columns
SLOT_UNITS = 4      # glued units per endpoint slot
ENDPOINT_UNIT = 1   # unit of the slot stack that carries the literal endpoints
SUB_BAND = 32       # height reserved for one slot stack plus its access row
STRIP = 12          # height of a clause trap strip
BASE_Y = 18         # centre of tower base units
FIRST_BAND = 24
SIDE_OFFSET = 5     # horizontal offset of endpoints and connectors from a column axis

_LOCAL = {f"o{t}": xy for t, xy in enumerate(SQUARE_OUTER)}
_LOCAL.update({f"i{t}": xy for t, xy in enumerate(SQUARE_INNER)})
_LOCAL["c"] = (0, 0)
_NORTH, _SOUTH = ("o2", "i1", "o1"), ("o3", "i3", "o0")
_EAST, _WEST = ("o0", "i0", "o1"), ("o3", "i2", "o2")


@dataclass
class GadgetLabels:
    """Role map of the compiled graph (role name -> vertex ids)."""

    num_variables: int
    num_clauses: int
    roles: Dict[str, List[str]] = field(default_factory=dict)

    def get(self, name: str) -> List[str]:
        return list(self.roles.get(name, []))

    def one(self, name: str) -> str:
        ids = self.roles[name]
        if len(ids) != 1:
            raise KeyError(f"role {name!r} holds {len(ids)} vertices")
        return ids[0]

    def variable_endpoints(self, i: int) -> List[str]:
        return [self.one(f"variable-endpoint({i},{j})") for j in range(1, self.num_clauses + 1)]

    def negated_endpoints(self, i: int) -> List[str]:
        return [self.one(f"negated-endpoint({i},{j})") for j in range(1, self.num_clauses + 1)]

    def corridor_edges(self) -> List[Tuple[str, str]]:
        flat = self.roles.get("corridor-boundary", [])
        return [(flat[k], flat[k + 1]) for k in range(0, len(flat), 2)]

    def to_dict(self) -> dict:
        return {"num_variables": self.num_variables, "num_clauses": self.num_clauses,
                "roles": {k: list(v) for k, v in self.roles.items()}}

    @classmethod
    def from_dict(cls, data: Mapping) -> "GadgetLabels":
        return cls(int(data["num_variables"]), int(data["num_clauses"]),
                   {k: list(v) for k, v in data["roles"].items()})


class _Builder:
    def __init__(self):
        self.vertices: List[str] = []
        self.edges: List[Tuple[str, str]] = []
        self.units: Dict[str, Dict[str, str]] = {}
        self.centre: Dict[str, Tuple[int, int]] = {}
        self._seen = set()

    def vertex(self, name: str) -> str:
        if name not in self._seen:
            self._seen.add(name)
            self.vertices.append(name)
        return name

    def edge(self, u: str, v: str):
        self.edges.append((u, v))

    def unit(self, prefix: str, alias: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
        """Add an augmented square antiprism; ``alias`` reuses existing vertices for corners."""
        alias = dict(alias or {})
        names = {}
        for local in ("c", "o0", "o1", "o2", "o3", "i0", "i1", "i2", "i3"):
            names[local] = alias.get(local) or self.vertex(prefix + local)
        for t in range(4):
            o, o1 = names[f"o{t}"], names[f"o{(t + 1) % 4}"]
            i, i1 = names[f"i{t}"], names[f"i{(t + 1) % 4}"]
            self.edge(names["c"], o)
            self.edge(names["c"], i)
            if not (o in alias.values() and o1 in alias.values()):
                self.edge(o, o1)
            self.edge(i, i1)
            self.edge(i, o)
            self.edge(i, o1)
        self.units[prefix] = names
        return names

    def glue(self, below: str, prefix: str, direction: str) -> Dict[str, str]:
        """Genuine extension: a new unit sharing one side with ``below``."""
        lo = self.units[below]
        if direction == "north":
            alias = {"o3": lo["o2"], "o0": lo["o1"]}
            inner = (lo["i1"], "i3")
        else:  # east
            alias = {"o3": lo["o0"], "o2": lo["o1"]}
            inner = (lo["i0"], "i2")
        names = self.unit(prefix, alias)
        self.edge(inner[0], names[inner[1]])
        return names

    def link(self, a: str, b: str, direction: str) -> List[Tuple[str, str]]:
        """Stretched extension: three parallel edges between facing sides of two units."""
        ua, ub = self.units[a], self.units[b]
        sa, sb = (_NORTH, _SOUTH) if direction == "north" else (_EAST, _WEST)
        out = [(ua[p], ub[q]) for p, q in zip(sa, sb)]
        for u, v in out:
            self.edge(u, v)
        return out


@dataclass
class _Construction:
    formula: CnfFormula
    builder: _Builder
    labels: GadgetLabels
    lowest_unit: Dict[str, str]


def _column_x(k: int) -> int:
    return PITCH * (k + 1)


def _build(f: CnfFormula) -> _Construction:
    n, m = f.n, f.m
    B = _Builder()
    roles: Dict[str, List[str]] = {}
    corridor: List[str] = []

    # horizontal part ------------------------------------------------------
    floor_count = 2 * (n + 4) + 1
    B.unit("F0.")
    for q in range(1, floor_count):
        B.glue(f"F{q - 1}.", f"F{q}.", "east")
    B.glue("F0.", "PL.", "north")
    B.glue(f"F{floor_count - 1}.", "PR.", "north")
    pl, pr = B.units["PL."], B.units["PR."]
    B.edge(pl["o1"], pr["o2"])
    B.edge(pl["i0"], pr["i2"])
    roles["rails"] = [pl["o1"], pr["o2"], pl["i0"], pr["i2"]]

    columns = ["DL"] + [f"T{i}" for i in range(1, n + 1)] + ["DR", "VP"]
    lowest: Dict[str, str] = {}

    # variable towers ------------------------------------------------------
    for i in range(1, n + 1):
        t = f"T{i}"
        prev = None
        tower_corr: List[str] = []
        for j in range(1, m + 1):
            first = f"{t}.s{j}.u0."
            B.unit(first)
            if prev is None:
                lowest[t] = first
            else:
                for u, v in B.link(prev, first, "north"):
                    tower_corr += [u, v]
            for k in range(1, SLOT_UNITS):
                B.glue(f"{t}.s{j}.u{k - 1}.", f"{t}.s{j}.u{k}.", "north")
            carrier = B.units[f"{t}.s{j}.u{ENDPOINT_UNIT}."]
            x = B.vertex(f"x{i}_{j}")
            nx = B.vertex(f"nx{i}_{j}")
            # x is tied to the east corners and nx to the west corners; the
            # drawing picks the orientation of the whole slot block
            B.edge(x, carrier["o0"])
            B.edge(x, carrier["o1"])
            B.edge(nx, carrier["o3"])
            B.edge(nx, carrier["o2"])
            roles[f"variable-endpoint({i},{j})"] = [x]
            roles[f"negated-endpoint({i},{j})"] = [nx]
            prev = f"{t}.s{j}.u{SLOT_UNITS - 1}."
        cap = f"{t}.cap."
        B.unit(cap)
        if prev is None:
            lowest[t] = cap
        else:
            # the cap hangs on the axis only, so the slot block below can be
            # drawn in either orientation
            u, v = B.units[prev]["i1"], B.units[cap]["i3"]
            B.edge(u, v)
            tower_corr += [u, v]
        roles[f"corridor-boundary({t})"] = tower_corr
        corridor += tower_corr

    # dummy towers and the vertical part ------------------------------------
    for d in ("DL", "DR"):
        B.unit(f"{d}.base.")
        B.unit(f"{d}.cap.")
        lk = B.link(f"{d}.base.", f"{d}.cap.", "north")
        roles[f"corridor-boundary({d})"] = [v for e in lk for v in e]
        corridor += roles[f"corridor-boundary({d})"]
        lowest[d] = f"{d}.base."
    B.unit("VP.base.")
    lowest["VP"] = "VP.base."
    prev = "VP.base."
    vp_corr: List[str] = []
    for j in range(1, m + 1):
        B.unit(f"VP.k{j}.")
        for u, v in B.link(prev, f"VP.k{j}.", "north"):
            vp_corr += [u, v]
        prev = f"VP.k{j}."
    B.unit("VP.top.")
    for u, v in B.link(prev, "VP.top.", "north"):
        vp_corr += [u, v]
    roles["corridor-boundary(VP)"] = vp_corr
    corridor += vp_corr

    # hang every column off the floor
    for k, col in enumerate(columns):
        floor_unit = B.units[f"F{2 * (k + 1)}."]
        low = B.units[lowest[col]]
        B.edge(floor_unit["i1"], low["i3"])
        if col.startswith("T"):
            roles[f"corridor-boundary({col})"] += [floor_unit["i1"], low["i3"]]
            corridor += [floor_unit["i1"], low["i3"]]
        roles[f"attach({col})"] = [floor_unit["i1"], low["i3"]]

    # right dummy base is tied to the vertical part base
    B.edge(B.units["DR.base."]["i0"], B.units["VP.base."]["i2"])

    # connectors -----------------------------------------------------------
    conn_cols = columns[:-1]
    for col in conn_cols:
        cap = B.units[f"{col}.cap."]
        cl, cr = B.vertex(f"{col}.cl"), B.vertex(f"{col}.cr")
        for v in ("o2", "o3", "i2"):
            B.edge(cl, cap[v])
        for v in ("o0", "o1", "i0"):
            B.edge(cr, cap[v])
        roles[f"connector({col})"] = [cl, cr]
    top = B.units["VP.top."]
    vpcl = B.vertex("VP.cl")
    for v in ("o2", "o3", "i2"):
        B.edge(vpcl, top[v])
    roles["connector(VP)"] = [vpcl]
    for a, b in zip(conn_cols, conn_cols[1:]):
        B.edge(f"{a}.cr", f"{b}.cl")
    B.edge(f"{conn_cols[-1]}.cr", "VP.cl")

    # clause gadgets -------------------------------------------------------
    for j, clause in enumerate(f.clauses, 1):
        jaw = B.unit(f"C{j}.jaw.")
        anchor = B.units[f"VP.k{j}."]
        B.edge(anchor["o1"], jaw["o2"])
        B.edge(anchor["o0"], jaw["o3"])
        z = B.vertex(f"C{j}.z")
        roles[f"clause-trap({j})"] = [anchor["o1"], jaw["o2"], anchor["o0"], jaw["o3"]]
        roles[f"clause-center({j})"] = [z]
        for k, (var, neg) in enumerate(clause):
            e = B.vertex(f"C{j}.e{k}")
            w = B.vertex(f"C{j}.w{k}")
            target = f"nx{var}_{j}" if neg else f"x{var}_{j}"
            B.edge(z, e)
            B.edge(e, w)
            B.edge(w, target)
            roles[f"clause-endpoint({j},{k})"] = [e]
            roles[f"path-intermediate({j},{k})"] = [w]

    # role summaries -------------------------------------------------------
    roles["corridor-boundary"] = corridor
    for col in columns[:-1]:
        prefix = f"{col}."
        members = [v for v in B.vertices if v.startswith(prefix)]
        if col.startswith("T"):
            i = int(col[1:])
            members += [v for j in range(1, m + 1) for v in (f"x{i}_{j}", f"nx{i}_{j}")]
            roles[f"tower({i})"] = members
            roles[f"tower-axis({i})"] = [B.units[lowest[col]]["c"], B.units[f"{col}.cap."]["c"]]
        else:
            roles[f"dummy-tower({col[1]})"] = members
    roles["skeleton-part(horizontal)"] = [v for v in B.vertices if v.startswith(("F", "PL.", "PR."))]
    roles["skeleton-part(vertical)"] = [v for v in B.vertices if v.startswith("VP.")]
    roles["vertical-part-anchor"] = [B.units["VP.base."]["c"]]

    labels = GadgetLabels(n, m, roles)
    return _Construction(f, B, labels, lowest)


@lru_cache(maxsize=16)
def _compiled(f: CnfFormula) -> Tuple[_Construction, Graph]:
    c = _build(f)
    return c, Graph.build(c.builder.vertices, c.builder.edges)


def compile_formula(f: CnfFormula) -> Tuple[LabeledGraph, GadgetLabels]:
    """Build the gadget graph of ``f``; deterministic in ``f``."""
    c, g = _compiled(f)
    labels = GadgetLabels(c.labels.num_variables, c.labels.num_clauses,
                          {k: list(v) for k, v in c.labels.roles.items()})
    return LabeledGraph(g, labels.roles), labels


# ---------------------------------------------------------------------------
# drawing synthesis


def clause_roles(f: CnfFormula, a: Assignment) -> List[Dict[str, int]]:
    """For each clause, the literal positions playing right/bottom/top.

    The trapped (right) endpoint is the true literal with the lowest variable
    index; of the other two the lower variable index goes on top.
    """
    out = []
    for j, clause in enumerate(f.clauses, 1):
        true_k = [k for k, lit in enumerate(clause) if a.literal(lit)]
        if not true_k:
            raise UnsatAssignment(f"clause {j} is not satisfied")
        r = min(true_k, key=lambda k: clause[k][0])
        rest = sorted((k for k in range(3) if k != r), key=lambda k: clause[k][0])
        out.append({"right": r, "top": rest[0], "bottom": rest[1]})
    return out


def synthesize_drawing(f: CnfFormula, a: Assignment) -> Drawing:
    """Exact RAC drawing of ``compile_formula(f)`` realising the assignment ``a``."""
    if len(a) != f.n:
        raise UnsatAssignment(f"assignment has {len(a)} values, formula has {f.n} variables")
    if not satisfies(f, a):
        bad = next(j for j, cl in enumerate(f.clauses, 1) if not any(a.literal(lit) for lit in cl))
        raise UnsatAssignment(f"clause {bad} is not satisfied")
    c, g = _compiled(f)
    B = c.builder
    n, m = f.n, f.m
    pos: Dict[str, Tuple[int, int]] = {}

    def place(prefix: str, cx: int, cy: int, flip: int = 1):
        for local, name in B.units[prefix].items():
            lx, ly = _LOCAL[local]
            p = (cx + flip * lx, cy + ly)
            if name in pos and pos[name] != p:
                raise AssertionError(f"inconsistent placement of {name}")
            pos[name] = p

    floor_count = 2 * (n + 4) + 1
    for q in range(floor_count):
        place(f"F{q}.", 6 * q, 0)
    place("PL.", 0, 6)
    place("PR.", 6 * (floor_count - 1), 6)

    band_h = n * SUB_BAND + STRIP
    cap_y = FIRST_BAND + m * band_h + 5
    x_of = {"DL": _column_x(0), "DR": _column_x(n + 1), "VP": _column_x(n + 2)}
    for i in range(1, n + 1):
        x_of[f"T{i}"] = _column_x(i)
    xv = x_of["VP"]

    roles = clause_roles(f, a)
    slot_y: Dict[Tuple[int, int], int] = {}   # bottom of the slot's sub-band
    strip_y: Dict[int, int] = {}
    for j, clause in enumerate(f.clauses, 1):
        r = roles[j - 1]
        order = [clause[r["right"]][0], clause[r["bottom"]][0], None, clause[r["top"]][0]]
        order += [i for i in range(1, n + 1) if i not in order]
        y = FIRST_BAND + (j - 1) * band_h
        for item in order:
            if item is None:
                strip_y[j] = y
                y += STRIP
            else:
                slot_y[(item, j)] = y
                y += SUB_BAND

    for d in ("DL", "DR"):
        place(f"{d}.base.", x_of[d], BASE_Y)
        place(f"{d}.cap.", x_of[d], cap_y)
    place("VP.base.", xv, BASE_Y)
    place("VP.top.", xv, cap_y)
    for j in range(1, m + 1):
        place(f"VP.k{j}.", xv, strip_y[j] + 6)
        place(f"C{j}.jaw.", xv + 15, strip_y[j] + 6)

    def endpoint_row(i, j):
        return slot_y[(i, j)] + 5 + 6 * ENDPOINT_UNIT

    def access_row(i, j):
        return slot_y[(i, j)] + 5 + 6 * (SLOT_UNITS - 1) + 3 + 2

    for i in range(1, n + 1):
        t = f"T{i}"
        x = x_of[t]
        place(f"{t}.cap.", x, cap_y)
        # a false variable draws its slot block reflected about the axis
        flip = 1 if a[i] else -1
        for j in range(1, m + 1):
            for k in range(SLOT_UNITS):
                place(f"{t}.s{j}.u{k}.", x, slot_y[(i, j)] + 5 + 6 * k, flip)
            row = endpoint_row(i, j)
            pos[f"x{i}_{j}"] = (x + flip * SIDE_OFFSET, row)
            pos[f"nx{i}_{j}"] = (x - flip * SIDE_OFFSET, row)

    for col in ["DL"] + [f"T{i}" for i in range(1, n + 1)] + ["DR"]:
        pos[f"{col}.cl"] = (x_of[col] - SIDE_OFFSET, cap_y)
        pos[f"{col}.cr"] = (x_of[col] + SIDE_OFFSET, cap_y)
    pos["VP.cl"] = (xv - SIDE_OFFSET, cap_y)

    xz, xr = xv + 6, xv + 9
    for j, clause in enumerate(f.clauses, 1):
        mid = strip_y[j] + 6
        pos[f"C{j}.z"] = (xz, mid)
        r = roles[j - 1]
        for k, lit in enumerate(clause):
            var = lit[0]
            side = 1 if a.literal(lit) else -1   # true literal endpoints sit east
            if k == r["right"]:
                row = endpoint_row(var, j)
                pos[f"C{j}.e{k}"] = (xr, mid)
                pos[f"C{j}.w{k}"] = (xr, row)
            else:
                row = access_row(var, j)
                pos[f"C{j}.e{k}"] = (xz, row)
                pos[f"C{j}.w{k}"] = (x_of[f"T{var}"] + side * SIDE_OFFSET, row)

    return Drawing(g, {v: Point(Fraction(pos[v][0]), Fraction(pos[v][1])) for v in g.vertices})


# ---------------------------------------------------------------------------
# witness extraction


def extract_assignment(d: Drawing, labels: GadgetLabels) -> Assignment:
    """Read the truth assignment off a drawing of the compiled graph.

    A variable is true when its negated endpoints lie on the side of the tower
    axis facing away from the vertical part.  Measuring the side relative to
    the vertical part makes the reading invariant under reflection.
    """
    P = d.positions
    anchor = P[labels.one("vertical-part-anchor")]
    values = []
    for i in range(1, labels.num_variables + 1):
        lo, hi = (P[v] for v in labels.get(f"tower-axis({i})"))
        negs = labels.negated_endpoints(i)
        if not negs:
            values.append(False)
            continue
        if lo == hi:
            raise InconsistentGeometry(f"tower {i} has a degenerate axis")
        ref = orientation(lo, hi, anchor)
        if ref == 0:
            raise InconsistentGeometry(f"vertical part lies on the axis of tower {i}")
        sides = {orientation(lo, hi, P[v]) for v in negs}
        if 0 in sides:
            raise InconsistentGeometry(f"a negated endpoint of variable {i} lies on the tower axis")
        if len(sides) != 1:
            raise InconsistentGeometry(f"negated endpoints of variable {i} lie on both sides")
        values.append(sides.pop() != ref)
    return Assignment(tuple(values))
