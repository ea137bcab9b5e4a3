"""Deterministic SVG export with right-angle glyphs at perpendicular crossings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import _float_kernels as F
from .checker import check_rac
from .errors import InvalidParameter
from .graph import Drawing
from .layout import FloatDrawing

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
FLOAT_PERP_TOL = 1e-9


@dataclass(frozen=True)
class SvgOptions:
    scale: float = 20.0
    show_crossings: bool = True
    highlight_roles: Tuple[str, ...] = ()
    edge_width: float = 1.0
    glyph_width: float = 0.8
    vertex_radius: float = 2.5
    glyph_size: float = 6.0
    margin: float = 12.0

    def __post_init__(self):
        if self.scale <= 0:
            raise InvalidParameter("scale must be > 0")


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _crossings(d) -> List[Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float], bool]]:
    """(point, unit dir 1, unit dir 2, perpendicular) per crossing."""
    out = []
    if isinstance(d, Drawing):
        for c in check_rac(d).crossings:
            dirs = []
            for u, v in (c.edge1, c.edge2):
                p, q = d.positions[u], d.positions[v]
                dirs.append((float(q.x - p.x), float(q.y - p.y)))
            out.append(((float(c.point.x), float(c.point.y)), dirs[0], dirs[1], c.perpendicular))
        return out
    verts = d.graph.vertices
    index = {v: i for i, v in enumerate(verts)}
    P = d.as_array()
    eu = np.array([index[u] for u, _ in d.graph.edges], dtype=np.int64)
    ev = np.array([index[v] for _, v in d.graph.edges], dtype=np.int64)
    ia, ib, cos = F.crossings(P, eu, ev)
    for a, b, c in zip(ia.tolist(), ib.tolist(), cos.tolist()):
        p, d1 = P[eu[a]], P[ev[a]] - P[eu[a]]
        r, d2 = P[eu[b]], P[ev[b]] - P[eu[b]]
        den = d1[0] * d2[1] - d1[1] * d2[0]
        t = ((r[0] - p[0]) * d2[1] - (r[1] - p[1]) * d2[0]) / den
        pt = (float(p[0] + t * d1[0]), float(p[1] + t * d1[1]))
        out.append((pt, (float(d1[0]), float(d1[1])), (float(d2[0]), float(d2[1])), c <= FLOAT_PERP_TOL))
    return out


def render_svg(d: Union[Drawing, FloatDrawing], opts: SvgOptions = SvgOptions(),
               roles: Optional[Mapping[str, Sequence[str]]] = None) -> str:
    if isinstance(d, Drawing):
        pos = {v: (float(p.x), float(p.y)) for v, p in d.positions.items()}
    else:
        pos = dict(d.positions)
    xs = [p[0] for p in pos.values()] or [0.0]
    ys = [p[1] for p in pos.values()] or [0.0]
    s, m = opts.scale, opts.margin
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0) * s + 2 * m
    height = (y1 - min(ys)) * s + 2 * m

    def X(x):
        return (x - x0) * s + m

    def Y(y):
        return (y1 - y) * s + m

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        '<g stroke="#333" stroke-linecap="round" fill="none" '
        f'stroke-width="{_fmt(opts.edge_width)}">',
    ]
    for u, v in d.graph.edges:
        (ax, ay), (bx, by) = pos[u], pos[v]
        out.append(f'<line x1="{_fmt(X(ax))}" y1="{_fmt(Y(ay))}" x2="{_fmt(X(bx))}" y2="{_fmt(Y(by))}"/>')
    out.append("</g>")

    if opts.show_crossings:
        out.append(f'<g class="right-angles" stroke="#c00" fill="none" stroke-width="{_fmt(opts.glyph_width)}">')
        g = opts.glyph_size
        for (px, py), d1, d2, perp in _crossings(d):
            if not perp:
                continue
            n1 = np.hypot(*d1)
            n2 = np.hypot(*d2)
            # screen space flips y
            ux, uy = d1[0] / n1 * g, -d1[1] / n1 * g
            wx, wy = d2[0] / n2 * g, -d2[1] / n2 * g
            cx, cy = X(px), Y(py)
            pts = [(cx + ux, cy + uy), (cx + ux + wx, cy + uy + wy), (cx + wx, cy + wy)]
            out.append('<polyline points="' + " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts) + '"/>')
        out.append("</g>")

    color: Dict[str, str] = {}
    for k, name in enumerate(opts.highlight_roles):
        ids = (roles or {}).get(name, [])
        ids = [ids] if isinstance(ids, str) else ids
        for v in ids:
            color.setdefault(v, PALETTE[k % len(PALETTE)])
    out.append('<g stroke="none">')
    r = _fmt(opts.vertex_radius)
    for v in d.graph.vertices:
        x, y = pos[v]
        out.append(f'<circle cx="{_fmt(X(x))}" cy="{_fmt(Y(y))}" r="{r}" fill="{color.get(v, "#000")}">'
                   f'<title>{_escape(v)}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
