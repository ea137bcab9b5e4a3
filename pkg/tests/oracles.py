"""Independent reference implementations used as test oracles.

These deliberately avoid racforge.geometry and the numba kernels: plain
Fraction arithmetic, all pairs, no pruning.
"""
from fractions import Fraction
from itertools import combinations


def _cr(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _sgn(v):
    return (v > 0) - (v < 0)


def _between(a, b, c):
    return min(a, b) <= c <= max(a, b)


def brute_force(vertices, edges, pos):
    """Return (crossings, degenerate) for a straight-line drawing.

    ``crossings`` is a set of frozenset({edge, edge}) with edges as sorted
    tuples; ``degenerate`` is True when a vertex touches a foreign edge or two
    non-adjacent edges share any point other than a proper crossing.
    """
    E = [tuple(sorted(e)) for e in edges]
    degenerate = False
    for v in vertices:
        px, py = pos[v]
        for a, b in E:
            if v in (a, b):
                continue
            (ax, ay), (bx, by) = pos[a], pos[b]
            if _cr(ax, ay, bx, by, px, py) == 0 and _between(ax, bx, px) and _between(ay, by, py):
                degenerate = True
    out = set()
    for e, f in combinations(E, 2):
        if set(e) & set(f):
            continue
        (ax, ay), (bx, by) = pos[e[0]], pos[e[1]]
        (cx, cy), (dx, dy) = pos[f[0]], pos[f[1]]
        o1 = _sgn(_cr(ax, ay, bx, by, cx, cy))
        o2 = _sgn(_cr(ax, ay, bx, by, dx, dy))
        o3 = _sgn(_cr(cx, cy, dx, dy, ax, ay))
        o4 = _sgn(_cr(cx, cy, dx, dy, bx, by))
        if o1 * o2 < 0 and o3 * o4 < 0:
            out.add(frozenset((e, f)))
        elif o1 * o2 <= 0 and o3 * o4 <= 0:
            # some contact that is not a proper crossing (touch or overlap);
            # collinear pairs need a projection test
            if o1 == o2 == o3 == o4 == 0:
                lo = max(min(ax, bx), min(cx, dx)), max(min(ay, by), min(cy, dy))
                hi = min(max(ax, bx), max(cx, dx)), min(max(ay, by), max(cy, dy))
                if lo[0] <= hi[0] and lo[1] <= hi[1]:
                    degenerate = True
            else:
                degenerate = True
    return out, degenerate


def crossing_point(pos, e, f):
    (ax, ay), (bx, by) = pos[e[0]], pos[e[1]]
    (cx, cy), (dx, dy) = pos[f[0]], pos[f[1]]
    den = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
    t = Fraction((cx - ax) * (dy - cy) - (cy - ay) * (dx - cx)) / den
    return ax + t * (bx - ax), ay + t * (by - ay)


def fence_violations(vertices, edges, pos):
    """(triangle as frozenset, apex) pairs, by direct enumeration."""
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    found = set()
    for a, b, c in combinations(vertices, 3):
        if not (b in adj[a] and c in adj[a] and c in adj[b]):
            continue
        area = _sgn(_cr(*pos[a], *pos[b], *pos[c]))
        if area == 0:
            continue

        def where(q):
            s = [_sgn(_cr(*pos[a], *pos[b], *pos[q])) * area,
                 _sgn(_cr(*pos[b], *pos[c], *pos[q])) * area,
                 _sgn(_cr(*pos[c], *pos[a], *pos[q])) * area]
            if min(s) > 0:
                return "in"
            if min(s) < 0:
                return "out"
            return "edge"

        for apex in vertices:
            if apex in (a, b, c) or where(apex) != "out":
                continue
            inner = [w for w in adj[apex] if w not in (a, b, c) and where(w) == "in"]
            if len(inner) >= 2:
                found.add((frozenset((a, b, c)), apex))
    return found


def random_3cnf(rng, n, m):
    """Clause list of DIMACS ints: three distinct variables, random signs."""
    out = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        out.append([v if rng.random() < 0.5 else -v for v in vs])
    return out


def satisfying_bits(n, clauses):
    """Every satisfying assignment by exhaustive search, as bool tuples."""
    from itertools import product
    found = []
    for bits in product((False, True), repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            found.append(bits)
    return found


def random_drawing(rng, n_max=12, coord=6, den=1):
    n = rng.randint(2, n_max)
    verts = [f"v{i}" for i in range(n)]
    pts = set()
    pos = {}
    for v in verts:
        while True:
            p = (Fraction(rng.randint(-coord * den, coord * den), den),
                 Fraction(rng.randint(-coord * den, coord * den), den))
            if p not in pts:
                break
        pts.add(p)
        pos[v] = p
    pairs = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]]
    density = rng.uniform(0.1, 0.6)
    edges = [e for e in pairs if rng.random() < density]
    return verts, edges, pos
