"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each workload runs once per backend to warm up (JIT compile for numba), then
best-of-``repeat`` wall time is reported.  Outputs of the two backends are
compared before timing so a speedup never hides a disagreement.
"""
import argparse
import json
import random
import sys
import timeit

import numpy as np

from racforge import _accel
from racforge import _exact_kernels as K
from racforge import _float_kernels as F
from racforge.checker import check_rac
from racforge.graph import augmented_antiprism
from racforge.layout import LayoutConfig, optimize
from racforge.reduction import Assignment, CnfFormula, synthesize_drawing


def _gadget_drawing(n=6, m=10, seed=1):
    rng = random.Random(seed)
    while True:
        clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)] for _ in range(m)]
        for bits in np.ndindex(*(2,) * n):
            bits = tuple(bool(b) for b in bits)
            if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
                return synthesize_drawing(CnfFormula.from_ints(n, clauses), Assignment(bits))


def _exact_arrays(d):
    verts = list(d.graph.vertices)
    index = {v: i for i, v in enumerate(verts)}
    den = 1
    for p in d.positions.values():
        den = np.lcm(den, np.lcm(p.x.denominator, p.y.denominator))
    X = np.array([int(d.positions[v].x * den) for v in verts], dtype=np.int64)
    Y = np.array([int(d.positions[v].y * den) for v in verts], dtype=np.int64)
    eu = np.array([index[a] for a, _ in d.graph.edges], dtype=np.int64)
    ev = np.array([index[b] for _, b in d.graph.edges], dtype=np.int64)
    T = np.array(d.graph.triangle_indices(), dtype=np.int64)
    return X, Y, eu, ev, T


def _float_problem(n=120, density=0.06, seed=0):
    rng = np.random.default_rng(seed)
    I, J = np.triu_indices(n, 1)
    keep = rng.random(len(I)) < density
    return rng.uniform(0, 10, size=(n, 2)), I[keep].astype(np.int64), J[keep].astype(np.int64)


def workloads():
    d = _gadget_drawing()
    X, Y, eu, ev, T = _exact_arrays(d)
    P, fu, fv = _float_problem()
    args = (1.0, 0.5, 1.0, 0.7, 0.8)
    g4 = augmented_antiprism(4).graph
    cfg = LayoutConfig(seed=0, restarts=3)
    return {
        "segment_pairs": (lambda: K.segment_pairs(X[eu], Y[eu], X[ev], Y[ev], eu, ev),
                          f"{len(eu)} segments"),
        "points_in_triangles": (lambda: K.points_in_triangles(X, Y, T), f"{len(X)} points, {len(T)} triangles"),
        "crossings": (lambda: F.crossings(P, fu, fv), f"{len(fu)} float segments"),
        "energy_grad": (lambda: F.energy_grad(P, fu, fv, *args, True), f"{len(P)} vertices, {len(fu)} edges"),
        "check_rac": (lambda: check_rac(d).is_rac, f"gadget drawing, {d.graph.n} vertices"),
        "optimize": (lambda: optimize(g4, cfg)[1].energy, "antiprism k=4, 3 restarts"),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.shape == b.shape and np.allclose(a, b, rtol=1e-9, atol=1e-12)
    if isinstance(a, float):
        return abs(a - b) <= 1e-9 * max(1.0, abs(a))
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--only", action="append", help="run just this workload (repeatable)")
    ap.add_argument("--json", help="write results here")
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba not importable; nothing to compare", file=sys.stderr)
        return 1

    prev = _accel.backend()
    rows = []
    try:
        for name, (fn, what) in workloads().items():
            if args.only and name not in args.only:
                continue
            res, best = {}, {}
            for b in ("numba", "numpy"):
                _accel.set_backend(b)
                res[b] = fn()  # warm-up, and the output we compare
                best[b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            agree = _same(res["numba"], res["numpy"])
            rows.append({"kernel": name, "workload": what, "numba_s": best["numba"], "numpy_s": best["numpy"],
                         "speedup": best["numpy"] / best["numba"], "agree": agree})
    finally:
        _accel.set_backend(prev)

    print(f"{'kernel':<20} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  agree  workload")
    for r in rows:
        print(f"{r['kernel']:<20} {r['numba_s'] * 1e3:>10.2f} {r['numpy_s'] * 1e3:>10.2f} {r['speedup']:>7.1f}x"
              f"  {'yes' if r['agree'] else 'NO ':<5}  {r['workload']}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
