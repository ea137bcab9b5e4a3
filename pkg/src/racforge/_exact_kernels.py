"""Exact segment-pair kernels over int64 coordinates.

The checker scales rational coordinates to a common denominator; when every
scaled coordinate fits in 30 bits the orientation products stay below 2**62
and int64 arithmetic is exact.  Both kernels sweep edges sorted by their
left x-extent and only test pairs whose bounding boxes overlap.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

DISJOINT, CROSS, TOUCH, OVERLAP = 0, 1, 2, 3
INT_LIMIT = 1 << 30


@njit
def _orient(ax, ay, bx, by, cx, cy):
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


@njit
def _in_box(px, py, ax, ay, bx, by):
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


@njit
def _classify(x1, y1, x2, y2, x3, y3, x4, y4):
    o1 = _orient(x1, y1, x2, y2, x3, y3)
    o2 = _orient(x1, y1, x2, y2, x4, y4)
    o3 = _orient(x3, y3, x4, y4, x1, y1)
    o4 = _orient(x3, y3, x4, y4, x2, y2)
    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        if x1 != x2:
            a1, b1, a2, b2 = min(x1, x2), max(x1, x2), min(x3, x4), max(x3, x4)
        else:
            a1, b1, a2, b2 = min(y1, y2), max(y1, y2), min(y3, y4), max(y3, y4)
        lo = max(a1, a2)
        hi = min(b1, b2)
        if lo < hi:
            return OVERLAP
        if lo == hi:
            return TOUCH
        return DISJOINT
    if o1 * o2 < 0 and o3 * o4 < 0:
        return CROSS
    if o1 == 0 and _in_box(x3, y3, x1, y1, x2, y2):
        return TOUCH
    if o2 == 0 and _in_box(x4, y4, x1, y1, x2, y2):
        return TOUCH
    if o3 == 0 and _in_box(x1, y1, x3, y3, x4, y4):
        return TOUCH
    if o4 == 0 and _in_box(x2, y2, x3, y3, x4, y4):
        return TOUCH
    return DISJOINT


@njit
def _sweep_pairs_numba(x1, y1, x2, y2, u, v, order, count_only, out_i, out_j, out_c):
    n = order.shape[0]
    found = 0
    for k in range(n):
        i = order[k]
        xmax_i = max(x1[i], x2[i])
        ymin_i = min(y1[i], y2[i])
        ymax_i = max(y1[i], y2[i])
        for l in range(k + 1, n):
            j = order[l]
            if min(x1[j], x2[j]) > xmax_i:
                break
            if min(y1[j], y2[j]) > ymax_i or max(y1[j], y2[j]) < ymin_i:
                continue
            if u[i] == u[j] or u[i] == v[j] or v[i] == u[j] or v[i] == v[j]:
                continue
            c = _classify(x1[i], y1[i], x2[i], y2[i], x1[j], y1[j], x2[j], y2[j])
            if c != DISJOINT:
                if not count_only:
                    out_i[found] = min(i, j)
                    out_j[found] = max(i, j)
                    out_c[found] = c
                found += 1
    return found


def _classify_np(x1, y1, x2, y2, x3, y3, x4, y4):
    def orient(ax, ay, bx, by, cx, cy):
        return np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))

    def in_box(px, py, ax, ay, bx, by):
        return ((np.minimum(ax, bx) <= px) & (px <= np.maximum(ax, bx))
                & (np.minimum(ay, by) <= py) & (py <= np.maximum(ay, by)))

    o1 = orient(x1, y1, x2, y2, x3, y3)
    o2 = orient(x1, y1, x2, y2, x4, y4)
    o3 = orient(x3, y3, x4, y4, x1, y1)
    o4 = orient(x3, y3, x4, y4, x2, y2)
    code = np.zeros(x1.shape, dtype=np.int64)

    col = (o1 == 0) & (o2 == 0) & (o3 == 0) & (o4 == 0)
    use_x = x1 != x2
    a1 = np.where(use_x, np.minimum(x1, x2), np.minimum(y1, y2))
    b1 = np.where(use_x, np.maximum(x1, x2), np.maximum(y1, y2))
    a2 = np.where(use_x, np.minimum(x3, x4), np.minimum(y3, y4))
    b2 = np.where(use_x, np.maximum(x3, x4), np.maximum(y3, y4))
    lo = np.maximum(a1, a2)
    hi = np.minimum(b1, b2)
    code[col & (lo < hi)] = OVERLAP
    code[col & (lo == hi)] = TOUCH

    rest = ~col
    code[rest & (o1 * o2 < 0) & (o3 * o4 < 0)] = CROSS
    touch = (((o1 == 0) & in_box(x3, y3, x1, y1, x2, y2))
             | ((o2 == 0) & in_box(x4, y4, x1, y1, x2, y2))
             | ((o3 == 0) & in_box(x1, y1, x3, y3, x4, y4))
             | ((o4 == 0) & in_box(x2, y2, x3, y3, x4, y4)))
    code[rest & (code == 0) & touch] = TOUCH
    return code


def _sweep_pairs_numpy(x1, y1, x2, y2, u, v, order, chunk=2_000_000):
    n = order.shape[0]
    xmin = np.minimum(x1, x2)[order]
    xmax = np.maximum(x1, x2)[order]
    hi = np.searchsorted(xmin, xmax, side="right")
    counts = np.maximum(hi - np.arange(n) - 1, 0)
    out_i, out_j, out_c = [], [], []
    start = 0
    while start < n:
        # group rows so each batch materialises at most ~chunk candidate pairs
        stop = start + 1
        acc = counts[start]
        while stop < n and acc + counts[stop] <= chunk:
            acc += counts[stop]
            stop += 1
        c = counts[start:stop]
        total = int(c.sum())
        if total:
            ks = np.repeat(np.arange(start, stop), c)
            first = np.repeat(np.cumsum(c) - c, c)
            ls = ks + 1 + (np.arange(total) - first)
            i = order[ks]
            j = order[ls]
            keep = ~((np.minimum(y1[j], y2[j]) > np.maximum(y1[i], y2[i]))
                     | (np.maximum(y1[j], y2[j]) < np.minimum(y1[i], y2[i])))
            keep &= ~((u[i] == u[j]) | (u[i] == v[j]) | (v[i] == u[j]) | (v[i] == v[j]))
            i, j = i[keep], j[keep]
            code = _classify_np(x1[i], y1[i], x2[i], y2[i], x1[j], y1[j], x2[j], y2[j])
            hit = code != DISJOINT
            out_i.append(np.minimum(i, j)[hit])
            out_j.append(np.maximum(i, j)[hit])
            out_c.append(code[hit])
        start = stop
    if not out_i:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    return np.concatenate(out_i), np.concatenate(out_j), np.concatenate(out_c)


def segment_pairs(x1, y1, x2, y2, u, v):
    """All non-adjacent segment pairs that meet, with their contact code.

    Inputs are int64 arrays (segment endpoints and endpoint vertex indices).
    Returns ``(i, j, code)`` with ``i < j`` sorted lexicographically; ``code``
    is one of CROSS, TOUCH, OVERLAP.
    """
    x1, y1, x2, y2, u, v = (np.ascontiguousarray(a, dtype=np.int64) for a in (x1, y1, x2, y2, u, v))
    order = np.argsort(np.minimum(x1, x2), kind="stable").astype(np.int64)
    if _accel.use_numba():
        dummy = np.zeros(0, dtype=np.int64)
        cnt = _sweep_pairs_numba(x1, y1, x2, y2, u, v, order, True, dummy, dummy, dummy)
        oi = np.empty(cnt, dtype=np.int64)
        oj = np.empty(cnt, dtype=np.int64)
        oc = np.empty(cnt, dtype=np.int64)
        _sweep_pairs_numba(x1, y1, x2, y2, u, v, order, False, oi, oj, oc)
    else:
        oi, oj, oc = _sweep_pairs_numpy(x1, y1, x2, y2, u, v, order)
    idx = np.lexsort((oj, oi))
    return oi[idx], oj[idx], oc[idx]


@njit
def _points_on_edges_numba(px_sorted, py_sorted, porder, x1, y1, x2, y2, u, v, lo, hi,
                           count_only, out_p, out_e):
    found = 0
    for e in range(x1.shape[0]):
        ymin = min(y1[e], y2[e])
        ymax = max(y1[e], y2[e])
        for k in range(lo[e], hi[e]):
            p = porder[k]
            if p == u[e] or p == v[e]:
                continue
            py = py_sorted[k]
            if py < ymin or py > ymax:
                continue
            if _orient(x1[e], y1[e], x2[e], y2[e], px_sorted[k], py) == 0:
                if not count_only:
                    out_p[found] = p
                    out_e[found] = e
                found += 1
    return found


def points_on_edges(px, py, x1, y1, x2, y2, u, v):
    """Pairs (vertex, edge) where the vertex lies on the closed, non-incident edge."""
    px, py, x1, y1, x2, y2, u, v = (np.ascontiguousarray(a, dtype=np.int64)
                                    for a in (px, py, x1, y1, x2, y2, u, v))
    porder = np.argsort(px, kind="stable").astype(np.int64)
    pxs = px[porder]
    pys = py[porder]
    lo = np.searchsorted(pxs, np.minimum(x1, x2), side="left").astype(np.int64)
    hi = np.searchsorted(pxs, np.maximum(x1, x2), side="right").astype(np.int64)
    if _accel.use_numba():
        dummy = np.zeros(0, dtype=np.int64)
        cnt = _points_on_edges_numba(pxs, pys, porder, x1, y1, x2, y2, u, v, lo, hi, True, dummy, dummy)
        op = np.empty(cnt, dtype=np.int64)
        oe = np.empty(cnt, dtype=np.int64)
        _points_on_edges_numba(pxs, pys, porder, x1, y1, x2, y2, u, v, lo, hi, False, op, oe)
    else:
        c = hi - lo
        total = int(c.sum())
        e = np.repeat(np.arange(x1.shape[0]), c)
        k = np.repeat(lo, c) + (np.arange(total) - np.repeat(np.cumsum(c) - c, c))
        p = porder[k]
        qx, qy = pxs[k], pys[k]
        keep = (p != u[e]) & (p != v[e])
        keep &= (qy >= np.minimum(y1[e], y2[e])) & (qy <= np.maximum(y1[e], y2[e]))
        cr = (x2[e] - x1[e]) * (qy - y1[e]) - (y2[e] - y1[e]) * (qx - x1[e])
        keep &= cr == 0
        op, oe = p[keep], e[keep]
    idx = np.lexsort((oe, op))
    return op[idx], oe[idx]


@njit
def _points_in_triangles_numba(pxs, pys, porder, T, ax, ay, bx, by, cx, cy, lo, hi,
                               count_only, out_t, out_p, out_s):
    found = 0
    for t in range(T.shape[0]):
        area = _orient(ax[t], ay[t], bx[t], by[t], cx[t], cy[t])
        if area == 0:
            continue
        ymin = min(ay[t], by[t], cy[t])
        ymax = max(ay[t], by[t], cy[t])
        for k in range(lo[t], hi[t]):
            qy = pys[k]
            if qy < ymin or qy > ymax:
                continue
            p = porder[k]
            if p == T[t, 0] or p == T[t, 1] or p == T[t, 2]:
                continue
            qx = pxs[k]
            o1 = _orient(ax[t], ay[t], bx[t], by[t], qx, qy) * area
            o2 = _orient(bx[t], by[t], cx[t], cy[t], qx, qy) * area
            o3 = _orient(cx[t], cy[t], ax[t], ay[t], qx, qy) * area
            if o1 < 0 or o2 < 0 or o3 < 0:
                continue
            if not count_only:
                out_t[found] = t
                out_p[found] = p
                out_s[found] = 1 if (o1 > 0 and o2 > 0 and o3 > 0) else 0
            found += 1
    return found


def points_in_triangles(X, Y, T):
    """Vertices inside non-degenerate triangles ``T`` (rows of vertex indices).

    Returns ``(t, p, strict)``; ``strict`` is 1 for the open interior and 0
    for the boundary.  Triangle corners themselves are skipped.
    """
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(Y, dtype=np.int64)
    T = np.ascontiguousarray(T, dtype=np.int64).reshape(-1, 3)
    ax, ay = X[T[:, 0]], Y[T[:, 0]]
    bx, by = X[T[:, 1]], Y[T[:, 1]]
    cx, cy = X[T[:, 2]], Y[T[:, 2]]
    porder = np.argsort(X, kind="stable").astype(np.int64)
    pxs, pys = X[porder], Y[porder]
    lo = np.searchsorted(pxs, np.minimum(np.minimum(ax, bx), cx), side="left").astype(np.int64)
    hi = np.searchsorted(pxs, np.maximum(np.maximum(ax, bx), cx), side="right").astype(np.int64)
    if _accel.use_numba():
        dummy = np.zeros(0, dtype=np.int64)
        args = (pxs, pys, porder, T, ax, ay, bx, by, cx, cy, lo, hi)
        cnt = _points_in_triangles_numba(*args, True, dummy, dummy, dummy)
        ot = np.empty(cnt, dtype=np.int64)
        op = np.empty(cnt, dtype=np.int64)
        os_ = np.empty(cnt, dtype=np.int64)
        _points_in_triangles_numba(*args, False, ot, op, os_)
        return ot, op, os_
    cnt = hi - lo
    total = int(cnt.sum())
    t = np.repeat(np.arange(T.shape[0]), cnt)
    k = np.repeat(lo, cnt) + (np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt))
    qx, qy = pxs[k], pys[k]
    keep = (qy >= np.minimum(np.minimum(ay, by), cy)[t]) & (qy <= np.maximum(np.maximum(ay, by), cy)[t])
    t, k, qx, qy = t[keep], k[keep], qx[keep], qy[keep]
    p = porder[k]
    keep = (p != T[t, 0]) & (p != T[t, 1]) & (p != T[t, 2])
    t, p, qx, qy = t[keep], p[keep], qx[keep], qy[keep]

    def orient(x1, y1, x2, y2):
        return np.sign((x2 - x1) * (qy - y1) - (y2 - y1) * (qx - x1))

    area = np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))[t]
    o1 = orient(ax[t], ay[t], bx[t], by[t]) * area
    o2 = orient(bx[t], by[t], cx[t], cy[t]) * area
    o3 = orient(cx[t], cy[t], ax[t], ay[t]) * area
    inside = (area != 0) & (o1 >= 0) & (o2 >= 0) & (o3 >= 0)
    strict = ((o1 > 0) & (o2 > 0) & (o3 > 0)).astype(np.int64)
    return t[inside], p[inside], strict[inside]
