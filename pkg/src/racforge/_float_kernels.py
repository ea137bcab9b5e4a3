"""Float energy, gradient and crossing kernels for the layout optimizer.

Energy over positions ``P`` (shape ``(n, 2)``)::

    E = w_c * sum_crossings cos^2(theta)
      + w_s * sum_edges (|e| - L)^2
      + w_r * sum_{i<j} max(0, r - |p_i - p_j|)^2

A crossing is a pair of vertex-disjoint edges whose endpoints lie strictly on
opposite sides of each other's supporting line.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit


@njit
def _energy_grad_numba(P, eu, ev, wc, ws, L, wr, r, want_grad):
    n = P.shape[0]
    m = eu.shape[0]
    G = np.zeros((n, 2))
    ec = 0.0
    es = 0.0
    er = 0.0
    for a in range(m):
        u1 = eu[a]
        v1 = ev[a]
        ax = P[u1, 0]
        ay = P[u1, 1]
        d1x = P[v1, 0] - ax
        d1y = P[v1, 1] - ay
        A = d1x * d1x + d1y * d1y
        if ws > 0.0:
            ln = np.sqrt(A)
            diff = ln - L
            es += diff * diff
            if want_grad and ln > 0.0:
                c = 2.0 * ws * diff / ln
                G[v1, 0] += c * d1x
                G[v1, 1] += c * d1y
                G[u1, 0] -= c * d1x
                G[u1, 1] -= c * d1y
        if wc <= 0.0:
            continue
        for b in range(a + 1, m):
            u2 = eu[b]
            v2 = ev[b]
            if u2 == u1 or u2 == v1 or v2 == u1 or v2 == v1:
                continue
            cx = P[u2, 0]
            cy = P[u2, 1]
            d2x = P[v2, 0] - cx
            d2y = P[v2, 1] - cy
            o1 = d1x * (cy - ay) - d1y * (cx - ax)
            o2 = d1x * (P[v2, 1] - ay) - d1y * (P[v2, 0] - ax)
            if o1 * o2 >= 0.0:
                continue
            o3 = d2x * (ay - cy) - d2y * (ax - cx)
            o4 = d2x * (P[v1, 1] - cy) - d2y * (P[v1, 0] - cx)
            if o3 * o4 >= 0.0:
                continue
            B = d2x * d2x + d2y * d2y
            D = d1x * d2x + d1y * d2y
            AB = A * B
            ec += D * D / AB
            if want_grad:
                k = 2.0 * wc * D / AB
                q = D / A
                g1x = k * (d2x - q * d1x)
                g1y = k * (d2y - q * d1y)
                q = D / B
                g2x = k * (d1x - q * d2x)
                g2y = k * (d1y - q * d2y)
                G[v1, 0] += g1x
                G[v1, 1] += g1y
                G[u1, 0] -= g1x
                G[u1, 1] -= g1y
                G[v2, 0] += g2x
                G[v2, 1] += g2y
                G[u2, 0] -= g2x
                G[u2, 1] -= g2y
    if wr > 0.0:
        for i in range(n):
            for j in range(i + 1, n):
                dx = P[i, 0] - P[j, 0]
                dy = P[i, 1] - P[j, 1]
                d = np.sqrt(dx * dx + dy * dy)
                if d < r:
                    gap = r - d
                    er += gap * gap
                    if want_grad and d > 0.0:
                        c = -2.0 * wr * gap / d
                        G[i, 0] += c * dx
                        G[i, 1] += c * dy
                        G[j, 0] -= c * dx
                        G[j, 1] -= c * dy
    return wc * ec + ws * es + wr * er, ec, G


@njit
def _crossings_numba(P, eu, ev, count_only, out_a, out_b, out_cos):
    m = eu.shape[0]
    found = 0
    for a in range(m):
        u1 = eu[a]
        v1 = ev[a]
        ax = P[u1, 0]
        ay = P[u1, 1]
        d1x = P[v1, 0] - ax
        d1y = P[v1, 1] - ay
        for b in range(a + 1, m):
            u2 = eu[b]
            v2 = ev[b]
            if u2 == u1 or u2 == v1 or v2 == u1 or v2 == v1:
                continue
            cx = P[u2, 0]
            cy = P[u2, 1]
            d2x = P[v2, 0] - cx
            d2y = P[v2, 1] - cy
            o1 = d1x * (cy - ay) - d1y * (cx - ax)
            o2 = d1x * (P[v2, 1] - ay) - d1y * (P[v2, 0] - ax)
            if o1 * o2 >= 0.0:
                continue
            o3 = d2x * (ay - cy) - d2y * (ax - cx)
            o4 = d2x * (P[v1, 1] - cy) - d2y * (P[v1, 0] - cx)
            if o3 * o4 >= 0.0:
                continue
            if not count_only:
                D = d1x * d2x + d1y * d2y
                out_a[found] = a
                out_b[found] = b
                out_cos[found] = abs(D) / np.sqrt((d1x * d1x + d1y * d1y) * (d2x * d2x + d2y * d2y))
            found += 1
    return found


def disjoint_pairs(eu, ev):
    """Index arrays (I, J), I < J, of vertex-disjoint edge pairs."""
    m = len(eu)
    I, J = np.triu_indices(m, k=1)
    keep = (eu[I] != eu[J]) & (eu[I] != ev[J]) & (ev[I] != eu[J]) & (ev[I] != ev[J])
    return I[keep].astype(np.int64), J[keep].astype(np.int64)


def _crossing_mask_np(P, eu, ev, I, J):
    a, b = P[eu[I]], P[ev[I]]
    c, d = P[eu[J]], P[ev[J]]
    d1 = b - a
    d2 = d - c
    o1 = d1[:, 0] * (c[:, 1] - a[:, 1]) - d1[:, 1] * (c[:, 0] - a[:, 0])
    o2 = d1[:, 0] * (d[:, 1] - a[:, 1]) - d1[:, 1] * (d[:, 0] - a[:, 0])
    o3 = d2[:, 0] * (a[:, 1] - c[:, 1]) - d2[:, 1] * (a[:, 0] - c[:, 0])
    o4 = d2[:, 0] * (b[:, 1] - c[:, 1]) - d2[:, 1] * (b[:, 0] - c[:, 0])
    return (o1 * o2 < 0) & (o3 * o4 < 0), d1, d2


def _energy_grad_numpy(P, eu, ev, wc, ws, L, wr, r, want_grad, pairs=None):
    n = P.shape[0]
    G = np.zeros((n, 2))
    d = P[ev] - P[eu]
    A = np.einsum("ij,ij->i", d, d)
    es = 0.0
    if ws > 0:
        ln = np.sqrt(A)
        diff = ln - L
        es = float(np.sum(diff * diff))
        if want_grad:
            c = np.where(ln > 0, 2.0 * ws * diff / np.where(ln > 0, ln, 1.0), 0.0)
            g = c[:, None] * d
            np.add.at(G, ev, g)
            np.add.at(G, eu, -g)
    ec = 0.0
    if wc > 0:
        I, J = pairs if pairs is not None else disjoint_pairs(eu, ev)
        mask, d1, d2 = _crossing_mask_np(P, eu, ev, I, J)
        I, J, d1, d2 = I[mask], J[mask], d1[mask], d2[mask]
        A1 = A[I]
        B1 = A[J]
        D = np.einsum("ij,ij->i", d1, d2)
        AB = A1 * B1
        ec = float(np.sum(D * D / AB))
        if want_grad and len(I):
            k = (2.0 * wc * D / AB)[:, None]
            g1 = k * (d2 - (D / A1)[:, None] * d1)
            g2 = k * (d1 - (D / B1)[:, None] * d2)
            np.add.at(G, ev[I], g1)
            np.add.at(G, eu[I], -g1)
            np.add.at(G, ev[J], g2)
            np.add.at(G, eu[J], -g2)
    er = 0.0
    if wr > 0:
        ii, jj = np.triu_indices(n, k=1)
        diff = P[ii] - P[jj]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        close = dist < r
        ii, jj, diff, dist = ii[close], jj[close], diff[close], dist[close]
        gap = r - dist
        er = float(np.sum(gap * gap))
        if want_grad and len(ii):
            c = np.where(dist > 0, -2.0 * wr * gap / np.where(dist > 0, dist, 1.0), 0.0)
            g = c[:, None] * diff
            np.add.at(G, ii, g)
            np.add.at(G, jj, -g)
    return wc * ec + ws * es + wr * er, ec, G


def energy_grad(P, eu, ev, wc, ws, L, wr, r, want_grad=True, pairs=None):
    """(total energy, raw crossing sum, gradient array) for positions ``P``."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    args = (float(wc), float(ws), float(L), float(wr), float(r), want_grad)
    if _accel.use_numba():
        return _energy_grad_numba(P, eu, ev, *args)
    return _energy_grad_numpy(P, eu, ev, *args, pairs)


def crossings(P, eu, ev, pairs=None):
    """(edge index a, edge index b, |cos theta|) for every proper float crossing."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    if _accel.use_numba():
        dummy_i = np.zeros(0, dtype=np.int64)
        dummy_f = np.zeros(0)
        cnt = _crossings_numba(P, eu, ev, True, dummy_i, dummy_i, dummy_f)
        oa = np.empty(cnt, dtype=np.int64)
        ob = np.empty(cnt, dtype=np.int64)
        oc = np.empty(cnt)
        _crossings_numba(P, eu, ev, False, oa, ob, oc)
        return oa, ob, oc
    I, J = pairs if pairs is not None else disjoint_pairs(eu, ev)
    mask, d1, d2 = _crossing_mask_np(P, eu, ev, I, J)
    d1, d2 = d1[mask], d2[mask]
    D = np.einsum("ij,ij->i", d1, d2)
    cos = np.abs(D) / np.sqrt(np.einsum("ij,ij->i", d1, d1) * np.einsum("ij,ij->i", d2, d2))
    return I[mask], J[mask], cos
