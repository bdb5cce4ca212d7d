"""Compiled kernels that sweep all 2^m full subcomplexes of a nerve."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def components_all(m, adj):
    """Number of connected components of K_omega for every omega."""
    n = 1 << m
    out = np.zeros(n, np.int32)
    for mask in range(1, n):
        rest = mask
        c = 0
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                nxt = 0
                for v in range(m):
                    if (frontier >> v) & 1:
                        nxt |= adj[v]
                nxt &= rest & ~comp
                comp |= nxt
                frontier = nxt
            rest &= ~comp
            c += 1
        out[mask] = c
    return out


@njit(cache=True)
def face_counts_all(m, edge_masks, tri_masks):
    """Vertex, edge and triangle counts of K_omega for every omega."""
    n = 1 << m
    V = np.zeros(n, np.int32)
    E = np.zeros(n, np.int32)
    T = np.zeros(n, np.int32)
    for mask in range(n):
        V[mask] = _popcount(mask)
        e = 0
        for em in edge_masks:
            if mask & em == em:
                e += 1
        E[mask] = e
        t = 0
        for tm in tri_masks:
            if mask & tm == tm:
                t += 1
        T[mask] = t
    return V, E, T


@njit(cache=True)
def cycles_all(m, adj):
    """1 where K_omega's 1-skeleton is a single cycle on all of omega (at least 3 vertices)."""
    n = 1 << m
    out = np.zeros(n, np.int8)
    for mask in range(1, n):
        k = _popcount(mask)
        if k < 3:
            continue
        ok = True
        first = -1
        for v in range(m):
            if (mask >> v) & 1:
                if first < 0:
                    first = v
                if _popcount(adj[v] & mask) != 2:
                    ok = False
                    break
        if not ok:
            continue
        # connected?
        comp = np.int64(1) << first
        frontier = comp
        while frontier:
            nxt = 0
            for v in range(m):
                if (frontier >> v) & 1:
                    nxt |= adj[v]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        if comp == mask:
            out[mask] = 1
    return out


@njit(cache=True)
def _unit_rank(a, nr, nc):
    """Rank of the nr x nc block of ``a`` by unit-pivot elimination; -1 if stuck."""
    rk = 0
    row_used = np.zeros(nr, np.bool_)
    col_used = np.zeros(nc, np.bool_)
    while True:
        pi = -1
        pj = -1
        nonzero = False
        for i in range(nr):
            if row_used[i]:
                continue
            for j in range(nc):
                if col_used[j]:
                    continue
                x = a[i, j]
                if x != 0:
                    nonzero = True
                    if x == 1 or x == -1:
                        pi = i
                        pj = j
                        break
            if pi >= 0:
                break
        if pi < 0:
            if nonzero:
                return -1
            return rk
        x = a[pi, pj]
        for k in range(nr):
            if k != pi and not row_used[k] and a[k, pj] != 0:
                f = a[k, pj] * x
                for j in range(nc):
                    a[k, j] -= f * a[pi, j]
        row_used[pi] = True
        col_used[pj] = True
        rk += 1


@njit(cache=True)
def boundary_ranks_all(m, edges, tris, edge_id):
    """Ranks of the boundary maps of K_omega by integer elimination, for every omega.

    ``edges`` is (E, 2) with a < b, ``tris`` is (T, 3) sorted, ``edge_id`` an
    m x m lookup.  A rank of -1 flags a block the unit-pivot elimination could
    not finish; those need a Smith normal form.
    """
    n = 1 << m
    ne = edges.shape[0]
    nt = tris.shape[0]
    r1 = np.zeros(n, np.int32)
    r2 = np.zeros(n, np.int32)
    vpos = np.zeros(m, np.int64)
    epos = np.zeros(ne, np.int64)
    el = np.zeros(ne, np.int64)
    tl = np.zeros(nt, np.int64)
    d1 = np.zeros((ne, m), np.int64)
    d2 = np.zeros((nt, ne), np.int64)
    for mask in range(1, n):
        nv = 0
        for v in range(m):
            if (mask >> v) & 1:
                vpos[v] = nv
                nv += 1
        nel = 0
        for e in range(ne):
            a = edges[e, 0]
            b = edges[e, 1]
            if (mask >> a) & 1 and (mask >> b) & 1:
                epos[e] = nel
                el[nel] = e
                nel += 1
        ntl = 0
        for t in range(nt):
            if (mask >> tris[t, 0]) & 1 and (mask >> tris[t, 1]) & 1 and (mask >> tris[t, 2]) & 1:
                tl[ntl] = t
                ntl += 1
        for i in range(nel):
            for j in range(nv):
                d1[i, j] = 0
            e = el[i]
            d1[i, vpos[edges[e, 0]]] = -1
            d1[i, vpos[edges[e, 1]]] = 1
        r1[mask] = _unit_rank(d1, nel, nv)
        for i in range(ntl):
            for j in range(nel):
                d2[i, j] = 0
            t = tl[i]
            a = tris[t, 0]
            b = tris[t, 1]
            c = tris[t, 2]
            d2[i, epos[edge_id[b, c]]] = 1
            d2[i, epos[edge_id[a, c]]] = -1
            d2[i, epos[edge_id[a, b]]] = 1
        r2[mask] = _unit_rank(d2, ntl, nel)
    return r1, r2


def nerve_arrays(nerve):
    """Numpy views of a nerve complex for the kernels."""
    m = nerve.m
    adj = np.array(nerve.adj, dtype=np.int64)
    edges = np.array(nerve.edges, dtype=np.int64).reshape(-1, 2)
    tris = np.array(nerve.triangles, dtype=np.int64).reshape(-1, 3)
    edge_masks = np.array(nerve.edge_masks, dtype=np.int64)
    tri_masks = np.array(nerve.triangle_masks, dtype=np.int64)
    edge_id = np.full((m, m), -1, dtype=np.int64)
    for i, (a, b) in enumerate(nerve.edges):
        edge_id[a, b] = edge_id[b, a] = i
    return adj, edges, tris, edge_masks, tri_masks, edge_id
