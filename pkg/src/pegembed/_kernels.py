"""Hot loops, in a numba flavour and a numpy/scipy flavour.

The public names at the bottom of the module are bound to one flavour
according to :mod:`pegembed._accel`; both flavours stay importable so they
can be cross-checked and benchmarked against each other.

Routing convention: ``weight[v]`` is the cost of entering qubit ``v``
(``inf`` means forbidden).  For a chain ``X`` the *gap distance* of ``q`` is
the total weight of the qubits strictly between ``X`` and ``q`` on a
cheapest path, so a qubit adjacent to ``X`` has gap distance 0.
"""
from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ._accel import USE_NUMBA, njit

# routing -------------------------------------------------------------------


@njit(cache=True)
def _dijkstra_nb(indptr, indices, weight, sources):
    """Multi-source Dijkstra on a lazy binary heap (stale entries skipped).

    The heap is inlined over two flat arrays; it is about twice as fast as
    an indexed heap with decrease-key on these graphs.
    """
    n = len(indptr) - 1
    cap = len(indices) + len(sources) + 1
    dist = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    hk = np.empty(cap)
    hv = np.empty(cap, dtype=np.int64)
    size = 0
    for s in sources:
        if dist[s] == 0.0:
            continue
        dist[s] = 0.0
        # all keys are 0 here, so append keeps the heap property
        hk[size] = 0.0
        hv[size] = s
        size += 1
    while size > 0:
        du = hk[0]
        u = hv[0]
        size -= 1
        if size > 0:
            lk = hk[size]
            lv = hv[size]
            i = 0
            while True:
                c = 2 * i + 1
                if c >= size:
                    break
                if c + 1 < size and hk[c + 1] < hk[c]:
                    c += 1
                if hk[c] >= lk:
                    break
                hk[i] = hk[c]
                hv[i] = hv[c]
                i = c
            hk[i] = lk
            hv[i] = lv
        if done[u]:
            continue
        done[u] = True
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            nd = du + weight[v]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                i = size
                size += 1
                while i > 0:
                    p = (i - 1) >> 1
                    if hk[p] <= nd:
                        break
                    hk[i] = hk[p]
                    hv[i] = hv[p]
                    i = p
                hk[i] = nd
                hv[i] = v
    return dist, parent


@njit(cache=True)
def route_node_numba(indptr, indices, weight, nbr_ptr, nbr_nodes):
    """Place one logical node given the chains of its placed neighbours.

    Returns the new chain (root first), or an empty array when no qubit
    reaches every neighbour chain.
    """
    n = len(indptr) - 1
    k = len(nbr_ptr) - 1
    cost = weight.copy()
    parents = np.empty((k, n), dtype=np.int64)
    is_src = np.zeros((k, n), dtype=np.bool_)
    for c in range(k):
        src = nbr_nodes[nbr_ptr[c]:nbr_ptr[c + 1]]
        dist, parent = _dijkstra_nb(indptr, indices, weight, src)
        parents[c] = parent
        for s in src:
            is_src[c, s] = True
        for q in range(n):
            if not is_src[c, q]:
                cost[q] += dist[q]
    root = -1
    best = np.inf
    for q in range(n):
        if cost[q] < best:
            best = cost[q]
            root = q
    if root < 0:
        return np.empty(0, dtype=np.int64)
    in_chain = np.zeros(n, dtype=np.bool_)
    in_chain[root] = True
    out = [root]
    for c in range(k):
        if is_src[c, root]:
            continue
        v = parents[c, root]
        while not is_src[c, v]:
            if not in_chain[v]:
                in_chain[v] = True
                out.append(v)
            v = parents[c, v]
    return np.array(out, dtype=np.int64)


def route_node_numpy(indptr, indices, weight, nbr_ptr, nbr_nodes):
    """scipy.csgraph counterpart of :func:`route_node_numba`."""
    n = len(indptr) - 1
    k = len(nbr_ptr) - 1
    data = weight[indices]
    finite = np.isfinite(data)
    if finite.all():
        W = sparse.csr_matrix((data, indices, indptr), shape=(n, n))
    else:
        rows = np.repeat(np.arange(n), np.diff(indptr))
        W = sparse.csr_matrix((data[finite], (rows[finite], indices[finite])), shape=(n, n))
    cost = weight.astype(float).copy()
    preds, srcmasks = [], []
    for c in range(k):
        src = nbr_nodes[nbr_ptr[c]:nbr_ptr[c + 1]]
        dist, pred = csgraph.dijkstra(W, directed=True, indices=src, min_only=True,
                                      return_predecessors=True)[:2]
        mask = np.zeros(n, dtype=bool)
        mask[src] = True
        dist[mask] = 0.0
        cost += dist
        preds.append(pred)
        srcmasks.append(mask)
    if not np.isfinite(cost).any():
        return np.empty(0, dtype=np.int64)
    root = int(np.argmin(cost))
    out = [root]
    seen = {root}
    for pred, mask in zip(preds, srcmasks):
        if mask[root]:
            continue
        v = int(pred[root])
        while not mask[v]:
            if v not in seen:
                seen.add(v)
                out.append(v)
            v = int(pred[v])
    return np.array(out, dtype=np.int64)


# exhaustive Ising enumeration ---------------------------------------------


@njit(cache=True)
def ground_states_numba(h, ja, jb, jv, tol):
    n = len(h)
    best = np.inf
    cand_idx = [np.int64(0)]
    cand_e = [0.0]
    cand_idx.pop()
    cand_e.pop()
    s = np.empty(n)
    for idx in range(1 << n):
        for i in range(n):
            s[i] = 1.0 if (idx >> i) & 1 else -1.0
        e = 0.0
        for i in range(n):
            e += h[i] * s[i]
        for t in range(len(jv)):
            e += jv[t] * s[ja[t]] * s[jb[t]]
        if e < best - tol:
            best = e
            cand_idx.clear()
            cand_e.clear()
        if e <= best + tol:
            if e < best:
                best = e
            cand_idx.append(idx)
            cand_e.append(e)
    keep = [cand_idx[t] for t in range(len(cand_idx)) if cand_e[t] <= best + tol]
    return best, np.array(keep, dtype=np.int64)


def ground_states_numpy(h, ja, jb, jv, tol, chunk_bits=16):
    n = len(h)
    total = 1 << n
    step = min(total, 1 << chunk_bits)
    shifts = np.arange(n, dtype=np.int64)
    best = np.inf
    idx_parts, e_parts = [], []
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        s = ((idx[:, None] >> shifts) & 1) * 2.0 - 1.0
        e = s @ h
        if len(jv):
            e += (s[:, ja] * s[:, jb]) @ jv
        lo = e.min()
        if lo < best:
            best = lo
        sel = e <= best + tol
        idx_parts.append(idx[sel])
        e_parts.append(e[sel])
    idx = np.concatenate(idx_parts)
    e = np.concatenate(e_parts)
    return float(best), idx[e <= best + tol]


if USE_NUMBA:
    route_node = route_node_numba
    ground_states = ground_states_numba
else:
    route_node = route_node_numpy
    ground_states = ground_states_numpy
