"""Pure-Python shortest-path lane (heapq Dijkstra over CSR arrays).

This is the fallback twin of the compiled kernel in ``_fastpaths``.  The two
lanes must produce bit-identical output: same settle order (lexicographic
(distance, node) heap), same relaxation rule, same float accumulation order,
and the same smaller-id predecessor rule on exact distance ties.
"""

import heapq

import numpy as np

BACKEND = "python"


def dijkstra_csr(indptr, indices, weights, sources, targets=None, want_pred=True):
    """Multi-source Dijkstra; stops early once all targets are settled.

    Returns (dist, pred) float64/int32 arrays; pred is -1 at sources and at
    unreached nodes.
    """
    n = len(indptr) - 1
    dist = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int32)
    settled = np.zeros(n, dtype=bool)

    heap = []
    for s in sorted(int(x) for x in np.atleast_1d(sources)):
        dist[s] = 0.0
        heapq.heappush(heap, (0.0, s))

    remaining = -1
    is_target = None
    if targets is not None:
        t = np.atleast_1d(targets).astype(np.int64)
        is_target = np.zeros(n, dtype=bool)
        is_target[t] = True
        remaining = int(is_target.sum())

    while heap:
        du, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        if remaining >= 0 and is_target[u]:
            remaining -= 1
            if remaining == 0:
                break
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if settled[v]:
                continue
            nd = dist[u] + weights[e]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and want_pred and u < pred[v]:
                pred[v] = u
    return dist, pred
