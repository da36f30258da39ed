# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled shortest-path lane: binary-heap Dijkstra over CSR arrays.

Twin of ``qhlab._pypaths``; both lanes must return bit-identical results
(same heap order, relaxation rule, and float accumulation order).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef inline bint _heap_less(double da, cnp.int32_t na, double db, cnp.int32_t nb) noexcept nogil:
    return da < db or (da == db and na < nb)


def dijkstra_csr(indptr, indices, weights, sources, targets=None, bint want_pred=True):
    """Multi-source Dijkstra; stops early once all targets are settled.

    Returns (dist, pred) float64/int32 arrays; pred is -1 at sources and at
    unreached nodes.
    """
    cdef cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int32_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int32)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = ip.shape[0] - 1

    dist_arr = np.full(n, np.inf)
    pred_arr = np.full(n, -1, dtype=np.int32)
    cdef double[::1] dist = dist_arr
    cdef cnp.int32_t[::1] pred = pred_arr
    cdef cnp.uint8_t[::1] settled = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] is_target
    cdef long remaining = -1

    src = np.sort(np.atleast_1d(np.asarray(sources, dtype=np.int64)))
    if targets is not None:
        tmask = np.zeros(n, dtype=np.uint8)
        tmask[np.atleast_1d(np.asarray(targets, dtype=np.int64))] = 1
        is_target = tmask
        remaining = int(tmask.sum())
    else:
        is_target = np.zeros(0, dtype=np.uint8)

    # binary heap, grown by doubling
    cdef Py_ssize_t cap = 4 * n + 16
    hd_arr = np.empty(cap, dtype=np.float64)
    hn_arr = np.empty(cap, dtype=np.int32)
    cdef double[::1] hd = hd_arr
    cdef cnp.int32_t[::1] hn = hn_arr
    cdef Py_ssize_t size = 0

    cdef Py_ssize_t i, child, parent
    cdef double du, nd
    cdef cnp.int32_t u, v
    cdef cnp.int64_t e

    for i in range(src.shape[0]):
        u = <cnp.int32_t> src[i]
        dist[u] = 0.0
        # push (0.0, u)
        child = size
        size += 1
        hd[child] = 0.0
        hn[child] = u
        while child > 0:
            parent = (child - 1) >> 1
            if _heap_less(hd[child], hn[child], hd[parent], hn[parent]):
                hd[child], hd[parent] = hd[parent], hd[child]
                hn[child], hn[parent] = hn[parent], hn[child]
                child = parent
            else:
                break

    while size > 0:
        du = hd[0]
        u = hn[0]
        # pop
        size -= 1
        hd[0] = hd[size]
        hn[0] = hn[size]
        parent = 0
        while True:
            child = 2 * parent + 1
            if child >= size:
                break
            if child + 1 < size and _heap_less(hd[child + 1], hn[child + 1], hd[child], hn[child]):
                child += 1
            if _heap_less(hd[child], hn[child], hd[parent], hn[parent]):
                hd[child], hd[parent] = hd[parent], hd[child]
                hn[child], hn[parent] = hn[parent], hn[child]
                parent = child
            else:
                break

        if settled[u]:
            continue
        settled[u] = 1
        if remaining >= 0 and is_target[u]:
            remaining -= 1
            if remaining == 0:
                break

        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            if settled[v]:
                continue
            nd = dist[u] + w[e]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                if size >= cap:
                    cap = 2 * cap
                    hd_arr = np.resize(hd_arr, cap)
                    hn_arr = np.resize(hn_arr, cap)
                    hd = hd_arr
                    hn = hn_arr
                child = size
                size += 1
                hd[child] = nd
                hn[child] = v
                while child > 0:
                    parent = (child - 1) >> 1
                    if _heap_less(hd[child], hn[child], hd[parent], hn[parent]):
                        hd[child], hd[parent] = hd[parent], hd[child]
                        hn[child], hn[parent] = hn[parent], hn[child]
                        child = parent
                    else:
                        break
            elif nd == dist[v] and want_pred and u < pred[v]:
                pred[v] = u

    return dist_arr, pred_arr
