"""Independent brute-force oracles for test comparisons.

Deliberately separate from the package: the grid is built by direct
enumeration, edge validity uses a plain straddle test, and shortest paths
run through scipy's compiled Dijkstra.  Agreement between this lane and the
package is a two-route check, not a self-comparison.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csg

OFFSETS_16 = [(1, 0), (0, 1), (1, 1), (-1, 1),
              (2, 1), (1, 2), (-1, 2), (-2, 1)]


def comb_teeth(J):
    return [0.5 ** j for j in range(1, J + 1)]


def comb_contains(J, x, y, tol=1e-12):
    if not (tol < x < 1 - tol and tol < y < 1 - tol):
        return False
    for t in comb_teeth(J):
        if abs(x - t) <= tol and y <= 0.5 + tol:
            return False
    return True


def _segment_hits_tooth(x0, y0, x1, y1, tx, tol=1e-12):
    if (x0 - tx) * (x1 - tx) >= 0:
        return False
    t = (tx - x0) / (x1 - x0)
    return y0 + t * (y1 - y0) <= 0.5 + tol


def comb_inner_distance_bruteforce(J, p, q, n=256):
    """Shortest-path inner distance on an independently built fine grid."""
    teeth = comb_teeth(J)
    axis = np.arange(1, n) / n
    gx, gy = np.meshgrid(axis, axis, indexing="xy")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    keep = np.ones(len(pts), dtype=bool)
    for t in teeth:
        keep &= ~((np.abs(pts[:, 0] - t) < 1e-12) & (pts[:, 1] <= 0.5 + 1e-12))
    pts = pts[keep]
    index = {(round(x * n), round(y * n)): i for i, (x, y) in enumerate(pts)}

    rows, cols, vals = [], [], []
    for i, (x, y) in enumerate(pts):
        ix, iy = round(x * n), round(y * n)
        for dx, dy in OFFSETS_16:
            j = index.get((ix + dx, iy + dy))
            if j is None:
                continue
            x1, y1 = pts[j]
            if any(_segment_hits_tooth(x, y, x1, y1, t) for t in teeth):
                continue
            w = np.hypot(x1 - x, y1 - y)
            rows.append(i)
            cols.append(j)
            vals.append(w)
    A = sp.csr_matrix((vals + vals, (rows + cols, cols + rows)),
                      shape=(len(pts), len(pts)))

    def nearest(pt):
        return int(np.argmin(np.hypot(pts[:, 0] - pt[0], pts[:, 1] - pt[1])))

    i, j = nearest(p), nearest(q)
    dist = csg.dijkstra(A, indices=[i], min_only=False)[0]
    return float(dist[j])


def disk_radial_qh(r):
    """Exact quasihyperbolic distance from the unit-disk center to radius r."""
    return -np.log(1.0 - r)
