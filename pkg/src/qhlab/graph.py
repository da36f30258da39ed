"""Grid discretization of a domain into a weighted metric graph.

Nodes are lattice points of spacing h strictly inside the domain with
boundary distance at least h/4; thinner-shell lattice points are kept in a
fringe list but excluded from the path graph.  Each undirected edge carries
two weights: its Euclidean length (d-weight) and the quadrature of the
reciprocal boundary distance along it (k-weight), so shortest paths realize
the inner and quasihyperbolic metrics respectively.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import (InvalidParameterError, OutsideDomainError,
                     ResolutionTooCoarseError)
from .geometry import as_point, edges_cross_segment, edges_cross_vertical_slit
from .quadrature import QUAD_RTOL, segment_qh_lengths

CORE_SHELL_FACTOR = 0.25     # core nodes need delta >= h/4
EDGE_INTERIOR_SAMPLES = 5    # interior containment probes per edge
SHELL_QUAD_RTOL = 1e-6       # contract tolerance for boundary-shell edges
BULK_EDGE_RATIO = 0.2        # length/delta below which the tight rtol applies

_HALF_OFFSETS_8 = ((1, 0), (0, 1), (1, 1), (-1, 1))
_HALF_OFFSETS_16 = _HALF_OFFSETS_8 + ((2, 1), (1, 2), (-1, 2), (-2, 1))


@dataclass
class MetricGraph:
    """Immutable discretization; all queries after construction are pure."""

    domain: object
    h: float
    connectivity: int
    node_xy: np.ndarray      # (n, 2)
    node_delta: np.ndarray   # (n,)
    node_ij: np.ndarray      # (n, 2) lattice indices, row-major order
    indptr: np.ndarray       # CSR over directed edges
    indices: np.ndarray
    w_d: np.ndarray
    w_k: np.ndarray
    fringe_xy: np.ndarray
    fringe_delta: np.ndarray
    _tree: Optional[cKDTree] = field(default=None, repr=False)

    @property
    def n_nodes(self):
        return len(self.node_xy)

    @property
    def n_edges(self):
        return len(self.indices) // 2

    def kdtree(self):
        if self._tree is None:
            self._tree = cKDTree(self.node_xy)
        return self._tree

    def snap(self, p) -> int:
        """Nearest core node to p; p must lie in the domain."""
        p = as_point(p)
        if not self.domain.contains(p):
            raise OutsideDomainError(f"point {tuple(p)} not in domain")
        return int(self.kdtree().query(p)[1])

    def snap_boundary_approach(self, p, anchor_pos, corridor, k=24):
        """Nearest core node on the corridor side of a boundary anchor.

        Rejects candidates that would cross a slit or sit behind the anchor;
        returns None when no candidate survives (level unreachable).
        """
        p = as_point(p)
        k = min(k, self.n_nodes)
        dists, ids = self.kdtree().query(p, k=k)
        ids = np.atleast_1d(ids)
        seg_a, seg_b = self.domain.crossing_segments()
        eps = self.domain.boundary_tol()
        anchor = None if anchor_pos is None else as_point(anchor_pos)
        cvec = None if corridor is None else as_point(corridor)
        for i in ids:
            node = self.node_xy[int(i)]
            if cvec is not None and anchor is not None:
                if float((node - anchor) @ cvec) <= 0.0:
                    continue
            if len(seg_a) and _crosses_any(p, node, seg_a, seg_b, eps):
                continue
            return int(i)
        return None

    def tau(self, i, j) -> float:
        """Discretization slack 4h / min(delta_i, delta_j) for a node pair."""
        return 4.0 * self.h / min(self.node_delta[i], self.node_delta[j])

    def stats(self):
        return {"nodes": int(self.n_nodes), "edges": int(self.n_edges),
                "fringe": int(len(self.fringe_xy)), "h": self.h,
                "connectivity": self.connectivity}


def _crosses_any(p, q, seg_a, seg_b, eps):
    P = np.repeat(as_point(p)[None, :], len(seg_a), axis=0)
    Q = np.repeat(as_point(q)[None, :], len(seg_a), axis=0)
    hits = False
    for s in range(len(seg_a)):
        if edges_cross_segment(P[s:s + 1], Q[s:s + 1], seg_a[s], seg_b[s], eps)[0]:
            hits = True
            break
    return hits


def build_graph(domain, h, connectivity=16) -> MetricGraph:
    """Discretize the domain at lattice spacing h.

    The lattice is anchored at the origin (coordinates are integer multiples
    of h), node order is row-major, and edge k-weights are refined composite
    Simpson quadratures of 1/delta.
    """
    if connectivity not in (8, 16):
        raise InvalidParameterError("connectivity must be 8 or 16")
    if h <= 0:
        raise InvalidParameterError("h must be positive")

    x0, x1, y0, y1 = domain.bounding_box()
    tol = domain.boundary_tol()
    ix_lo = int(math.ceil((x0 + tol) / h))
    ix_hi = int(math.floor((x1 - tol) / h))
    iy_lo = int(math.ceil((y0 + tol) / h))
    iy_hi = int(math.floor((y1 - tol) / h))
    if ix_hi < ix_lo or iy_hi < iy_lo:
        raise ResolutionTooCoarseError("no lattice points inside bounding box")

    ix = np.arange(ix_lo, ix_hi + 1, dtype=np.int64)
    iy = np.arange(iy_lo, iy_hi + 1, dtype=np.int64)
    # row-major: y slowest
    gy, gx = np.meshgrid(iy, ix, indexing="ij")
    gix = gx.ravel()
    giy = gy.ravel()
    pts = np.column_stack([gix * h, giy * h])

    inside = domain.contains_batch(pts)
    delta = np.where(inside, domain.delta_batch(pts), -1.0)
    core = inside & (delta >= CORE_SHELL_FACTOR * h)
    fringe = inside & ~core & (delta > 0)

    if not core.any():
        raise ResolutionTooCoarseError("domain too thin at this resolution")

    node_xy = pts[core]
    node_delta = delta[core]
    node_ij = np.column_stack([gix[core], giy[core]]).astype(np.int32)

    nx_span = ix_hi - ix_lo + 1
    keys = (giy[core] - iy_lo) * nx_span + (gix[core] - ix_lo)
    # keys are ascending by construction (row-major scan)

    offsets = _HALF_OFFSETS_16 if connectivity == 16 else _HALF_OFFSETS_8
    U, V = [], []
    for dx, dy in offsets:
        nbr_keys = keys + dy * nx_span + dx
        ox = gix[core] - ix_lo
        valid_span = (ox + dx >= 0) & (ox + dx < nx_span)
        j = np.searchsorted(keys, nbr_keys)
        j_clipped = np.minimum(j, len(keys) - 1)
        found = valid_span & (keys[j_clipped] == nbr_keys)
        u = np.nonzero(found)[0]
        v = j_clipped[found]
        U.append(u)
        V.append(v)
    U = np.concatenate(U).astype(np.int32)
    V = np.concatenate(V).astype(np.int32)

    # drop edges leaving the domain (slit crossings, reflex corners)
    if not domain.is_convex():
        keep = _edges_inside(domain, node_xy[U], node_xy[V])
        U, V = U[keep], V[keep]

    if len(U) == 0:
        raise ResolutionTooCoarseError("graph has no edges at this resolution")

    P, Q = node_xy[U], node_xy[V]
    w_d = np.hypot(Q[:, 0] - P[:, 0], Q[:, 1] - P[:, 1])
    # Bulk edges get a much tighter quadrature target than the 1e-6
    # contract so that grid-refinement monotonicity holds to ~1e-9 along
    # interior geodesics; shell edges stay at the contract tolerance.
    dmin_edge = np.minimum(node_delta[U], node_delta[V])
    edge_rtol = np.where(w_d <= BULK_EDGE_RATIO * dmin_edge,
                         QUAD_RTOL, SHELL_QUAD_RTOL)
    w_k = segment_qh_lengths(domain, P, Q, w_d, rtol=edge_rtol)
    # enforce the elementary bound l_k >= l_d / max(delta at endpoints)
    np.maximum(w_k, w_d / np.maximum(node_delta[U], node_delta[V]), out=w_k)

    n = len(node_xy)
    src = np.concatenate([U, V])
    dst = np.concatenate([V, U])
    wd2 = np.concatenate([w_d, w_d])
    wk2 = np.concatenate([w_k, w_k])
    order = np.lexsort((dst, src))
    src, dst, wd2, wk2 = src[order], dst[order], wd2[order], wk2[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

    return MetricGraph(domain=domain, h=float(h), connectivity=connectivity,
                       node_xy=node_xy, node_delta=node_delta, node_ij=node_ij,
                       indptr=indptr, indices=dst.astype(np.int32),
                       w_d=wd2, w_k=wk2,
                       fringe_xy=pts[fringe], fringe_delta=delta[fringe])


def _edges_inside(domain, P, Q):
    """Validity mask: no slit/boundary crossing, interior probes inside."""
    m = len(P)
    keep = np.ones(m, dtype=bool)
    eps = domain.boundary_tol()

    seg_a, seg_b = domain.crossing_segments()
    for a, b in zip(seg_a, seg_b):
        if abs(a[0] - b[0]) <= eps:  # vertical slit fast path
            y_top = max(a[1], b[1])
            hit = edges_cross_vertical_slit(P, Q, a[0], y_top, eps)
        else:
            hit = edges_cross_segment(P, Q, a, b, eps)
        keep &= ~hit

    ts = (np.arange(EDGE_INTERIOR_SAMPLES) + 1.0) / (EDGE_INTERIOR_SAMPLES + 1.0)
    alive = np.nonzero(keep)[0]
    chunk = max(1, 2_000_000 // EDGE_INTERIOR_SAMPLES)
    for lo in range(0, len(alive), chunk):
        sel = alive[lo:lo + chunk]
        p, q = P[sel], Q[sel]
        pts = p[:, None, :] + ts[None, :, None] * (q - p)[:, None, :]
        ok = domain.contains_batch(pts.reshape(-1, 2)).reshape(len(sel), -1).all(axis=1)
        keep[sel[~ok]] = False
    return keep


