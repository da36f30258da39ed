"""Polyline curves with dual parametrizations (arclength and qh-length).

A ParametrizedCurve keeps cumulative tables for both lengths, so it can be
evaluated at a quasihyperbolic parameter t (the point where the qh-length
of the initial piece equals t) by table interpolation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (BoundaryContactError, InvalidParameterError,
                     OutsideDomainError)
from .geometry import as_points, cumulative_lengths
from .quadrature import segment_qh_lengths


@dataclass
class ParametrizedCurve:
    vertices: np.ndarray       # (n, 2)
    cum_d: np.ndarray          # cumulative d-arclength, starts at 0
    cum_k: np.ndarray          # cumulative qh-length, starts at 0
    vertex_delta: np.ndarray   # boundary distance at each vertex

    @property
    def d_length(self) -> float:
        return float(self.cum_d[-1])

    @property
    def k_length(self) -> float:
        return float(self.cum_k[-1])

    @property
    def lipschitz_m(self) -> float:
        """Lipschitz constant of the qh parametrization: max delta on the curve."""
        return float(self.vertex_delta.max())

    def max_delta(self) -> float:
        return float(self.vertex_delta.max())

    def min_delta(self) -> float:
        return float(self.vertex_delta.min())

    def point_at_k(self, t):
        """Point g(t) whose initial piece has qh-length exactly t."""
        return _interp_table(self.vertices, self.cum_k, t, "k")

    def point_at_d(self, s):
        """Point at d-arclength s."""
        return _interp_table(self.vertices, self.cum_d, s, "d")


def _interp_table(vertices, table, t, label):
    total = float(table[-1])
    tol = 1e-12 * max(total, 1.0)
    if t < -tol or t > total + tol:
        raise InvalidParameterError(
            f"{label}-parameter {t} outside [0, {total}]")
    t = min(max(t, 0.0), total)
    i = int(np.searchsorted(table, t, side="right")) - 1
    i = min(max(i, 0), len(vertices) - 2) if len(vertices) > 1 else 0
    if len(vertices) == 1:
        return vertices[0].copy()
    lo, hi = table[i], table[i + 1]
    frac = 0.0 if hi == lo else (t - lo) / (hi - lo)
    return vertices[i] + frac * (vertices[i + 1] - vertices[i])


def d_length(vertices) -> float:
    """Sum of segment lengths; for polylines the partition supremum is exact."""
    v = as_points(vertices)
    if len(v) < 1:
        raise InvalidParameterError("polyline needs at least one vertex")
    if len(v) == 1:
        return 0.0
    return float(np.sum(np.hypot(np.diff(v[:, 0]), np.diff(v[:, 1]))))


def _validate_inside(domain, v):
    inside = domain.contains_batch(v)
    if inside.all():
        return
    delta = domain.delta_batch(v)
    bad = np.nonzero(~inside)[0][0]
    if delta[bad] <= domain.boundary_tol():
        raise BoundaryContactError(
            f"vertex {tuple(v[bad])} touches the boundary")
    raise OutsideDomainError(f"vertex {tuple(v[bad])} not in domain")


def qh_length(domain, vertices) -> float:
    """Quasihyperbolic length of a polyline: quadrature of 1/delta per segment."""
    v = as_points(vertices)
    if len(v) < 1:
        raise InvalidParameterError("polyline needs at least one vertex")
    _validate_inside(domain, v)
    if len(v) == 1:
        return 0.0
    seg = segment_qh_lengths(domain, v[:-1], v[1:])
    return float(np.sum(seg))


def parametrized_curve(domain, vertices) -> ParametrizedCurve:
    """Measure a polyline in both metrics and build its parametrization tables."""
    v = as_points(vertices)
    if len(v) < 1:
        raise InvalidParameterError("polyline needs at least one vertex")
    _validate_inside(domain, v)
    cum_d = cumulative_lengths(v)
    if len(v) == 1:
        cum_k = np.zeros(1)
    else:
        seg = segment_qh_lengths(domain, v[:-1], v[1:])
        cum_k = np.empty(len(v))
        cum_k[0] = 0.0
        np.cumsum(seg, out=cum_k[1:])
    return ParametrizedCurve(vertices=v, cum_d=cum_d, cum_k=cum_k,
                             vertex_delta=domain.delta_batch(v))


def qh_parametrize(curve: ParametrizedCurve, t: float):
    """g(t): the curve point at quasihyperbolic parameter t."""
    return curve.point_at_k(t)


def curve_from_graph_path(graph, path_ids, cum_k=None) -> ParametrizedCurve:
    """Curve along graph nodes; tables come from the edge weights themselves.

    When cum_k is given (tree distances along the path) it is used verbatim,
    which makes k_length bit-identical to the shortest-path distance.
    """
    ids = np.asarray(path_ids, dtype=np.int64)
    v = graph.node_xy[ids]
    n = len(ids)
    cd = np.zeros(n)
    ck = np.zeros(n) if cum_k is None else np.asarray(cum_k, dtype=float).copy()
    for i in range(n - 1):
        e = _edge_index(graph, ids[i], ids[i + 1])
        cd[i + 1] = cd[i] + graph.w_d[e]
        if cum_k is None:
            ck[i + 1] = ck[i] + graph.w_k[e]
    return ParametrizedCurve(vertices=v, cum_d=cd, cum_k=ck,
                             vertex_delta=graph.node_delta[ids])


def _edge_index(graph, u, v):
    lo, hi = graph.indptr[u], graph.indptr[u + 1]
    j = lo + int(np.searchsorted(graph.indices[lo:hi], v))
    if j >= hi or graph.indices[j] != v:
        raise InvalidParameterError(f"no edge {u} -> {v} in graph")
    return j
