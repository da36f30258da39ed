"""Shortest-path queries on a metric graph: distances, geodesics, bounds.

Geodesics are shortest paths under the k-weights with deterministic
tie-breaking (lexicographic settle order, smaller-id predecessor on exact
ties), so repeated runs yield identical polylines.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import dijkstra_csr
from .curves import curve_from_graph_path
from .errors import InternalError
from .geometry import as_point


def shortest_tree(graph, sources, weight="k", targets=None, want_pred=True):
    """(dist, pred) arrays from one or more source node ids."""
    w = graph.w_k if weight == "k" else graph.w_d
    return dijkstra_csr(graph.indptr, graph.indices, w,
                        np.atleast_1d(sources), targets=targets,
                        want_pred=want_pred)


def extract_path(pred, target):
    """Node ids from the tree root to target (inclusive)."""
    out = [int(target)]
    u = int(pred[target])
    while u >= 0:
        out.append(u)
        u = int(pred[u])
    out.reverse()
    return np.asarray(out, dtype=np.int64)


def _pair_ids(graph, x, y):
    return graph.snap(x), graph.snap(y)


def inner_distance(graph, x, y) -> float:
    """Approximate inner (length-metric) distance between snapped points."""
    i, j = _pair_ids(graph, x, y)
    return inner_distance_ids(graph, i, j)


def inner_distance_ids(graph, i, j) -> float:
    if i == j:
        return 0.0
    dist, _ = shortest_tree(graph, i, weight="d", targets=[j], want_pred=False)
    if not np.isfinite(dist[j]):
        raise InternalError(f"nodes {i} and {j} are disconnected")
    return float(dist[j])


def qh_distance(graph, x, y) -> float:
    """Approximate quasihyperbolic distance between snapped points."""
    i, j = _pair_ids(graph, x, y)
    return qh_distance_ids(graph, i, j)


def qh_distance_ids(graph, i, j) -> float:
    if i == j:
        return 0.0
    dist, _ = shortest_tree(graph, i, weight="k", targets=[j], want_pred=False)
    if not np.isfinite(dist[j]):
        raise InternalError(f"nodes {i} and {j} are disconnected")
    return float(dist[j])


def qh_geodesic(graph, x, y):
    """Quasihyperbolic geodesic as a ParametrizedCurve.

    Its k_length equals qh_distance(x, y) exactly (same accumulation).
    """
    i, j = _pair_ids(graph, x, y)
    return qh_geodesic_ids(graph, i, j)


def qh_geodesic_ids(graph, i, j):
    dist, pred = shortest_tree(graph, i, weight="k", targets=[j])
    if not np.isfinite(dist[j]):
        raise InternalError(f"nodes {i} and {j} are disconnected")
    path = extract_path(pred, j)
    return curve_from_graph_path(graph, path, cum_k=dist[path])


@dataclass
class LowerBoundReport:
    """Estimates vs. the chained lower bounds for one node pair."""

    k_hat: float
    lambda_hat: float
    d_ambient: float
    delta_x: float
    delta_y: float
    bound_inner: float      # log(1 + lambda/min delta)
    bound_d: float          # log(1 + d/min delta)
    bound_ratio: float      # |log(delta_y/delta_x)|
    geodesic_k: float
    geodesic_d: float
    bound_geodesic: float   # log(1 + l_d(geodesic)/min delta)
    tau: float
    passed: bool


def check_lower_bounds(graph, x, y) -> LowerBoundReport:
    i, j = _pair_ids(graph, x, y)
    return check_lower_bounds_ids(graph, i, j)


def check_lower_bounds_ids(graph, i, j, trees=None) -> LowerBoundReport:
    """Evaluate the chained lower bounds with slack tau = 4h/min(delta).

    trees, when given, is (k_dist, k_pred, d_dist) from source i, letting
    callers batch many target nodes against one pair of searches.
    """
    dx = float(graph.node_delta[i])
    dy = float(graph.node_delta[j])
    min_delta = min(dx, dy)
    tau = 4.0 * graph.h / min_delta

    if i == j:
        return LowerBoundReport(0.0, 0.0, 0.0, dx, dy, 0.0, 0.0, 0.0,
                                0.0, 0.0, 0.0, tau, True)

    if trees is None:
        k_dist, k_pred = shortest_tree(graph, i, weight="k", targets=[j])
        d_dist, _ = shortest_tree(graph, i, weight="d", targets=[j],
                                  want_pred=False)
    else:
        k_dist, k_pred, d_dist = trees
    if not (np.isfinite(k_dist[j]) and np.isfinite(d_dist[j])):
        raise InternalError(f"nodes {i} and {j} are disconnected")

    k_hat = float(k_dist[j])
    lam = float(d_dist[j])
    if graph.domain.ambient == "inner":
        d_amb = lam
    else:
        d_amb = float(np.hypot(*(graph.node_xy[j] - graph.node_xy[i])))

    path = extract_path(k_pred, j)
    geo = curve_from_graph_path(graph, path, cum_k=k_dist[path])

    b1 = math.log1p(lam / min_delta)
    b2 = math.log1p(d_amb / min_delta)
    b3 = abs(math.log(dy / dx))
    bg = math.log1p(geo.d_length / min_delta)
    passed = (k_hat >= b1 - tau and k_hat >= b2 - tau and k_hat >= b3 - tau
              and geo.k_length >= bg - tau)
    return LowerBoundReport(k_hat, lam, d_amb, dx, dy, b1, b2, b3,
                            geo.k_length, geo.d_length, bg, tau, passed)


def lower_bound_suite(graph, pairs):
    """check_lower_bounds over (source, [targets]) batches, reusing trees."""
    reports = []
    for i, targets in pairs:
        k_dist, k_pred = shortest_tree(graph, i, weight="k", targets=targets)
        d_dist, _ = shortest_tree(graph, i, weight="d", targets=targets,
                                  want_pred=False)
        for j in targets:
            reports.append(check_lower_bounds_ids(
                graph, i, int(j), trees=(k_dist, k_pred, d_dist)))
    return reports


def euclid(p, q) -> float:
    p, q = as_point(p), as_point(q)
    return float(np.hypot(*(q - p)))
