"""Visibility testing for boundary-point pairs, and a falsifier.

The compact set in the visibility definition is operationalized as a
boundary-distance threshold: a geodesic family 'escapes every compact set'
exactly when the max of delta along its members tends to zero, so the
tester tracks that per-level maximum while the endpoint sequences descend
a dyadic schedule toward the two boundary points.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curves import curve_from_graph_path
from .domains import BoundaryPoint, same_boundary_point
from .errors import InvalidPairError
from .hyperbolicity import schedule_levels, snap_schedule
from .paths import extract_path, shortest_tree

VERDICT_VISIBLE = "visible"
VERDICT_FALSIFIED = "falsified"
VERDICT_INCONCLUSIVE = "inconclusive"

DRIFT_LIMIT = 0.10        # stabilization: per-level drift over last 3 levels
FALSIFY_DROP = 0.25       # falsification: >= 25% decay per level, last 3 levels
EPS_VIS_FACTOR = 4.0      # default visibility floor: 4h
MIN_LEVELS = 4


@dataclass
class VisibilityReport:
    p: BoundaryPoint
    q: BoundaryPoint
    levels: np.ndarray
    max_delta_per_level: np.ndarray
    k_per_level: np.ndarray
    epsilon_hat: float
    eps_vis: float
    verdict: str
    worst_geodesic: Optional[object] = None
    pair_index: int = -1


def classify_levels(max_deltas, eps_vis, requested_levels) -> str:
    """Verdict from the per-level max-delta series."""
    v = np.asarray(max_deltas, dtype=float)
    if len(v) < MIN_LEVELS:
        return VERDICT_INCONCLUSIVE
    last = v[-3:]
    if np.all(last[1:] <= (1.0 - FALSIFY_DROP) * last[:-1]):
        return VERDICT_FALSIFIED
    with np.errstate(divide="ignore", invalid="ignore"):
        drift = np.abs(np.diff(last)) / last[:-1]
    if v.min() >= eps_vis and np.all(drift < DRIFT_LIMIT):
        return VERDICT_VISIBLE
    return VERDICT_INCONCLUSIVE


def _jitters(rng, n, h):
    if rng is None:
        return np.zeros(n)
    return rng.uniform(-h, h, size=n)


def test_pair_visibility(graph, p: BoundaryPoint, q: BoundaryPoint,
                         n_levels=6, delta0=None, eps_vis=None,
                         rng=None, pair_index=-1) -> VisibilityReport:
    """Track max delta along geodesics joining sequences toward p and q.

    Sequences descend delta-levels delta0 * 2^-n along each point's
    corridor, with tangential jitter of up to one cell to avoid grid
    alignment; unreachable levels truncate the schedule.
    """
    tol = graph.domain.boundary_tol() * 10 + 1e-9 * graph.domain.diameter()
    if same_boundary_point(p, q, tol):
        raise InvalidPairError("boundary points coincide (corridor-aware)")
    if delta0 is None:
        delta0 = 0.5 * float(graph.node_delta.max())
    if eps_vis is None:
        eps_vis = EPS_VIS_FACTOR * graph.h
    levels = schedule_levels(delta0, n_levels)
    lv_p, ids_p = snap_schedule(graph, p, levels, _jitters(rng, n_levels, graph.h))
    lv_q, ids_q = snap_schedule(graph, q, levels, _jitters(rng, n_levels, graph.h))
    n = min(len(ids_p), len(ids_q))

    max_deltas, ks, curves = [], [], []
    for m in range(n):
        i, j = int(ids_p[m]), int(ids_q[m])
        dist, pred = shortest_tree(graph, i, weight="k", targets=[j])
        path = extract_path(pred, j)
        curve = curve_from_graph_path(graph, path, cum_k=dist[path])
        max_deltas.append(curve.max_delta())
        ks.append(float(dist[j]))
        curves.append(curve)

    max_deltas = np.array(max_deltas)
    eps_hat = float(max_deltas.min()) if n else np.inf
    verdict = classify_levels(max_deltas, eps_vis, n_levels)
    worst = curves[int(np.argmin(max_deltas))] if n else None
    return VisibilityReport(p=p, q=q, levels=levels[:n],
                            max_delta_per_level=max_deltas,
                            k_per_level=np.array(ks), epsilon_hat=eps_hat,
                            eps_vis=eps_vis, verdict=verdict,
                            worst_geodesic=worst, pair_index=pair_index)


def falsify_visibility(graph, candidate_pairs, n_levels=6, rng_seed=0,
                       delta0=None):
    """Search boundary pairs for escaping geodesic families.

    Pairs are drawn from an arclength/corridor-stratified boundary sample;
    reports come back sorted by epsilon-hat ascending, so the head of the
    list is the best falsification candidate.
    """
    if candidate_pairs < 1:
        raise InvalidPairError("need at least one candidate pair")
    rng = np.random.default_rng(rng_seed)
    pts = graph.domain.boundary_sample(max(8, 2 * candidate_pairs))
    tol = graph.domain.boundary_tol() * 10 + 1e-9 * graph.domain.diameter()
    reports = []
    for idx in range(candidate_pairs):
        for _ in range(64):
            a, b = rng.choice(len(pts), size=2, replace=False)
            if not same_boundary_point(pts[a], pts[b], tol):
                break
        sub = np.random.default_rng((rng_seed, idx))
        reports.append(test_pair_visibility(
            graph, pts[a], pts[b], n_levels=n_levels, delta0=delta0,
            rng=sub, pair_index=idx))
    reports.sort(key=lambda r: (r.epsilon_hat, r.pair_index))
    return reports


def observation_divergence_check(graph, p, q, n_levels=6, delta0=None) -> bool:
    """Desk-scale divergence: endpoint k-distance strictly increases with
    the level and at least doubles from the first to the last level."""
    series = divergence_series(graph, p, q, n_levels=n_levels, delta0=delta0)
    if len(series) < 2:
        return False
    increasing = bool(np.all(np.diff(series) > 0.0))
    return increasing and series[-1] >= 2.0 * series[0]


def divergence_series(graph, p, q, n_levels=6, delta0=None):
    """k-hat between the level-n approach points of p and q."""
    tol = graph.domain.boundary_tol() * 10 + 1e-9 * graph.domain.diameter()
    if same_boundary_point(p, q, tol):
        raise InvalidPairError("boundary points coincide (corridor-aware)")
    if delta0 is None:
        delta0 = 0.5 * float(graph.node_delta.max())
    levels = schedule_levels(delta0, n_levels)
    _, ids_p = snap_schedule(graph, p, levels)
    _, ids_q = snap_schedule(graph, q, levels)
    n = min(len(ids_p), len(ids_q))
    out = []
    for m in range(n):
        i, j = int(ids_p[m]), int(ids_q[m])
        dist, _ = shortest_tree(graph, i, weight="k", targets=[j],
                                want_pred=False)
        out.append(float(dist[j]))
    return np.array(out)
