"""Thin-triangle hyperbolicity estimation and approximate geodesic rays.

Triangles live in the quasihyperbolic metric: the thinness defect of a side
is its largest k-distance to the union of the other two sides (vertex-set
distance, which under-reads by at most one edge weight).  Rays are nested
geodesic families over a dyadic boundary-distance schedule; their Gromov
objects (equivalence, landing) are rendered at desk scale with explicit
error terms.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curves import curve_from_graph_path
from .domains import BoundaryPoint
from .errors import (InvalidParameterError, NoLandingDetectedError,
                     ResolutionTooCoarseError)
from .paths import extract_path, qh_distance_ids, shortest_tree

SNAP_LEVEL_LOW = 0.5    # accepted snapped delta within [lvl/2, 2*lvl]
SNAP_LEVEL_HIGH = 2.0
MIN_LEVEL_FACTOR = 2.0  # schedule stops once delta_n < 2h (fringe reached)


def schedule_levels(delta0, n_levels):
    return delta0 * 2.0 ** (-np.arange(n_levels, dtype=float))


def snap_approach_point(graph, target: BoundaryPoint, level, jitter=0.0):
    """Node approximating 'level' boundary distance along the corridor.

    Returns None when the level is unreachable at this resolution (no node
    on the corridor side with delta within a factor 2 of the level).
    """
    pos = target.pos()
    cor = target.corridor_vec()
    if cor is None:
        raise InvalidParameterError("boundary target needs an approach corridor")
    p = pos + cor * level
    if jitter != 0.0:
        p = p + np.array([-cor[1], cor[0]]) * jitter
    i = graph.snap_boundary_approach(p, pos, cor)
    if i is None:
        return None
    d = graph.node_delta[i]
    if not (SNAP_LEVEL_LOW * level <= d <= SNAP_LEVEL_HIGH * level):
        return None
    return i


def snap_schedule(graph, target, levels, jitters=None):
    """Snap each level in turn; truncate at the first unreachable level."""
    ids, achieved = [], []
    for n, lvl in enumerate(levels):
        if lvl < MIN_LEVEL_FACTOR * graph.h:
            break
        j = 0.0 if jitters is None else float(jitters[n])
        i = snap_approach_point(graph, target, lvl, jitter=j)
        if i is None:
            break
        ids.append(i)
        achieved.append(lvl)
    return np.array(achieved), np.array(ids, dtype=np.int64)


@dataclass
class RayApprox:
    """Nested geodesics from a base toward a boundary target."""

    graph: object
    base_id: int
    target: BoundaryPoint
    levels: np.ndarray
    endpoint_ids: np.ndarray
    segments: list
    landing_raw: np.ndarray
    landing_extrapolated: np.ndarray
    landing_estimate: Optional[BoundaryPoint]
    landed: bool

    def k_lengths(self):
        return np.array([s.k_length for s in self.segments])

    def endpoint_positions(self):
        return self.graph.node_xy[self.endpoint_ids]


def build_ray(graph, base, target: BoundaryPoint, n_levels,
              delta0=None, tree=None) -> RayApprox:
    """Approximate geodesic ray: one geodesic per dyadic delta level.

    delta0 defaults to the base's own boundary distance, so segment
    k-lengths grow like n*log(2) toward the target.
    """
    if n_levels < 3:
        raise InvalidParameterError("need at least 3 levels")
    base_id = base if isinstance(base, (int, np.integer)) else graph.snap(base)
    if delta0 is None:
        delta0 = float(graph.node_delta[base_id])
    levels, ids = snap_schedule(graph, target, schedule_levels(delta0, n_levels))
    if len(ids) < 3:
        raise ResolutionTooCoarseError(
            f"only {len(ids)} schedule levels reachable at h={graph.h}")
    if tree is None:
        tree = shortest_tree(graph, base_id, weight="k", targets=ids)
    dist, pred = tree
    segments = []
    for i in ids:
        path = extract_path(pred, i)
        segments.append(curve_from_graph_path(graph, path, cum_k=dist[path]))

    pts = graph.node_xy[ids]
    landed = _cauchy_check(pts, graph.h)
    landing_raw = pts[-1].copy()
    extrap = pts[-1] + (pts[-1] - pts[-2]) if len(pts) >= 2 else pts[-1]
    est = None
    if landed:
        # projecting the deepest endpoint cancels its radial shortfall; the
        # extrapolated point is recorded but carries amplified snap jitter
        proj = graph.domain.project_to_boundary(landing_raw)
        est = BoundaryPoint(tuple(proj), target.corridor)
    return RayApprox(graph=graph, base_id=int(base_id), target=target,
                     levels=levels, endpoint_ids=ids, segments=segments,
                     landing_raw=landing_raw, landing_extrapolated=extrap,
                     landing_estimate=est, landed=landed)


def _cauchy_check(pts, h):
    """Successive endpoint gaps must keep (roughly) halving, modulo grid noise."""
    if len(pts) < 3:
        return False
    gaps = np.hypot(*(np.diff(pts, axis=0).T))
    for i in range(max(0, len(gaps) - 3), len(gaps) - 1):
        if gaps[i + 1] > max(0.75 * gaps[i], 2.0 * h):
            return False
    return True


def landing_point(ray: RayApprox) -> BoundaryPoint:
    """Boundary landing estimate of the ray (extrapolated, then projected)."""
    if not ray.landed or ray.landing_estimate is None:
        raise NoLandingDetectedError(
            "ray endpoints not Cauchy at this resolution")
    return ray.landing_estimate


def rays_equivalent(r1: RayApprox, r2: RayApprox, bound) -> bool:
    """Level-wise endpoint k-distances all within the bound.

    The paper-level notion is finiteness of the sup distance; at desk scale
    the recommended bound is 4*delta_hat + 2.  A log(1 + d/delta) lower
    bound prunes clearly-divergent levels without running a search.
    """
    if r1.base_id != r2.base_id:
        raise InvalidParameterError("rays must share a base point")
    if len(r1.levels) != len(r2.levels):
        raise InvalidParameterError("rays must share the schedule length")
    g = r1.graph
    for i, j in zip(r1.endpoint_ids, r2.endpoint_ids):
        i, j = int(i), int(j)
        if i == j:
            continue
        d = float(np.hypot(*(g.node_xy[j] - g.node_xy[i])))
        lb = math.log1p(d / min(g.node_delta[i], g.node_delta[j]))
        if lb > bound:
            return False
        if qh_distance_ids(g, i, j) > bound:
            return False
    return True


def recommended_equivalence_bound(delta_hat: float) -> float:
    return 4.0 * delta_hat + 2.0


def thin_triangle_delta(graph, x, y, z, trees=None) -> float:
    """Thinness defect of the geodesic triangle on snapped corners.

    Sides are geodesics x-y, x-z (one tree from x) and y-z (tree from y);
    the defect of a side is the largest k-distance from its vertices to the
    union of the other two sides, computed by a multi-source search that
    stops once the side is settled.
    """
    ids = [v if isinstance(v, (int, np.integer)) else graph.snap(v)
           for v in (x, y, z)]
    sides = triangle_sides(graph, ids, trees=trees)
    return max(_side_defect(graph, sides[s], np.concatenate(
        [sides[t] for t in range(3) if t != s])) for s in range(3))


def triangle_sides(graph, ids, trees=None):
    """Vertex-id arrays of the three geodesic sides [xy, xz, yz]."""
    a, b, c = (int(v) for v in ids)
    if trees is None:
        dist_a, pred_a = shortest_tree(graph, a, weight="k", targets=[b, c])
        dist_b, pred_b = shortest_tree(graph, b, weight="k", targets=[c])
    else:
        (dist_a, pred_a), (dist_b, pred_b) = trees
    return [extract_path(pred_a, b), extract_path(pred_a, c),
            extract_path(pred_b, c)]


def _side_defect(graph, side, others):
    dist, _ = shortest_tree(graph, np.unique(others), weight="k",
                            targets=side, want_pred=False)
    return float(dist[side].max())


@dataclass
class HyperbolicityReport:
    delta_hat: float
    sample_count: int
    resolution: float
    worst: dict = field(default_factory=dict)


def sample_delta_stratified(domain, rng, n, delta_lo=None, delta_hi=None,
                            max_tries=2000):
    """Continuous in-domain points with log-uniform boundary distances.

    Resolution-independent by construction, so the same seed yields the
    same triangle corners on grids of different spacing.
    """
    x0, x1, y0, y1 = domain.bounding_box()
    diam = domain.diameter()
    if delta_lo is None:
        delta_lo = 0.04 * diam
    if delta_hi is None:
        delta_hi = 0.22 * diam
    out = []
    for _ in range(n):
        target = math.exp(rng.uniform(math.log(delta_lo), math.log(delta_hi)))
        for _ in range(max_tries):
            p = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
            if not domain.contains(p):
                continue
            d = domain.dist_to_boundary(p)
            if 0.7 * target <= d <= 1.45 * target:
                out.append(p)
                break
        else:
            raise ResolutionTooCoarseError(
                f"no point found in delta stratum around {target}")
    return np.array(out)


def estimate_delta(graph, n_samples, rng_seed, pool_size=48,
                   delta_lo=None, delta_hi=None) -> HyperbolicityReport:
    """Max thinness defect over seeded random triangles.

    Corners are drawn from a fixed-size pool of boundary-distance-stratified
    continuous points (snapped per graph), so estimates with nested sample
    counts are monotone and estimates across resolutions are comparable.
    """
    if n_samples < 1:
        raise InvalidParameterError("n_samples must be >= 1")
    rng = np.random.default_rng(rng_seed)
    pool_pts = sample_delta_stratified(graph.domain, rng, pool_size,
                                       delta_lo, delta_hi)
    pool_ids = np.array([graph.snap(p) for p in pool_pts], dtype=np.int64)

    triples = []
    for _ in range(n_samples):
        for _ in range(64):
            pick = rng.choice(pool_size, size=3, replace=False)
            tri = tuple(sorted(int(pool_ids[k]) for k in pick))
            if len(set(tri)) == 3:
                triples.append(tri)
                break

    # two passes so each pool node's search tree is built at most twice
    sides_ab, sides_ac = {}, {}
    by_a = {}
    for tri in set(triples):
        by_a.setdefault(tri[0], set()).add(tri)
    for a, tris in sorted(by_a.items()):
        targets = sorted({t for tri in tris for t in tri[1:]})
        dist, pred = shortest_tree(graph, a, weight="k", targets=targets)
        for tri in tris:
            sides_ab[tri] = extract_path(pred, tri[1])
            sides_ac[tri] = extract_path(pred, tri[2])
    sides_bc = {}
    by_b = {}
    for tri in set(triples):
        by_b.setdefault(tri[1], set()).add(tri)
    for b, tris in sorted(by_b.items()):
        targets = sorted({tri[2] for tri in tris})
        dist, pred = shortest_tree(graph, b, weight="k", targets=targets)
        for tri in tris:
            sides_bc[tri] = extract_path(pred, tri[2])

    defects = {}
    for tri in sorted(set(triples)):
        sides = [sides_ab[tri], sides_ac[tri], sides_bc[tri]]
        defects[tri] = max(_side_defect(graph, sides[s], np.concatenate(
            [sides[t] for t in range(3) if t != s])) for s in range(3))

    delta_hat = 0.0
    worst = {}
    for tri in triples:
        d = defects[tri]
        if d > delta_hat:
            delta_hat = d
            worst = {"corners": [graph.node_xy[i].tolist() for i in tri],
                     "defect": d}
    return HyperbolicityReport(delta_hat=delta_hat, sample_count=len(triples),
                               resolution=graph.h, worst=worst)
