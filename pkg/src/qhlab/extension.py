"""Boundary-extension experiments: ray fans, landing maps, compactness.

A fan of approximate rays from one base point renders the extension map at
desk scale: landings against a boundary net measure surjectivity, pairwise
landing separations of non-equivalent rays measure injectivity, and the
comb's midpoint sequence exhibits the non-compact inner boundary.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .domains import BoundaryPoint, same_boundary_point
from .errors import InvalidPairError, InvalidParameterError
from .graph import build_graph
from .hyperbolicity import (RayApprox, build_ray, rays_equivalent,
                            schedule_levels, snap_schedule)
from .paths import extract_path, shortest_tree
from .curves import curve_from_graph_path

DEFAULT_EQUIVALENCE_BOUND = 2.0   # 4 * delta_hat + 2 with delta_hat unknown
LANDING_COHERENCE_FACTOR = 4.0    # equivalent rays must land within 4h
INJECTIVITY_DELTA0_FACTOR = 0.025


@dataclass
class ExtensionExperiment:
    base_id: int
    rays: list
    landings: list                 # BoundaryPoint or None per ray
    surjectivity_gap: float
    injectivity_margin: float
    equivalence_bound: float
    equivalent_pairs: list
    coherence_violations: list
    flagged_rays: list = field(default_factory=list)


def run_extension_experiment(graph, x0, n_rays=16, n_levels=6,
                             equivalence_bound=DEFAULT_EQUIVALENCE_BOUND,
                             delta0=None) -> ExtensionExperiment:
    """Ray fan from x0 to arclength-uniform boundary targets.

    One shortest-path tree from the base serves every ray.  The
    surjectivity gap is measured against a boundary net four times finer
    than the fan; the injectivity margin is the smallest landing separation
    among non-equivalent rays.
    """
    if n_rays < 8:
        raise InvalidParameterError("n_rays must be >= 8")
    base_id = graph.snap(x0)
    tree = shortest_tree(graph, base_id, weight="k")
    targets = graph.domain.boundary_sample(n_rays)

    rays, landings, flagged = [], [], []
    for t_idx, target in enumerate(targets):
        try:
            ray = build_ray(graph, base_id, target, n_levels,
                            delta0=delta0, tree=tree)
        except Exception as exc:
            rays.append(None)
            landings.append(None)
            flagged.append((t_idx, str(exc)))
            continue
        rays.append(ray)
        landings.append(ray.landing_estimate if ray.landed else None)
        if not ray.landed:
            flagged.append((t_idx, "no-landing-detected"))

    landed_pts = [bp for bp in landings if bp is not None]
    gap = surjectivity_gap(graph.domain, landed_pts, 4 * n_rays)

    margin = math.inf
    eq_pairs, violations = [], []
    live = [(i, r) for i, r in enumerate(rays) if r is not None and r.landed]
    for a in range(len(live)):
        for b in range(a + 1, len(live)):
            ia, ra = live[a]
            ib, rb = live[b]
            equivalent = rays_equivalent(ra, rb, equivalence_bound)
            sep = float(np.hypot(*(np.array(landings[ib].position)
                                   - np.array(landings[ia].position))))
            if equivalent:
                eq_pairs.append((ia, ib))
                if sep > LANDING_COHERENCE_FACTOR * graph.h:
                    violations.append((ia, ib, sep))
            else:
                margin = min(margin, sep)
    return ExtensionExperiment(base_id=base_id, rays=rays, landings=landings,
                               surjectivity_gap=gap, injectivity_margin=margin,
                               equivalence_bound=equivalence_bound,
                               equivalent_pairs=eq_pairs,
                               coherence_violations=violations,
                               flagged_rays=flagged)


def surjectivity_gap(domain, landings, n_probes) -> float:
    """Largest boundary-arclength distance from a probe to the nearest landing."""
    if not landings:
        return math.inf
    probes = domain.boundary_sample(n_probes)
    gap = 0.0
    for probe in probes:
        best = min(domain.arc_distance(probe.pos(), bp.pos())
                   for bp in landings)
        gap = max(gap, best)
    return gap


def injectivity_line_check(graph, p: BoundaryPoint, q: BoundaryPoint,
                           n_levels=3, delta0=None, c0=None) -> bool:
    """Do geodesics between sequences toward p and q keep d-length >= c0?

    c0 defaults to half the ambient distance between p and q (graph inner
    distance when the ambient metric is inner); non-degeneration of these
    lines is the numeric witness that distinct boundary points separate.
    """
    tol = graph.domain.boundary_tol() * 10 + 1e-9 * graph.domain.diameter()
    if same_boundary_point(p, q, tol):
        raise InvalidPairError("boundary points coincide (corridor-aware)")
    if delta0 is None:
        delta0 = INJECTIVITY_DELTA0_FACTOR * graph.domain.diameter()
    levels = schedule_levels(delta0, n_levels)
    _, ids_p = snap_schedule(graph, p, levels)
    _, ids_q = snap_schedule(graph, q, levels)
    n = min(len(ids_p), len(ids_q))
    if n == 0:
        raise InvalidParameterError("no schedule level reachable")
    if c0 is None:
        if graph.domain.ambient == "inner":
            dist0, _ = shortest_tree(graph, int(ids_p[0]), weight="d",
                                     targets=[int(ids_q[0])], want_pred=False)
            c0 = 0.5 * float(dist0[int(ids_q[0])])
        else:
            c0 = 0.5 * float(np.hypot(*(q.pos() - p.pos())))
    for m in range(n):
        i, j = int(ids_p[m]), int(ids_q[m])
        dist, pred = shortest_tree(graph, i, weight="k", targets=[j])
        path = extract_path(pred, j)
        geo = curve_from_graph_path(graph, path, cum_k=dist[path])
        if geo.d_length < c0:
            return False
    return True


@dataclass
class CompactnessReport:
    verdict: str                    # compact-consistent | non-compact-witness
    witness: list                   # BoundaryPoints of the witness subset
    witness_pairwise: Optional[np.ndarray]
    net_radius: float
    metric: str
    separation: float
    resolution: Optional[float]


def compactness_check(domain, n=64, witness_separation=0.9, h=None,
                      connectivity=16, graph=None,
                      offset=None) -> CompactnessReport:
    """Search boundary samples for an inner-metric non-compactness witness.

    A witness is a subset of >= 4 sampled boundary points that are pairwise
    at least witness_separation apart in the inner metric while clustered
    within witness_separation/2 in the ambient Euclidean metric (distances
    large in one metric, vanishing in the other).  Sampling covers every
    boundary walk piece's midpoint first, so deep slit corridors are probed.
    """
    if n < 4:
        raise InvalidParameterError("n must be >= 4")
    inner_metric = domain.ambient == "inner"
    candidates = list(domain.piece_midpoints())
    if len(candidates) < n:
        extra = domain.boundary_sample(n - len(candidates))
        candidates.extend(extra)
    candidates = candidates[:max(n, len(domain.piece_midpoints()))]

    if not inner_metric or domain.is_convex():
        # Euclidean boundary of a bounded domain (or inner = Euclidean on a
        # convex one): distances agree, no witness can exist.
        pos = np.array([c.pos() for c in candidates])
        dmat = np.hypot(pos[:, None, 0] - pos[None, :, 0],
                        pos[:, None, 1] - pos[None, :, 1])
        np.fill_diagonal(dmat, np.inf)
        net = float(dmat.min(axis=1).max())
        return CompactnessReport(verdict="compact-consistent", witness=[],
                                 witness_pairwise=None, net_radius=net,
                                 metric=domain.ambient,
                                 separation=witness_separation,
                                 resolution=None)

    if graph is None:
        if h is None:
            h = domain.diameter() / 512.0
        graph = build_graph(domain, h, connectivity=connectivity)
    if offset is None:
        offset = graph.h

    ids, kept = [], []
    for c in candidates:
        p = c.pos() + c.corridor_vec() * offset
        i = graph.snap_boundary_approach(p, c.pos(), c.corridor_vec())
        if i is None:
            continue
        if ids and i in ids:
            continue
        ids.append(i)
        kept.append(c)

    m = len(ids)
    pos = graph.node_xy[np.array(ids)]
    euc = np.hypot(pos[:, None, 0] - pos[None, :, 0],
                   pos[:, None, 1] - pos[None, :, 1])
    # inner distances only needed among Euclid-clustered candidates
    cluster = np.nonzero((euc <= witness_separation / 2.0).sum(axis=1) >= 4)[0]
    lam = np.full((m, m), np.inf)
    for a in cluster:
        dist, _ = shortest_tree(graph, ids[int(a)], weight="d",
                                targets=[ids[int(b)] for b in cluster],
                                want_pred=False)
        for b in cluster:
            lam[a, b] = dist[ids[int(b)]]

    witness_idx = _find_witness(euc, lam, cluster, witness_separation)
    np.fill_diagonal(euc, np.inf)
    net = float(euc.min(axis=1).max())
    if witness_idx:
        sub = np.array(witness_idx)
        return CompactnessReport(
            verdict="non-compact-witness",
            witness=[kept[i] for i in witness_idx],
            witness_pairwise=lam[np.ix_(sub, sub)],
            net_radius=net, metric=domain.ambient,
            separation=witness_separation, resolution=graph.h)
    return CompactnessReport(verdict="compact-consistent", witness=[],
                             witness_pairwise=None, net_radius=net,
                             metric=domain.ambient,
                             separation=witness_separation,
                             resolution=graph.h)


def _find_witness(euc, lam, cluster, sep):
    """Greedy search for >= 4 points pairwise lam >= sep, Euclid-diam <= sep/2."""
    best = []
    for seed in cluster:
        chosen = [int(seed)]
        for cand in cluster:
            cand = int(cand)
            if cand in chosen:
                continue
            if all(lam[cand, c] >= sep and euc[cand, c] <= sep / 2.0
                   for c in chosen):
                chosen.append(cand)
        if len(chosen) > len(best):
            best = chosen
    return best if len(best) >= 4 else []
