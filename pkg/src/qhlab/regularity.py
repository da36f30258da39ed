"""Growth envelopes of the quasihyperbolic metric and regularity constants.

The growth condition bounds k(x0, x) by an increasing function of the
boundary-distance ratio; its tail behaviour (integral of the reciprocal
inverse, equivalently the Lammi sum) is what forces visibility.  This
module fits certified upper envelopes in two parametric families, runs
both convergence tests, and measures the empirical Gehring-Hayman and
quasiconvexity constants.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .curves import curve_from_graph_path
from .errors import InvalidParameterError, NoFitError
from .paths import extract_path, shortest_tree

LOG_AFFINE = "log-affine"
POWER = "power"
A_CAP = 1e12
A_FLOOR = 1e-9
SUM_HEAD_TERMS = 1000
INTEGRAL_HEAD_UPPER = 1000.0


@dataclass
class GrowthModel:
    """phi(t) = a log(1+t) + b, or a t^c + b; strictly increasing on (0, inf)."""

    family: str
    a: float
    b: float = 0.0
    c: float = 1.0
    envelope_margin: float = 0.0

    def __post_init__(self):
        if self.family not in (LOG_AFFINE, POWER):
            raise InvalidParameterError(f"unknown family {self.family!r}")
        if self.a <= 0 or self.b < 0 or (self.family == POWER and self.c <= 0):
            raise InvalidParameterError("growth parameters must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == LOG_AFFINE:
            return self.a * np.log1p(t) + self.b
        return self.a * t ** self.c + self.b

    def inverse(self, s):
        """phi^-1 on s > b."""
        s = np.asarray(s, dtype=float)
        if self.family == LOG_AFFINE:
            return np.expm1((s - self.b) / self.a)
        return ((s - self.b) / self.a) ** (1.0 / self.c)

    def reciprocal_inverse(self, s):
        """1 / phi^-1(s), stable for large s."""
        s = np.asarray(s, dtype=float)
        if self.family == LOG_AFFINE:
            e = np.exp(-(s - self.b) / self.a)
            return e / (1.0 - e)
        return ((s - self.b) / self.a) ** (-1.0 / self.c)


def _unit_curve(family, c):
    if family == LOG_AFFINE:
        return lambda t: np.log1p(t)
    return lambda t: np.asarray(t, dtype=float) ** c


def fit_growth_function(envelope, family, power_exponent=1.0) -> GrowthModel:
    """Smallest-slope member of the family dominating every sample.

    The slope is the binding parameter for the convergence tests, so it is
    minimized first (smallest a such that a * phi0(t) covers all samples);
    the offset is then already zero.  Samples with k <= 0 impose no
    constraint.
    """
    env = np.asarray(envelope, dtype=float).reshape(-1, 2)
    if len(env) == 0:
        raise InvalidParameterError("empty envelope")
    t, k = env[:, 0], env[:, 1]
    if np.any(t <= 0):
        raise InvalidParameterError("ratios must be positive")
    phi0 = _unit_curve(family, power_exponent)
    u = phi0(t)
    mask = k > 0
    if not mask.any():
        a = A_FLOOR
    else:
        with np.errstate(divide="ignore"):
            a = float(np.max(k[mask] / u[mask]))
        if not np.isfinite(a) or a > A_CAP:
            raise NoFitError(
                f"{family} family cannot dominate the envelope "
                f"(required slope {a:.3g})")
        a = max(a, A_FLOOR)
    model = GrowthModel(family=family, a=a, b=0.0, c=power_exponent)
    model.envelope_margin = float(np.max(k - model(t)))
    return model


def growth_envelope(graph, x0, n_samples, rng_seed=0):
    """(ratio, k-hat) samples from the base point, delta-stratified.

    The base pair (1, 0) is always included; one shortest-path tree serves
    every sample.
    """
    if n_samples < 1:
        raise InvalidParameterError("n_samples must be >= 1")
    i0 = x0 if isinstance(x0, (int, np.integer)) else graph.snap(x0)
    dist, _ = shortest_tree(graph, i0, weight="k", want_pred=False)
    d0 = float(graph.node_delta[i0])
    ids = _stratified_node_sample(graph, n_samples, rng_seed, exclude=i0)
    ratios = [1.0] + [d0 / float(graph.node_delta[i]) for i in ids]
    ks = [0.0] + [float(dist[i]) for i in ids]
    return np.column_stack([ratios, ks])


def _stratified_node_sample(graph, n, rng_seed, exclude=None):
    rng = np.random.default_rng(rng_seed)
    delta = graph.node_delta
    lo, hi = float(delta.min()), float(delta.max())
    edges = np.geomspace(lo, hi * (1 + 1e-12), 9)
    buckets = [np.nonzero((delta >= a) & (delta < b))[0]
               for a, b in zip(edges[:-1], edges[1:])]
    buckets = [b for b in buckets if len(b)]
    out = []
    for m in range(n):
        b = buckets[m % len(buckets)]
        i = int(b[rng.integers(len(b))])
        if exclude is not None and i == exclude:
            i = int(b[rng.integers(len(b))])
        out.append(i)
    return out


def _tail_bound(model: GrowthModel, T) -> float:
    """Upper bound for the tail integral of 1/phi^-1 beyond T; inf if divergent."""
    if model.family == LOG_AFFINE:
        # 1/expm1(x) <= 2 exp(-x) for x >= 1; integrate analytically
        x_T = (T - model.b) / model.a
        if x_T < 1.0:
            T = model.b + model.a
            x_T = 1.0
        return 2.0 * model.a * math.exp(-x_T)
    inv_c = 1.0 / model.c
    if inv_c <= 1.0:
        return math.inf
    return (model.a ** inv_c) * (T - model.b) ** (1.0 - inv_c) / (inv_c - 1.0)


def integral_start(model: GrowthModel) -> float:
    """Lower limit t0 = max(1, phi(1)): below phi's range the inverse is undefined."""
    return max(1.0, float(model(1.0)))


def integral_test(model: GrowthModel) -> bool:
    """Does the tail integral of dt / phi^-1(t) converge?"""
    finite, _, _ = integral_test_detail(model)
    return finite


def integral_test_detail(model: GrowthModel):
    """(convergent, numeric head on [t0, 1e3], analytic tail bound)."""
    t0 = integral_start(model)
    upper = max(INTEGRAL_HEAD_UPPER, t0 + 1.0)
    head, _ = quad(lambda s: float(model.reciprocal_inverse(s)), t0, upper,
                   limit=200)
    tail = _tail_bound(model, upper)
    return bool(math.isfinite(tail)), float(head), float(tail)


def summation_test(model: GrowthModel) -> bool:
    """Does the sum of 1 / phi^-1(j) over integer j converge?"""
    finite, _, _ = summation_test_detail(model)
    return finite


def summation_test_detail(model: GrowthModel):
    """(convergent, partial sum to j=1000, analytic tail bound)."""
    j0 = int(math.ceil(integral_start(model)))
    js = np.arange(j0, j0 + SUM_HEAD_TERMS, dtype=float)
    head = float(np.sum(model.reciprocal_inverse(js)))
    # integral comparison: terms are decreasing, so the tail is bounded by
    # the tail integral starting one index earlier
    tail = _tail_bound(model, float(js[-1]))
    return bool(math.isfinite(tail)), head, float(tail)


def phi_uniform_transform(varphi: GrowthModel, diam, delta0) -> GrowthModel:
    """Rescale the argument by diam/delta0 (base-point normalization).

    Exact within the power family; for log-affine the returned model is the
    tightest in-family dominator of a log(1 + s t) + b, which preserves the
    convergence class (both tests are scale-invariant).
    """
    if diam <= 0 or delta0 <= 0:
        raise InvalidParameterError("scales must be positive")
    s = diam / delta0
    if varphi.family == POWER:
        return GrowthModel(POWER, varphi.a * s ** varphi.c, varphi.b, varphi.c)
    b = varphi.b + varphi.a * math.log(s) if s > 1.0 else varphi.b
    return GrowthModel(LOG_AFFINE, varphi.a, b, varphi.c)


@dataclass
class RegularityReport:
    gh_constant: Optional[float]
    quasiconvexity: Optional[float]
    sample_count: int
    resolution: float
    worst_pair: dict
    min_delta_sampled: float = math.inf


def _uniform_domain_point(domain, rng, delta_floor=0.0, max_tries=10000):
    x0, x1, y0, y1 = domain.bounding_box()
    for _ in range(max_tries):
        p = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
        if not domain.contains(p):
            continue
        if delta_floor > 0.0 and domain.dist_to_boundary(p) < delta_floor:
            continue
        return p
    raise InvalidParameterError("domain appears to have negligible area")


def _pair_batches(graph, n_pairs, rng_seed, delta_floor=0.0):
    """(source, targets) node batches from continuous uniform points.

    Continuous sampling keeps the pair set comparable across resolutions;
    batching by source lets one search tree serve many pairs.
    """
    rng = np.random.default_rng(rng_seed)
    n_src = max(1, int(round(math.sqrt(n_pairs / 4.0))))
    per = int(math.ceil(n_pairs / n_src))
    batches = []
    total = 0
    for _ in range(n_src):
        s = graph.snap(_uniform_domain_point(graph.domain, rng, delta_floor))
        t = []
        while len(t) < per and total + len(t) < n_pairs:
            cand = graph.snap(_uniform_domain_point(graph.domain, rng,
                                                    delta_floor))
            if cand != s:
                t.append(cand)
        total += len(t)
        batches.append((int(s), t))
    return batches


def gehring_hayman_constant(graph, n_pairs, rng_seed,
                            delta_floor=0.0) -> RegularityReport:
    """Empirical C_gh: worst d-length of a qh geodesic over the inner distance.

    The inner distance is the infimum over competitor curves, so the ratio
    against it is the sharp constant on the sampled pairs.  Pairs hugging a
    straight boundary drive the ratio toward pi/2 (half-plane geodesics are
    semicircles); delta_floor restricts sampling to the bulk regime.
    """
    if n_pairs < 1:
        raise InvalidParameterError("n_pairs must be >= 1")
    best = 0.0
    worst = {}
    count = 0
    min_delta = math.inf
    for s, targets in _pair_batches(graph, n_pairs, rng_seed, delta_floor):
        if not targets:
            continue
        k_dist, k_pred = shortest_tree(graph, s, weight="k", targets=targets)
        d_dist, _ = shortest_tree(graph, s, weight="d", targets=targets,
                                  want_pred=False)
        for t in targets:
            path = extract_path(k_pred, t)
            geo = curve_from_graph_path(graph, path, cum_k=k_dist[path])
            ratio = geo.d_length / float(d_dist[t])
            count += 1
            min_delta = min(min_delta, graph.node_delta[s], graph.node_delta[t])
            if ratio > best:
                best = ratio
                worst = {"x": graph.node_xy[s].tolist(),
                         "y": graph.node_xy[t].tolist(), "ratio": ratio}
    return RegularityReport(gh_constant=best, quasiconvexity=None,
                            sample_count=count, resolution=graph.h,
                            worst_pair=worst, min_delta_sampled=min_delta)


def quasiconvexity_constant(graph, n_pairs, rng_seed,
                            extra_pairs=()) -> RegularityReport:
    """Empirical A: worst inner distance over the ambient distance.

    Under the inner ambient metric the space is a length space and A = 1 by
    definition; that value is reported without sampling.
    """
    if graph.domain.ambient == "inner":
        return RegularityReport(gh_constant=None, quasiconvexity=1.0,
                                sample_count=0, resolution=graph.h,
                                worst_pair={"note": "length space: A = 1"})
    if n_pairs < 1 and not extra_pairs:
        raise InvalidParameterError("n_pairs must be >= 1")
    best = 0.0
    worst = {}
    count = 0
    min_delta = math.inf
    batches = _pair_batches(graph, n_pairs, rng_seed) if n_pairs >= 1 else []
    for x, y in extra_pairs:
        batches.append((graph.snap(x), [graph.snap(y)]))
    for s, targets in batches:
        if not targets:
            continue
        d_dist, _ = shortest_tree(graph, s, weight="d", targets=targets,
                                  want_pred=False)
        for t in targets:
            euc = float(np.hypot(*(graph.node_xy[t] - graph.node_xy[s])))
            if euc == 0.0:
                continue
            ratio = float(d_dist[t]) / euc
            count += 1
            min_delta = min(min_delta, graph.node_delta[s], graph.node_delta[t])
            if ratio > best:
                best = ratio
                worst = {"x": graph.node_xy[s].tolist(),
                         "y": graph.node_xy[t].tolist(), "ratio": ratio}
    return RegularityReport(gh_constant=None, quasiconvexity=best,
                            sample_count=count, resolution=graph.h,
                            worst_pair=worst, min_delta_sampled=min_delta)
