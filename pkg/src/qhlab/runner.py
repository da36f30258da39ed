"""Config-driven experiment runner behind the CLI.

Executes the experiment list in order on one shared graph, seeds each
experiment from the config seed and its position (deterministic merge), and
assembles the checksummed report body.
"""

import hashlib
import time
from dataclasses import asdict

import numpy as np

from . import __version__
from .config import domain_from_config
from .curves import qh_length
from .extension import compactness_check, run_extension_experiment
from .graph import build_graph
from .hyperbolicity import estimate_delta
from .paths import (check_lower_bounds_ids, inner_distance, lower_bound_suite,
                    qh_distance, qh_geodesic)
from .regularity import (fit_growth_function, gehring_hayman_constant,
                         growth_envelope, integral_test_detail,
                         quasiconvexity_constant, summation_test_detail)
from .reporting import emit_figure, sanitize, write_csv, write_report
from .visibility import falsify_visibility, observation_divergence_check

TAU_RULE = "4h/min(delta_x, delta_y)"


class _Context:
    def __init__(self, cfg, out_dir):
        self.cfg = cfg
        self.out_dir = out_dir
        self.domain = domain_from_config(cfg["domain"])
        self.h = cfg["resolution"]
        self.connectivity = cfg["connectivity"]
        self._graph = None

    @property
    def graph(self):
        if self._graph is None:
            self._graph = build_graph(self.domain, self.h, self.connectivity)
        return self._graph

    def seed_for(self, index):
        return int(np.random.SeedSequence(
            [int(self.cfg["seed"]), index]).generate_state(1)[0])


def _annotate(ctx, result):
    result.setdefault("h", ctx.h)
    result.setdefault("tau_rule", TAU_RULE)
    return result


def _op_build(ctx, exp, seed):
    return ctx.graph.stats()


def _op_dist(ctx, exp, seed):
    x, y = exp["x"], exp["y"]
    metric = exp.get("metric", "qh")
    if metric == "qh":
        value = qh_distance(ctx.graph, x, y)
    elif metric == "inner":
        value = inner_distance(ctx.graph, x, y)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    g = ctx.graph
    i, j = g.snap(x), g.snap(y)
    return {"metric": metric, "value": value,
            "tau": g.tau(i, j) if i != j else 0.0,
            "snapped_x": g.node_xy[i].tolist(), "snapped_y": g.node_xy[j].tolist()}


def _op_qh_length(ctx, exp, seed):
    return {"value": qh_length(ctx.domain, exp["vertices"])}


def _op_geodesic(ctx, exp, seed):
    curve = qh_geodesic(ctx.graph, exp["x"], exp["y"])
    out = {"k_length": curve.k_length, "d_length": curve.d_length,
           "max_delta": curve.max_delta(), "vertices": len(curve.vertices)}
    if exp.get("output"):
        path = f"{ctx.out_dir}/{exp['output']}"
        fmt = "svg" if path.endswith(".svg") else "csv"
        emit_figure(curve, fmt, path, domain=ctx.domain)
        out["file"] = exp["output"]
    return out


def _op_lower_bounds(ctx, exp, seed):
    g = ctx.graph
    rng = np.random.default_rng(seed)
    n_pairs = exp.get("n_pairs", 100)
    n_src = max(1, int(round(np.sqrt(n_pairs / 16.0))))
    per = int(np.ceil(n_pairs / n_src))
    sources = rng.integers(g.n_nodes, size=n_src)
    batches = []
    total = 0
    for s in sources:
        t = []
        while len(t) < per and total + len(t) < n_pairs:
            c = int(rng.integers(g.n_nodes))
            if c != int(s):
                t.append(c)
        total += len(t)
        batches.append((int(s), t))
    reports = lower_bound_suite(g, batches)
    failed = [asdict(r) for r in reports if not r.passed]
    return {"pairs": len(reports), "passed": len(reports) - len(failed),
            "failed": failed[:10]}


def _op_delta(ctx, exp, seed):
    rep = estimate_delta(ctx.graph, exp.get("n_samples", 100),
                         exp.get("rng_seed", seed))
    return {"delta_hat": rep.delta_hat, "samples": rep.sample_count,
            "worst": rep.worst}


def _op_visibility(ctx, exp, seed):
    reports = falsify_visibility(ctx.graph, exp.get("candidate_pairs", 20),
                                 n_levels=exp.get("n_levels", 6),
                                 rng_seed=exp.get("rng_seed", seed))
    rows = [(r.pair_index, list(r.p.position), list(r.q.position),
             r.epsilon_hat, r.verdict) for r in reports]
    if exp.get("output"):
        write_csv(f"{ctx.out_dir}/{exp['output']}",
                  ["pair", "p", "q", "epsilon_hat", "verdict"], rows)
    return {"pairs": len(reports),
            "falsified": sum(r.verdict == "falsified" for r in reports),
            "visible": sum(r.verdict == "visible" for r in reports),
            "min_epsilon_hat": reports[0].epsilon_hat if reports else None,
            "eps_vis": reports[0].eps_vis if reports else None,
            "head": rows[:10]}


def _op_divergence(ctx, exp, seed):
    from .domains import BoundaryPoint
    p = BoundaryPoint(tuple(exp["p"]), tuple(exp["p_corridor"])
                      if "p_corridor" in exp else None)
    q = BoundaryPoint(tuple(exp["q"]), tuple(exp["q_corridor"])
                      if "q_corridor" in exp else None)
    p = _with_corridor(ctx.domain, p)
    q = _with_corridor(ctx.domain, q)
    ok = observation_divergence_check(ctx.graph, p, q,
                                      n_levels=exp.get("n_levels", 6))
    return {"diverges": ok}


def _with_corridor(domain, bp):
    from .domains import BoundaryPoint
    if bp.corridor is not None:
        return bp
    comp, s = domain.arc_coordinate(bp.pos())
    run = 0.0
    for piece in domain.walk_pieces():
        if piece.component != comp:
            continue
        if s <= run + piece.length:
            cor = piece.corridor_at(min(max(s - run, 0.0), piece.length))
            return BoundaryPoint(bp.position, tuple(cor))
        run += piece.length
    return bp


def _op_growth(ctx, exp, seed):
    env = growth_envelope(ctx.graph, exp.get("x0", _deepest_point(ctx.graph)),
                          exp.get("n_samples", 200),
                          rng_seed=exp.get("rng_seed", seed))
    family = exp.get("family", "log-affine")
    model = fit_growth_function(env, family,
                                power_exponent=exp.get("power_exponent", 1.0))
    it = integral_test_detail(model)
    st = summation_test_detail(model)
    if exp.get("output"):
        write_csv(f"{ctx.out_dir}/{exp['output']}", ["ratio", "k"],
                  [tuple(r) for r in env])
    return {"samples": len(env), "family": family,
            "a": model.a, "b": model.b, "c": model.c,
            "envelope_margin": model.envelope_margin,
            "integral_test": it[0], "integral_head": it[1], "integral_tail": it[2],
            "summation_test": st[0], "summation_head": st[1], "summation_tail": st[2]}


def _deepest_point(graph):
    return graph.node_xy[int(np.argmax(graph.node_delta))].tolist()


def _op_regularity(ctx, exp, seed):
    n = exp.get("n_pairs", 100)
    gh = gehring_hayman_constant(ctx.graph, n, exp.get("rng_seed", seed))
    qc = quasiconvexity_constant(ctx.graph, n, exp.get("rng_seed", seed) + 1)
    return {"gh_constant": gh.gh_constant, "gh_worst": gh.worst_pair,
            "quasiconvexity": qc.quasiconvexity, "qc_worst": qc.worst_pair,
            "pairs": n}


def _op_extension(ctx, exp, seed):
    res = run_extension_experiment(
        ctx.graph, exp.get("x0", _deepest_point(ctx.graph)),
        n_rays=exp.get("n_rays", 16), n_levels=exp.get("n_levels", 6),
        equivalence_bound=exp.get("equivalence_bound", 2.0))
    return {"rays": len(res.rays),
            "landed": sum(1 for b in res.landings if b is not None),
            "surjectivity_gap": res.surjectivity_gap,
            "injectivity_margin": res.injectivity_margin,
            "equivalent_pairs": len(res.equivalent_pairs),
            "coherence_violations": len(res.coherence_violations),
            "flagged": res.flagged_rays}


def _op_compactness(ctx, exp, seed):
    rep = compactness_check(ctx.domain, n=exp.get("n", 64),
                            witness_separation=exp.get("witness_separation", 0.9),
                            graph=ctx.graph if ctx.domain.ambient == "inner"
                            and not ctx.domain.is_convex() else None,
                            h=ctx.h, connectivity=ctx.connectivity)
    return {"verdict": rep.verdict,
            "witness": [list(b.position) for b in rep.witness],
            "witness_pairwise": rep.witness_pairwise,
            "net_radius": rep.net_radius, "metric": rep.metric}


_OPS = {
    "build": _op_build,
    "dist": _op_dist,
    "qh_length": _op_qh_length,
    "geodesic": _op_geodesic,
    "lower_bounds": _op_lower_bounds,
    "delta": _op_delta,
    "visibility": _op_visibility,
    "divergence": _op_divergence,
    "growth": _op_growth,
    "regularity": _op_regularity,
    "extension": _op_extension,
    "compactness": _op_compactness,
}


def run_config(cfg, raw_config_text, out_dir, fail_fast=False,
               fail_on_falsify=False, report_name="report.json"):
    """Execute all experiments; returns (report document path, exit code)."""
    started = time.time()
    ctx = _Context(cfg, out_dir)
    results = []
    any_error = False
    any_falsified = False
    for idx, exp in enumerate(cfg["experiments"]):
        op = exp["op"]
        entry = {"index": idx, "op": op, "params": sanitize(exp)}
        try:
            res = _OPS[op](ctx, exp, ctx.seed_for(idx))
            entry["result"] = _annotate(ctx, sanitize(res))
            if op == "visibility" and res.get("falsified"):
                any_falsified = True
        except Exception as exc:
            any_error = True
            entry["error"] = f"{type(exc).__name__}: {exc}"
            if fail_fast:
                results.append(entry)
                break
        results.append(entry)

    body = {
        "version": __version__,
        "config": sanitize(cfg),
        "input_checksum": hashlib.sha256(raw_config_text.encode()).hexdigest(),
        "experiments": results,
    }
    meta = {"started_unix": started, "runtime_s": time.time() - started}
    path = f"{out_dir}/{report_name}"
    write_report(path, body, meta)
    if any_falsified and fail_on_falsify:
        return path, 3
    if any_error:
        return path, 1
    return path, 0
