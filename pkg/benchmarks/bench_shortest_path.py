#!/usr/bin/env python3
"""Benchmark the compiled shortest-path kernel against the pure-Python lane.

Both lanes implement the same algorithm with identical tie-breaking; the
script verifies bit-identical output before timing.  Run:

    python benchmarks/bench_shortest_path.py [--h 1/96] [--runs 3]
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from qhlab import _fastpaths_available
from qhlab._pypaths import dijkstra_csr as py_dijkstra
from qhlab.domains import Disk
from qhlab.graph import build_graph


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--h", default="1/96", help="grid spacing (p/q or float)")
    ap.add_argument("--runs", type=int, default=3)
    args = ap.parse_args()
    h = float(Fraction(args.h))

    graph = build_graph(Disk(), h, connectivity=16)
    print(f"disk graph at h={args.h}: {graph.n_nodes} nodes, "
          f"{graph.n_edges} undirected edges")

    sources = np.array([graph.snap((0.0, 0.0))])
    lanes = [("python", py_dijkstra)]
    if _fastpaths_available():
        from qhlab._fastpaths import dijkstra_csr as c_dijkstra
        lanes.insert(0, ("compiled", c_dijkstra))
    else:
        print("compiled kernel not built; benchmarking python lane only")

    results = {}
    for name, fn in lanes:
        best = np.inf
        for _ in range(args.runs):
            t0 = time.perf_counter()
            dist, pred = fn(graph.indptr, graph.indices, graph.w_k, sources)
            best = min(best, time.perf_counter() - t0)
        results[name] = (best, dist, pred)
        print(f"{name:>9}: {best * 1e3:8.1f} ms (best of {args.runs})")

    if len(results) == 2:
        (tc, dc, pc), (tp, dp, pp) = results["compiled"], results["python"]
        same = np.array_equal(dc, dp) and np.array_equal(pc, pp)
        print(f"identical output: {same}")
        print(f"speedup: {tp / tc:.1f}x")
        if not same:
            raise SystemExit("lane outputs differ: kernel semantics drifted")


if __name__ == "__main__":
    main()
