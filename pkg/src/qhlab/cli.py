"""Command-line interface: one subcommand per experiment family plus `run`.

Exit codes: 0 success, 1 experiment failure, 2 configuration error,
3 falsified visibility when --fail-on-falsify is set.
"""

import argparse
import json
import os
import sys

from .config import ConfigError, load_config, parse_resolution, validate_config
from .reporting import load_report, verify_report


def _point(text):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from exc
    return [x, y]


def _add_common(sub):
    sub.add_argument("--domain", required=True,
                     help="domain JSON, e.g. '{\"kind\":\"disk\",\"radius\":1}'")
    sub.add_argument("--resolution", required=True,
                     help="grid spacing (number or 'p/q')")
    sub.add_argument("--connectivity", type=int, default=16, choices=(8, 16))
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--out-dir", default=".")


def build_parser():
    p = argparse.ArgumentParser(
        prog="qhlab",
        description="Numerical experiments on the quasihyperbolic geometry "
                    "of bounded planar domains.")
    sp = p.add_subparsers(dest="command", required=True)

    run = sp.add_parser("run", help="execute a full experiment config")
    run.add_argument("config")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--resolution", default=None)
    run.add_argument("--out-dir", default=".")
    run.add_argument("--fail-fast", action="store_true")
    run.add_argument("--fail-on-falsify", action="store_true")

    rep = sp.add_parser("report", help="verify and summarize a report file")
    rep.add_argument("report")

    single = {
        "build": [],
        "dist": [("--x", _point, True), ("--y", _point, True),
                 ("--metric", str, False)],
        "geodesic": [("--x", _point, True), ("--y", _point, True),
                     ("--figure", str, False)],
        "delta": [("--samples", int, False)],
        "visibility": [("--pairs", int, False), ("--levels", int, False)],
        "growth": [("--x0", _point, False), ("--samples", int, False),
                   ("--family", str, False)],
        "regularity": [("--pairs", int, False)],
        "extension": [("--x0", _point, False), ("--rays", int, False),
                      ("--levels", int, False)],
        "compactness": [("--n", int, False), ("--separation", float, False)],
    }
    for name, args in single.items():
        sub = sp.add_parser(name, help=f"run a single {name} experiment")
        _add_common(sub)
        for flag, typ, required in args:
            sub.add_argument(flag, type=typ, required=required)
    return p


def _single_config(args):
    try:
        domain = json.loads(args.domain)
    except json.JSONDecodeError as exc:
        raise ConfigError("domain", f"invalid JSON: {exc.msg}") from exc
    exp = {"op": args.command}
    mapping = {
        "dist": lambda a: {"x": a.x, "y": a.y, "metric": a.metric or "qh"},
        "geodesic": lambda a: {"x": a.x, "y": a.y,
                               **({"output": a.figure} if a.figure else {})},
        "delta": lambda a: {"n_samples": a.samples or 100},
        "visibility": lambda a: {"candidate_pairs": a.pairs or 20,
                                 "n_levels": a.levels or 6},
        "growth": lambda a: {**({"x0": a.x0} if a.x0 else {}),
                             "n_samples": a.samples or 200,
                             "family": a.family or "log-affine"},
        "regularity": lambda a: {"n_pairs": a.pairs or 100},
        "extension": lambda a: {**({"x0": a.x0} if a.x0 else {}),
                                "n_rays": a.rays or 16,
                                "n_levels": a.levels or 6},
        "compactness": lambda a: {"n": a.n or 64,
                                  "witness_separation": a.separation or 0.9},
        "build": lambda a: {},
    }
    exp.update(mapping[args.command](args))
    cfg = {"domain": domain, "resolution": args.resolution,
           "connectivity": args.connectivity, "seed": args.seed,
           "experiments": [exp]}
    return validate_config(cfg), json.dumps(cfg, sort_keys=True)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    from .runner import run_config  # deferred: numpy-heavy

    if args.command == "report":
        doc = load_report(args.report)
        ok = verify_report(args.report)
        n = len(doc["body"].get("experiments", []))
        errors = sum(1 for e in doc["body"]["experiments"] if "error" in e)
        print(f"version: {doc['body'].get('version')}")
        print(f"experiments: {n} ({errors} errored)")
        print(f"checksum: {'OK' if ok else 'MISMATCH'} {doc.get('body_sha256')}")
        return 0 if ok else 1

    try:
        if args.command == "run":
            cfg, raw = load_config(args.config)
            if args.seed is not None:
                cfg["seed"] = args.seed
            if args.resolution is not None:
                cfg["resolution"] = parse_resolution(args.resolution)
            fail_fast = args.fail_fast
            fail_on_falsify = args.fail_on_falsify
        else:
            cfg, raw = _single_config(args)
            fail_fast = False
            fail_on_falsify = False
    except ConfigError as exc:
        print(f"config-error: {exc}", file=sys.stderr)
        return 2

    os.makedirs(args.out_dir, exist_ok=True)
    path, code = run_config(cfg, raw, args.out_dir, fail_fast=fail_fast,
                            fail_on_falsify=fail_on_falsify)
    doc = load_report(path)
    for entry in doc["body"]["experiments"]:
        status = "error: " + entry["error"] if "error" in entry else "ok"
        print(f"[{entry['index']}] {entry['op']}: {status}")
    print(f"report: {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
