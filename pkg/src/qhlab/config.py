"""Experiment configuration: JSON schema, validation, domain factory.

Validation errors always name the offending field; resolution and seed must
be explicit so persisted reports never contain silent defaults.
"""

import json
from fractions import Fraction

from .domains import Comb, Disk, PolygonWithHoles, Rectangle
from .errors import ConfigError

KNOWN_OPS = (
    "build", "dist", "qh_length", "geodesic", "lower_bounds", "delta",
    "visibility", "divergence", "growth", "regularity", "extension",
    "compactness",
)

AMBIENTS = ("euclidean", "inner")


def parse_resolution(value, field="resolution"):
    """Accept a number or a 'p/q' string (kept exact for dyadic spacings)."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        h = float(value)
    elif isinstance(value, str):
        try:
            h = float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(field, f"cannot parse resolution {value!r}") from exc
    else:
        raise ConfigError(field, "resolution must be a number or 'p/q' string")
    if h <= 0:
        raise ConfigError(field, "resolution must be positive")
    return h


def _point(value, field):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ConfigError(field, "expected a point [x, y]")
    return [float(value[0]), float(value[1])]


def domain_from_config(block, field="domain"):
    if not isinstance(block, dict):
        raise ConfigError(field, "expected an object")
    kind = block.get("kind")
    ambient = block.get("ambient", "euclidean")
    if ambient not in AMBIENTS:
        raise ConfigError(f"{field}.ambient", f"unknown ambient {ambient!r}")
    if kind == "disk":
        center = _point(block.get("center", [0.0, 0.0]), f"{field}.center")
        radius = block.get("radius", 1.0)
        if not isinstance(radius, (int, float)) or radius <= 0:
            raise ConfigError(f"{field}.radius", "must be a positive number")
        return Disk(center, float(radius), ambient=ambient)
    if kind == "rectangle":
        xr = block.get("x_range", [0.0, 1.0])
        yr = block.get("y_range", [0.0, 1.0])
        for name, rng in (("x_range", xr), ("y_range", yr)):
            if (not isinstance(rng, (list, tuple)) or len(rng) != 2
                    or rng[0] >= rng[1]):
                raise ConfigError(f"{field}.{name}", "expected [lo, hi]")
        return Rectangle(xr, yr, ambient=ambient)
    if kind == "comb":
        teeth = block.get("teeth")
        if not isinstance(teeth, int) or teeth < 1:
            raise ConfigError(f"{field}.teeth", "must be a positive integer")
        return Comb(teeth, ambient=block.get("ambient", "inner"))
    if kind == "polygon":
        outer = block.get("outer")
        if not isinstance(outer, list) or len(outer) < 3:
            raise ConfigError(f"{field}.outer", "need >= 3 vertices")
        holes = block.get("holes", [])
        return PolygonWithHoles(outer, holes, ambient=ambient)
    raise ConfigError(f"{field}.kind", f"unknown domain kind {kind!r}")


def validate_config(cfg):
    """Normalize a config dict; raises ConfigError naming the bad field."""
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    if "domain" not in cfg:
        raise ConfigError("domain", "missing")
    domain_from_config(cfg["domain"])  # validates

    if "resolution" not in cfg:
        raise ConfigError("resolution", "missing (must be explicit)")
    h = parse_resolution(cfg["resolution"])

    if "seed" not in cfg:
        raise ConfigError("seed", "missing (must be explicit)")
    if not isinstance(cfg["seed"], int):
        raise ConfigError("seed", "must be an integer")

    conn = cfg.get("connectivity", 16)
    if conn not in (8, 16):
        raise ConfigError("connectivity", "must be 8 or 16")

    experiments = cfg.get("experiments", [])
    if not isinstance(experiments, list):
        raise ConfigError("experiments", "must be a list")
    for i, exp in enumerate(experiments):
        if not isinstance(exp, dict):
            raise ConfigError(f"experiments[{i}]", "must be an object")
        op = exp.get("op")
        if op not in KNOWN_OPS:
            raise ConfigError(f"experiments[{i}].op",
                              f"unknown operation {op!r}")

    tolerances = cfg.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances", "must be an object")

    out = dict(cfg)
    out["resolution"] = h
    out["connectivity"] = conn
    out["experiments"] = experiments
    out["tolerances"] = tolerances
    return out


def load_config(path):
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from exc
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON at line {exc.lineno}, "
                                    f"column {exc.colno}: {exc.msg}") from exc
    return validate_config(cfg), raw
