"""Report serialization (canonical JSON + checksum), CSV tables, SVG figures.

The report body is byte-reproducible: one canonical JSON encoding, sorted
keys, no NaN/inf literals (they are encoded as strings), with timing kept
outside the checksummed region.
"""

import csv
import hashlib
import json
import math

import numpy as np

from .curves import ParametrizedCurve
from .errors import InvalidParameterError


def sanitize(obj):
    """Make an object canonically JSON-encodable (numpy -> python, inf -> str)."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def canonical_body_bytes(body) -> bytes:
    return json.dumps(sanitize(body), sort_keys=True,
                      separators=(",", ":"), allow_nan=False).encode()


def body_checksum(body) -> str:
    return hashlib.sha256(canonical_body_bytes(body)).hexdigest()


def write_report(path, body, meta) -> str:
    """Write {body, body_sha256, meta}; returns the checksum."""
    chk = body_checksum(body)
    doc = {"body": sanitize(body), "body_sha256": chk, "meta": sanitize(meta)}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return chk


def load_report(path):
    with open(path) as fh:
        return json.load(fh)


def verify_report(path) -> bool:
    doc = load_report(path)
    return body_checksum(doc["body"]) == doc.get("body_sha256")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_csv_cell(c) for c in row])


def _csv_cell(c):
    if isinstance(c, (np.floating, np.integer)):
        return c.item()
    return c


# ---------------------------------------------------------------------------
# figures

_SVG_STYLE = 'fill="none" stroke="{color}" stroke-width="{w}"'


def _svg_path(points, color, width):
    d = "M " + " L ".join(f"{x:.6g} {y:.6g}" for x, y in points)
    return f'<path d="{d}" {_SVG_STYLE.format(color=color, w=width)} />'


def figure_svg(polylines, bbox, size=640):
    """Vector figure from (points, color, width) triples; y axis points up."""
    x0, x1, y0, y1 = bbox
    pad = 0.05 * max(x1 - x0, y1 - y0)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    w = x1 - x0
    h = y1 - y0
    scale = size / max(w, h)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'width="{w * scale:.0f}" height="{h * scale:.0f}" '
             f'viewBox="{x0:.6g} {-y1:.6g} {w:.6g} {h:.6g}">']
    for pts, color, width in polylines:
        flipped = [(x, -y) for x, y in np.asarray(pts, dtype=float)]
        parts.append(_svg_path(flipped, color, width))
    parts.append("</svg>")
    return "\n".join(parts)


def _as_polylines(obj, domain):
    lines = []
    if domain is not None:
        for path in domain.outline_paths():
            lines.append((path, "#222222", 0.004 * domain.diameter()))
    scale = domain.diameter() if domain is not None else 1.0
    if isinstance(obj, ParametrizedCurve):
        lines.append((obj.vertices, "#c0392b", 0.006 * scale))
    elif hasattr(obj, "segments"):  # RayApprox
        for seg in obj.segments:
            lines.append((seg.vertices, "#2980b9", 0.004 * scale))
    elif isinstance(obj, (list, tuple)):
        for item in obj:
            verts = item.vertices if isinstance(item, ParametrizedCurve) else item
            lines.append((np.asarray(verts, dtype=float), "#c0392b", 0.005 * scale))
    else:
        raise InvalidParameterError(
            f"cannot render {type(obj).__name__} as a figure")
    return lines


def _figure_bbox(lines):
    pts = np.vstack([np.asarray(p, dtype=float) for p, _, _ in lines])
    return (pts[:, 0].min(), pts[:, 0].max(), pts[:, 1].min(), pts[:, 1].max())


def emit_figure(obj, fmt, path, domain=None):
    """Write a curve/ray/envelope artifact to disk.

    Formats: "svg" (vector polylines over the domain outline) and "csv"
    (plain tables for external plotting).
    """
    if fmt == "svg":
        lines = _as_polylines(obj, domain)
        svg = figure_svg(lines, _figure_bbox(lines))
        with open(path, "w") as fh:
            fh.write(svg + "\n")
        return path
    if fmt == "csv":
        header, rows = _as_table(obj)
        write_csv(path, header, rows)
        return path
    raise InvalidParameterError(f"unsupported figure format {fmt!r}")


def _as_table(obj):
    if isinstance(obj, ParametrizedCurve):
        return (["x", "y", "cum_d", "cum_k", "delta"],
                [(v[0], v[1], d, k, dl) for v, d, k, dl in
                 zip(obj.vertices, obj.cum_d, obj.cum_k, obj.vertex_delta)])
    if isinstance(obj, np.ndarray) and obj.ndim == 2 and obj.shape[1] == 2:
        return (["ratio", "k"], [tuple(r) for r in obj])
    if isinstance(obj, dict) and "header" in obj and "rows" in obj:
        return (list(obj["header"]), list(obj["rows"]))
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return (["value"], [])
        first = obj[0]
        if isinstance(first, (list, tuple)) and len(first) == 2:
            return (["level", "value"], [tuple(r) for r in obj])
    raise InvalidParameterError(
        f"cannot render {type(obj).__name__} as a table")
