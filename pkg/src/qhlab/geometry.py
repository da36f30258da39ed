"""Low-level planar primitives: point/segment distances, crossings, lengths.

Everything here is plain numpy on float64 arrays; domains and graphs build
on these helpers.
"""

import numpy as np


def as_point(p):
    a = np.asarray(p, dtype=float).reshape(2)
    return a


def as_points(pts):
    a = np.asarray(pts, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, 2)
    return a


def polyline_length(vertices):
    v = as_points(vertices)
    if len(v) < 2:
        return 0.0
    return float(np.sum(np.hypot(np.diff(v[:, 0]), np.diff(v[:, 1]))))


def cumulative_lengths(vertices):
    v = as_points(vertices)
    seg = np.hypot(np.diff(v[:, 0]), np.diff(v[:, 1]))
    out = np.empty(len(v))
    out[0] = 0.0
    np.cumsum(seg, out=out[1:])
    return out


def point_segment_distance_batch(pts, a, b):
    """Distances from points (n,2) to the closed segment [a,b]."""
    p = as_points(pts)
    a = as_point(a)
    b = as_point(b)
    d = b - a
    seg2 = float(d @ d)
    if seg2 == 0.0:
        return np.hypot(p[:, 0] - a[0], p[:, 1] - a[1])
    t = ((p - a) @ d) / seg2
    np.clip(t, 0.0, 1.0, out=t)
    proj = a + t[:, None] * d
    return np.hypot(p[:, 0] - proj[:, 0], p[:, 1] - proj[:, 1])


def segments_point_distance(p, A, B):
    """Distances from a single point to many segments A[i]->B[i]."""
    p = as_point(p)
    A = as_points(A)
    B = as_points(B)
    d = B - A
    seg2 = np.einsum("ij,ij->i", d, d)
    safe = np.where(seg2 > 0.0, seg2, 1.0)
    t = np.einsum("ij,ij->i", p[None, :] - A, d) / safe
    t = np.where(seg2 > 0.0, np.clip(t, 0.0, 1.0), 0.0)
    proj = A + t[:, None] * d
    return np.hypot(p[0] - proj[:, 0], p[1] - proj[:, 1])


def project_point_to_segment(p, a, b):
    """Closest point on [a,b] and its parameter t in [0,1]."""
    p = as_point(p)
    a = as_point(a)
    b = as_point(b)
    d = b - a
    seg2 = float(d @ d)
    if seg2 == 0.0:
        return a.copy(), 0.0
    t = float(np.clip((p - a) @ d / seg2, 0.0, 1.0))
    return a + t * d, t


def edges_cross_vertical_slit(P, Q, x_slit, y_top, eps):
    """Which edges P[i]->Q[i] cross the slit {x_slit} x [0, y_top].

    Strict straddle in x; a crossing at or below y_top + eps counts (an edge
    through the slit tip is rejected too, since the tip is boundary).
    """
    P = as_points(P)
    Q = as_points(Q)
    dx0 = P[:, 0] - x_slit
    dx1 = Q[:, 0] - x_slit
    straddle = (dx0 * dx1) < 0.0
    out = np.zeros(len(P), dtype=bool)
    if not straddle.any():
        return out
    i = np.nonzero(straddle)[0]
    t = dx0[i] / (dx0[i] - dx1[i])
    y_cross = P[i, 1] + t * (Q[i, 1] - P[i, 1])
    out[i] = y_cross <= y_top + eps
    return out


def edges_cross_segment(P, Q, a, b, eps):
    """Which edges P[i]->Q[i] properly cross the segment [a,b].

    Sign-of-area test with an eps margin; near-degenerate contacts are
    reported as crossings (conservative for edge pruning).
    """
    P = as_points(P)
    Q = as_points(Q)
    a = as_point(a)
    b = as_point(b)

    def area2(o, p1, p2):
        return ((p1[..., 0] - o[..., 0]) * (p2[..., 1] - o[..., 1])
                - (p1[..., 1] - o[..., 1]) * (p2[..., 0] - o[..., 0]))

    d1 = area2(a[None, :], b[None, :], P)
    d2 = area2(a[None, :], b[None, :], Q)
    d3 = area2(P, Q, np.broadcast_to(a, P.shape))
    d4 = area2(P, Q, np.broadcast_to(b, P.shape))
    proper = ((d1 > eps) != (d2 > eps)) & ((d3 > eps) != (d4 > eps)) \
        & (np.abs(d1 - d2) > eps) & (np.abs(d3 - d4) > eps)
    # Conservative: treat grazing contact (either edge endpoint within eps of
    # the line while straddling) as a crossing.
    graze = (np.minimum(np.abs(d1), np.abs(d2)) <= eps) & ((d1 * d2) <= eps * eps) \
        & ((d3 * d4) < 0.0)
    return proper | graze


def segment_crosses_any(p, q, seg_a, seg_b, eps):
    """Does segment p->q properly cross any of the segments seg_a[i]->seg_b[i]?"""
    if len(seg_a) == 0:
        return False
    P = np.broadcast_to(as_point(p), (len(seg_a), 2))
    Q = np.broadcast_to(as_point(q), (len(seg_a), 2))
    for i in range(len(seg_a)):
        if edges_cross_segment(P[i:i + 1], Q[i:i + 1], seg_a[i], seg_b[i], eps)[0]:
            return True
    return False


def point_in_polygon_batch(pts, loop):
    """Even-odd crossing-number test for points against one closed loop."""
    p = as_points(pts)
    v = as_points(loop)
    n = len(v)
    inside = np.zeros(len(p), dtype=bool)
    x, y = p[:, 0], p[:, 1]
    for i in range(n):
        x0, y0 = v[i]
        x1, y1 = v[(i + 1) % n]
        cond = (y0 > y) != (y1 > y)
        if not cond.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        hit = cond & (x < x_cross)
        inside ^= hit
    return inside
