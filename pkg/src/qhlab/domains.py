"""Bounded planar domains: membership, boundary distance, boundary sampling.

A domain is an open, connected, bounded set whose boundary is a finite
union of line segments and circular arcs.  Boundary points carry an
optional approach corridor (inward unit direction) so the two sides of a
zero-thickness slit stay distinguishable under the inner metric.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameterError, OutsideDomainError
from .geometry import (as_point, as_points, edges_cross_vertical_slit,
                       edges_cross_segment, point_in_polygon_batch,
                       point_segment_distance_batch, project_point_to_segment,
                       segments_point_distance)

BOUNDARY_TOL_FACTOR = 1e-12  # point-on-boundary tolerance, times diam


@dataclass(frozen=True)
class BoundaryPoint:
    """A metric-boundary element: position plus optional approach corridor."""

    position: tuple
    corridor: Optional[tuple] = None

    def pos(self):
        return np.array(self.position, dtype=float)

    def corridor_vec(self):
        if self.corridor is None:
            return None
        return np.array(self.corridor, dtype=float)


def same_boundary_point(p: BoundaryPoint, q: BoundaryPoint, tol: float) -> bool:
    """Corridor-aware identity: equal position and non-opposing corridors."""
    if np.hypot(*(p.pos() - q.pos())) > tol:
        return False
    if p.corridor is None or q.corridor is None:
        return True
    return float(p.corridor_vec() @ q.corridor_vec()) > 0.0


@dataclass(frozen=True)
class SegmentFace:
    a: tuple
    b: tuple
    corridor: tuple  # inward unit normal
    face_id: int
    role: str
    component: int = 0

    @property
    def kind(self):
        return "segment"

    @property
    def length(self):
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def point_at(self, s):
        if self.length == 0.0:
            return np.array(self.a, dtype=float)
        t = s / self.length
        a = np.array(self.a)
        b = np.array(self.b)
        return a + t * (b - a)

    def corridor_at(self, s):
        return np.array(self.corridor, dtype=float)


@dataclass(frozen=True)
class ArcFace:
    center: tuple
    radius: float
    angle0: float
    angle1: float  # CCW, angle1 > angle0
    inward_sign: float  # +1: domain on the center side of the arc
    face_id: int
    role: str
    component: int = 0

    @property
    def kind(self):
        return "arc"

    @property
    def length(self):
        return self.radius * (self.angle1 - self.angle0)

    def point_at(self, s):
        ang = self.angle0 + s / self.radius
        return np.array([self.center[0] + self.radius * math.cos(ang),
                         self.center[1] + self.radius * math.sin(ang)])

    def corridor_at(self, s):
        ang = self.angle0 + s / self.radius
        n = np.array([math.cos(ang), math.sin(ang)])
        return -n if self.inward_sign > 0 else n


@dataclass(frozen=True)
class WalkPiece:
    """One stretch of the oriented boundary walk, referencing a face."""

    face: object
    s0: float  # interval inside the face, [s0, s1] in face arclength
    s1: float
    component: int

    @property
    def length(self):
        return self.s1 - self.s0

    def point_at(self, s):
        return self.face.point_at(self.s0 + s)

    def corridor_at(self, s):
        return self.face.corridor_at(self.s0 + s)

    def midpoint(self) -> BoundaryPoint:
        s = 0.5 * self.length
        return BoundaryPoint(tuple(self.point_at(s)), tuple(self.corridor_at(s)))


class DomainSpec:
    """Base class; subclasses implement the geometry kernel."""

    kind = "abstract"

    def __init__(self, ambient="euclidean"):
        if ambient not in ("euclidean", "inner"):
            raise InvalidParameterError(f"unknown ambient metric {ambient!r}")
        self.ambient = ambient

    # --- geometry kernel -------------------------------------------------
    def bounding_box(self):
        raise NotImplementedError

    def diameter(self):
        raise NotImplementedError

    def boundary_tol(self):
        return BOUNDARY_TOL_FACTOR * self.diameter()

    def contains_batch(self, pts):
        raise NotImplementedError

    def delta_batch(self, pts):
        """Distance from each point to the boundary (unsigned, exact)."""
        raise NotImplementedError

    def delta_xy(self, x, y):
        """delta on parallel coordinate arrays (hot path for quadrature)."""
        pts = np.empty((np.size(x), 2))
        pts[:, 0] = np.ravel(x)
        pts[:, 1] = np.ravel(y)
        return self.delta_batch(pts).reshape(np.shape(x))

    def contains(self, p) -> bool:
        return bool(self.contains_batch(as_points([p]))[0])

    def dist_to_boundary(self, p) -> float:
        if not self.contains(p):
            raise OutsideDomainError(f"point {tuple(as_point(p))} not in domain")
        return float(self.delta_batch(as_points([p]))[0])

    def is_convex(self) -> bool:
        return False

    def crossing_segments(self):
        """Boundary segments a grid edge could cross while staying 'inside'.

        Returns (A, B) arrays of shape (m, 2); empty for convex domains.
        """
        return np.zeros((0, 2)), np.zeros((0, 2))

    # --- boundary structure ----------------------------------------------
    def boundary_faces(self):
        raise NotImplementedError

    def walk_pieces(self):
        raise NotImplementedError

    def boundary_length(self):
        return sum(f.length for f in self.boundary_faces())

    def component_length(self, component):
        return sum(p.length for p in self.walk_pieces() if p.component == component)

    def boundary_sample(self, n):
        """n boundary points spread by arclength.

        Allocation is per positive-length face (largest remainder).  Segment
        faces are sampled at centered offsets so corners, whose corridor is
        ill-defined, are never hit; arc faces start at the arc origin.
        """
        if n < 1:
            raise InvalidParameterError("n must be >= 1")
        faces = [f for f in self.boundary_faces() if f.length > 0.0]
        total = sum(f.length for f in faces)
        raw = [n * f.length / total for f in faces]
        counts = [int(r) for r in raw]
        rem = n - sum(counts)
        order = sorted(range(len(faces)), key=lambda i: raw[i] - counts[i], reverse=True)
        for i in order[:rem]:
            counts[i] += 1
        out = []
        for f, m in zip(faces, counts):
            for i in range(m):
                if f.kind == "segment":
                    s = (i + 0.5) * f.length / m
                else:
                    s = i * f.length / m
                out.append(BoundaryPoint(tuple(f.point_at(s)), tuple(f.corridor_at(s))))
        return out

    def piece_midpoints(self):
        """Midpoint of every positive-length walk piece (deep-corridor probes)."""
        return [p.midpoint() for p in self.walk_pieces() if p.length > 0.0]

    def arc_coordinate(self, p):
        """(component, s) of the nearest boundary point along the walk."""
        p = as_point(p)
        best = None
        offset = {}
        run = {}
        for piece in self.walk_pieces():
            comp = piece.component
            run.setdefault(comp, 0.0)
            start = run[comp]
            run[comp] = start + piece.length
            if piece.length == 0.0:
                continue
            f = piece.face
            if f.kind == "segment":
                a = np.array(f.point_at(piece.s0))
                b = np.array(f.point_at(piece.s1))
                proj, t = project_point_to_segment(p, a, b)
                d = float(np.hypot(*(p - proj)))
                s = start + t * piece.length
            else:
                ang = math.atan2(p[1] - f.center[1], p[0] - f.center[0])
                a0 = f.angle0 + piece.s0 / f.radius
                a1 = f.angle0 + piece.s1 / f.radius
                while ang < a0:
                    ang += 2 * math.pi
                ang = min(ang, a1)
                q = np.array([f.center[0] + f.radius * math.cos(ang),
                              f.center[1] + f.radius * math.sin(ang)])
                d = float(np.hypot(*(p - q)))
                s = start + (ang - a0) * f.radius
            if best is None or d < best[0]:
                best = (d, comp, s)
        return best[1], best[2]

    def arc_distance(self, p, q):
        """Boundary-arclength distance; inf across components."""
        cp, sp = self.arc_coordinate(p)
        cq, sq = self.arc_coordinate(q)
        if cp != cq:
            return math.inf
        L = self.component_length(cp)
        d = abs(sp - sq)
        return min(d, L - d)

    def project_to_boundary(self, p):
        """Nearest boundary position (used to pin landing estimates)."""
        comp, s = self.arc_coordinate(p)
        pieces = [w for w in self.walk_pieces() if w.component == comp]
        run = 0.0
        for piece in pieces:
            if s <= run + piece.length:
                return piece.point_at(min(max(s - run, 0.0), piece.length))
            run += piece.length
        last = pieces[-1]
        return last.point_at(last.length)

    def outline_paths(self):
        """Polylines tracing the boundary, for figure output."""
        raise NotImplementedError

    def spec_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} ambient={self.ambient}>"


class Disk(DomainSpec):
    kind = "disk"

    def __init__(self, center=(0.0, 0.0), radius=1.0, ambient="euclidean"):
        super().__init__(ambient)
        if radius <= 0:
            raise InvalidParameterError("radius must be positive")
        self.center = (float(center[0]), float(center[1]))
        self.radius = float(radius)

    def bounding_box(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, cx + r, cy - r, cy + r)

    def diameter(self):
        return 2.0 * self.radius

    def is_convex(self):
        return True

    def contains_batch(self, pts):
        p = as_points(pts)
        r = np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1])
        return r < self.radius - self.boundary_tol()

    def delta_batch(self, pts):
        p = as_points(pts)
        r = np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1])
        return self.radius - r

    def delta_xy(self, x, y):
        dx = x - self.center[0]
        dy = y - self.center[1]
        return self.radius - np.sqrt(dx * dx + dy * dy)

    def boundary_faces(self):
        return [ArcFace(self.center, self.radius, 0.0, 2 * math.pi, +1.0, 0, "outer")]

    def walk_pieces(self):
        f = self.boundary_faces()[0]
        return [WalkPiece(f, 0.0, f.length, 0)]

    def outline_paths(self):
        ang = np.linspace(0.0, 2 * math.pi, 129)
        return [np.column_stack([self.center[0] + self.radius * np.cos(ang),
                                 self.center[1] + self.radius * np.sin(ang)])]

    def spec_dict(self):
        return {"kind": "disk", "center": list(self.center),
                "radius": self.radius, "ambient": self.ambient}


class Rectangle(DomainSpec):
    kind = "rectangle"

    def __init__(self, x_range=(0.0, 1.0), y_range=(0.0, 1.0), ambient="euclidean"):
        super().__init__(ambient)
        self.x0, self.x1 = float(x_range[0]), float(x_range[1])
        self.y0, self.y1 = float(y_range[0]), float(y_range[1])
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InvalidParameterError("empty rectangle")

    def bounding_box(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def diameter(self):
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0)

    def is_convex(self):
        return True

    def contains_batch(self, pts):
        p = as_points(pts)
        t = self.boundary_tol()
        return ((p[:, 0] > self.x0 + t) & (p[:, 0] < self.x1 - t)
                & (p[:, 1] > self.y0 + t) & (p[:, 1] < self.y1 - t))

    def delta_batch(self, pts):
        p = as_points(pts)
        return np.minimum.reduce([p[:, 0] - self.x0, self.x1 - p[:, 0],
                                  p[:, 1] - self.y0, self.y1 - p[:, 1]])

    def delta_xy(self, x, y):
        return np.minimum.reduce([x - self.x0, self.x1 - x,
                                  y - self.y0, self.y1 - y])

    def boundary_faces(self):
        x0, x1, y0, y1 = self.x0, self.x1, self.y0, self.y1
        return [
            SegmentFace((x0, y0), (x1, y0), (0.0, 1.0), 0, "outer"),
            SegmentFace((x1, y0), (x1, y1), (-1.0, 0.0), 1, "outer"),
            SegmentFace((x1, y1), (x0, y1), (0.0, -1.0), 2, "outer"),
            SegmentFace((x0, y1), (x0, y0), (1.0, 0.0), 3, "outer"),
        ]

    def walk_pieces(self):
        return [WalkPiece(f, 0.0, f.length, 0) for f in self.boundary_faces()]

    def outline_paths(self):
        x0, x1, y0, y1 = self.x0, self.x1, self.y0, self.y1
        return [np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])]

    def spec_dict(self):
        return {"kind": "rectangle", "x_range": [self.x0, self.x1],
                "y_range": [self.y0, self.y1], "ambient": self.ambient}


class Comb(DomainSpec):
    """Unit square minus the vertical slits {1/2^j} x [0, 1/2], j = 1..J."""

    kind = "comb"
    SLIT_TOP = 0.5

    def __init__(self, teeth, ambient="inner"):
        super().__init__(ambient)
        if int(teeth) != teeth or teeth < 1:
            raise InvalidParameterError("tooth count must be a positive integer")
        self.teeth = int(teeth)
        self.tooth_x = np.array([0.5 ** j for j in range(1, self.teeth + 1)])
        self._tooth_sorted = np.sort(self.tooth_x)

    def bounding_box(self):
        return (0.0, 1.0, 0.0, 1.0)

    def diameter(self):
        return math.sqrt(2.0)

    def contains_batch(self, pts):
        p = as_points(pts)
        t = self.boundary_tol()
        inside = ((p[:, 0] > t) & (p[:, 0] < 1.0 - t)
                  & (p[:, 1] > t) & (p[:, 1] < 1.0 - t))
        on_tooth = np.zeros(len(p), dtype=bool)
        for x in self.tooth_x:
            on_tooth |= (np.abs(p[:, 0] - x) <= t) & (p[:, 1] <= self.SLIT_TOP + t)
        return inside & ~on_tooth

    def delta_batch(self, pts):
        p = as_points(pts)
        return self.delta_xy(p[:, 0], p[:, 1])

    def delta_xy(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.minimum.reduce([x, 1.0 - x, y, 1.0 - y])
        dy = np.maximum(0.0, y - self.SLIT_TOP)
        dy *= dy
        # only the two x-adjacent teeth can be nearest
        xs = self._tooth_sorted
        j = np.searchsorted(xs, x)
        for side in (np.maximum(j - 1, 0), np.minimum(j, len(xs) - 1)):
            dx = x - xs[side]
            np.minimum(out, np.sqrt(dx * dx + dy), out=out)
        return out

    def crossing_segments(self):
        A = np.column_stack([self.tooth_x, np.zeros(self.teeth)])
        B = np.column_stack([self.tooth_x, np.full(self.teeth, self.SLIT_TOP)])
        return A, B

    def boundary_faces(self):
        faces = [
            SegmentFace((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), 0, "outer"),
            SegmentFace((1.0, 0.0), (1.0, 1.0), (-1.0, 0.0), 1, "outer"),
            SegmentFace((1.0, 1.0), (0.0, 1.0), (0.0, -1.0), 2, "outer"),
            SegmentFace((0.0, 1.0), (0.0, 0.0), (1.0, 0.0), 3, "outer"),
        ]
        fid = 4
        for x in self.tooth_x:
            tip = (float(x), self.SLIT_TOP)
            faces.append(SegmentFace((float(x), 0.0), tip, (-1.0, 0.0), fid, "tooth-left"))
            faces.append(SegmentFace((float(x), 0.0), tip, (1.0, 0.0), fid + 1, "tooth-right"))
            faces.append(SegmentFace(tip, tip, (0.0, 1.0), fid + 2, "tooth-cap"))
            fid += 3
        return faces

    def walk_pieces(self):
        faces = self.boundary_faces()
        bottom, right, top, left = faces[:4]
        by_x = {}
        for f in faces[4:]:
            if f.role == "tooth-cap":
                continue
            by_x.setdefault(f.a[0], {})[f.role] = f
        pieces = []
        prev = 0.0
        for x in sorted(by_x):
            pieces.append(WalkPiece(bottom, prev, x, 0))
            tooth = by_x[x]
            lf = tooth["tooth-left"]
            rf = tooth["tooth-right"]
            pieces.append(WalkPiece(lf, 0.0, lf.length, 0))
            pieces.append(WalkPiece(rf, 0.0, rf.length, 0))
            prev = x
        pieces.append(WalkPiece(bottom, prev, 1.0, 0))
        pieces.extend(WalkPiece(f, 0.0, f.length, 0) for f in (right, top, left))
        return pieces

    def corridor_bottom_midpoints(self):
        """Deepest bottom-edge probes, one per corridor between slits."""
        return [p.midpoint() for p in self.walk_pieces()
                if p.face.role == "outer" and p.face.face_id == 0 and p.length > 0.0]

    def outline_paths(self):
        paths = [np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)]
        for x in self.tooth_x:
            paths.append(np.array([[x, 0.0], [x, self.SLIT_TOP]]))
        return paths

    def spec_dict(self):
        return {"kind": "comb", "teeth": self.teeth, "ambient": self.ambient}


class PolygonWithHoles(DomainSpec):
    """Simple polygon minus simple polygonal holes; loops are not repaired."""

    kind = "polygon"

    def __init__(self, outer, holes=(), ambient="euclidean"):
        super().__init__(ambient)
        self.outer = as_points(outer)
        if len(self.outer) < 3:
            raise InvalidParameterError("outer loop needs >= 3 vertices")
        if _signed_area(self.outer) < 0:
            self.outer = self.outer[::-1].copy()
        self.holes = []
        for hole in holes:
            h = as_points(hole)
            if len(h) < 3:
                raise InvalidParameterError("hole loop needs >= 3 vertices")
            if _signed_area(h) > 0:
                h = h[::-1].copy()
            self.holes.append(h)

    def bounding_box(self):
        return (float(self.outer[:, 0].min()), float(self.outer[:, 0].max()),
                float(self.outer[:, 1].min()), float(self.outer[:, 1].max()))

    def diameter(self):
        x0, x1, y0, y1 = self.bounding_box()
        return math.hypot(x1 - x0, y1 - y0)

    def is_convex(self):
        if self.holes:
            return False
        v = self.outer
        n = len(v)
        for i in range(n):
            a, b, c = v[i], v[(i + 1) % n], v[(i + 2) % n]
            if np.cross(b - a, c - b) < -self.boundary_tol():
                return False
        return True

    def _all_segments(self):
        A, B = [], []
        for loop in [self.outer] + self.holes:
            A.append(loop)
            B.append(np.roll(loop, -1, axis=0))
        return np.vstack(A), np.vstack(B)

    def contains_batch(self, pts):
        p = as_points(pts)
        inside = point_in_polygon_batch(p, self.outer)
        for h in self.holes:
            inside &= ~point_in_polygon_batch(p, h)
        return inside & (self.delta_batch(p) > self.boundary_tol())

    def delta_batch(self, pts):
        p = as_points(pts)
        A, B = self._all_segments()
        out = np.full(len(p), np.inf)
        for a, b in zip(A, B):
            np.minimum(out, point_segment_distance_batch(p, a, b), out=out)
        return out

    def crossing_segments(self):
        if self.is_convex():
            return np.zeros((0, 2)), np.zeros((0, 2))
        return self._all_segments()

    def boundary_faces(self):
        faces = []
        fid = 0
        for comp, loop in enumerate([self.outer] + self.holes):
            nxt = np.roll(loop, -1, axis=0)
            for a, b in zip(loop, nxt):
                d = b - a
                nrm = np.array([-d[1], d[0]])
                nrm = nrm / np.hypot(*nrm)
                role = "outer" if comp == 0 else "hole"
                faces.append(SegmentFace(tuple(a), tuple(b), tuple(nrm), fid, role, comp))
                fid += 1
        return faces

    def walk_pieces(self):
        return [WalkPiece(f, 0.0, f.length, f.component) for f in self.boundary_faces()]

    def outline_paths(self):
        paths = [np.vstack([self.outer, self.outer[:1]])]
        paths.extend(np.vstack([h, h[:1]]) for h in self.holes)
        return paths

    def spec_dict(self):
        return {"kind": "polygon", "outer": self.outer.tolist(),
                "holes": [h.tolist() for h in self.holes], "ambient": self.ambient}


def _signed_area(loop):
    x, y = loop[:, 0], loop[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def make_comb_domain(teeth, ambient="inner") -> Comb:
    """Comb domain with the given tooth count; ambient defaults to inner."""
    return Comb(teeth, ambient=ambient)
