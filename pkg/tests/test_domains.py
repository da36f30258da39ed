import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhlab.domains import (BoundaryPoint, Comb, Disk, PolygonWithHoles,
                           Rectangle, make_comb_domain, same_boundary_point)
from qhlab.errors import InvalidParameterError, OutsideDomainError

from _oracles import comb_contains


class TestCombConstruction:
    def test_single_tooth_is_square_minus_half_slit(self):
        comb = make_comb_domain(1)
        assert comb.contains((0.49, 0.25))
        assert comb.contains((0.51, 0.25))
        assert not comb.contains((0.5, 0.25))   # on the slit
        assert comb.contains((0.5, 0.75))       # above the slit

    def test_two_teeth_positions(self):
        comb = make_comb_domain(2)
        lefts = sorted(f.a[0] for f in comb.boundary_faces()
                       if f.role == "tooth-left")
        assert lefts == [0.25, 0.5]

    def test_point_between_teeth_4_and_5(self):
        comb = make_comb_domain(5)
        p = (3 / 2 ** 7, 0.25)
        assert comb.contains(p)
        assert comb_contains(5, *p)  # direct set-difference predicate

    @pytest.mark.parametrize("bad", [0, -1])
    def test_bad_tooth_count(self, bad):
        with pytest.raises(InvalidParameterError):
            make_comb_domain(bad)

    def test_ambient_defaults_to_inner(self):
        assert make_comb_domain(2).ambient == "inner"

    def test_face_inventory(self):
        for J in (1, 2, 4):
            faces = make_comb_domain(J).boundary_faces()
            assert len(faces) == 4 + 3 * J
            assert sum(f.role == "tooth-cap" for f in faces) == J
            assert sum(f.role == "tooth-left" for f in faces) == J


class TestContains:
    def test_disk_center(self):
        assert Disk().contains((0.0, 0.0))

    def test_comb_on_tooth_false(self):
        assert not make_comb_domain(3).contains((0.25, 0.25))

    def test_comb_beside_tooth_true(self):
        comb = make_comb_domain(3)
        assert comb.contains((0.26, 0.25))
        assert comb_contains(3, 0.26, 0.25)

    def test_agreement_with_predicate(self, comb3):
        rng = np.random.default_rng(0)
        pts = rng.uniform(0, 1, size=(300, 2))
        got = comb3.contains_batch(pts)
        want = [comb_contains(3, x, y) for x, y in pts]
        assert list(got) == want


class TestDistToBoundary:
    def test_disk_center(self):
        assert Disk().dist_to_boundary((0.0, 0.0)) == pytest.approx(1.0)

    def test_rectangle_nearest_side(self):
        assert Rectangle().dist_to_boundary((0.5, 0.25)) == pytest.approx(0.25)

    def test_comb_nearest_tooth(self):
        # brute force over the enumerated boundary segments puts the nearest
        # primitive at the tooth x=1/4
        comb = make_comb_domain(3)
        assert comb.dist_to_boundary((0.3, 0.25)) == pytest.approx(0.05)

    def test_outside_raises(self):
        with pytest.raises(OutsideDomainError):
            Disk().dist_to_boundary((2.0, 0.0))
        with pytest.raises(OutsideDomainError):
            make_comb_domain(2).dist_to_boundary((0.5, 0.25))

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99),
           st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    def test_one_lipschitz(self, x0, y0, x1, y1):
        comb = make_comb_domain(3)
        p, q = np.array([x0, y0]), np.array([x1, y1])
        dp = comb.delta_batch(p[None])[0]
        dq = comb.delta_batch(q[None])[0]
        assert abs(dp - dq) <= np.hypot(*(p - q)) + 1e-12

    @pytest.mark.parametrize("domain", [Disk(), Rectangle(), Comb(3)])
    def test_clearance_ball_avoids_boundary(self, domain):
        rng = np.random.default_rng(1)
        samples = domain.boundary_sample(200)
        x0, x1, y0, y1 = domain.bounding_box()
        for _ in range(25):
            p = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
            if not domain.contains(p):
                continue
            d = domain.dist_to_boundary(p)
            assert d > 0
            for bp in samples:
                assert np.hypot(*(bp.pos() - p)) >= d - 1e-9


class TestBoundarySample:
    def test_disk_four_cardinal_points(self):
        pts = Disk().boundary_sample(4)
        angles = sorted(math.atan2(p.position[1], p.position[0]) % (2 * math.pi)
                        for p in pts)
        assert np.allclose(angles, [0, math.pi / 2, math.pi, 3 * math.pi / 2],
                           atol=1e-12)

    def test_rectangle_side_midpoints(self):
        pts = Rectangle().boundary_sample(4)
        got = sorted(tuple(np.round(p.position, 12)) for p in pts)
        assert got == [(0.0, 0.5), (0.5, 0.0), (0.5, 1.0), (1.0, 0.5)]

    def test_comb_samples_both_tooth_sides(self):
        pts = make_comb_domain(2).boundary_sample(20)
        for tooth in (0.25, 0.5):
            sides = {p.corridor[0] for p in pts
                     if abs(p.position[0] - tooth) < 1e-9 and p.position[1] < 0.5}
            assert sides == {-1.0, 1.0}

    def test_corridor_distinguishes_slit_sides(self):
        comb = make_comb_domain(2)
        left = BoundaryPoint((0.25, 0.2), (-1.0, 0.0))
        right = BoundaryPoint((0.25, 0.2), (1.0, 0.0))
        tol = comb.boundary_tol()
        assert not same_boundary_point(left, right, tol)
        assert same_boundary_point(left, left, tol)

    def test_count(self):
        for n in (1, 7, 33):
            assert len(Disk().boundary_sample(n)) == n
            assert len(make_comb_domain(3).boundary_sample(n)) == n

    def test_comb_piece_midpoints_hit_corridor_bottoms(self):
        comb = make_comb_domain(6)
        mids = {round(p.position[0], 12) for p in comb.corridor_bottom_midpoints()}
        for j in range(1, 6):
            assert round(3 / 2 ** (j + 2), 12) in mids


class TestArcCoordinates:
    def test_disk_arc_distance(self):
        d = Disk()
        a = (1.0, 0.0)
        b = (0.0, 1.0)
        assert d.arc_distance(a, b) == pytest.approx(math.pi / 2, rel=1e-9)

    def test_wraparound(self):
        d = Disk()
        th = 2 * math.pi * 0.95
        a = (math.cos(th), math.sin(th))
        assert d.arc_distance(a, (1.0, 0.0)) == pytest.approx(
            2 * math.pi * 0.05, rel=1e-6)

    def test_projection_lands_on_boundary(self):
        comb = make_comb_domain(2)
        p = comb.project_to_boundary(np.array([0.26, 0.2]))
        assert np.hypot(p[0] - 0.25, 0.0) < 1e-9 or p[1] < 1e-9


class TestPolygon:
    def test_l_shape(self):
        outer = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
        poly = PolygonWithHoles(outer)
        assert poly.contains((0.5, 0.5))
        assert poly.contains((1.5, 0.5))
        assert not poly.contains((1.5, 1.5))
        assert not poly.is_convex()

    def test_hole(self):
        poly = PolygonWithHoles([(0, 0), (3, 0), (3, 3), (0, 3)],
                                holes=[[(1, 1), (2, 1), (2, 2), (1, 2)]])
        assert poly.contains((0.5, 0.5))
        assert not poly.contains((1.5, 1.5))
        assert poly.dist_to_boundary((0.5, 1.5)) == pytest.approx(0.5)

    def test_degenerate_loop_rejected(self):
        with pytest.raises(InvalidParameterError):
            PolygonWithHoles([(0, 0), (1, 0)])
