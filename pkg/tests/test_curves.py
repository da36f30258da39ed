import math

import numpy as np
import pytest

from qhlab.curves import (d_length, parametrized_curve, qh_length,
                          qh_parametrize)
from qhlab.domains import Disk, Rectangle
from qhlab.errors import (BoundaryContactError, InvalidParameterError,
                          OutsideDomainError)


def radial_curve(n=400, r=0.5):
    xs = np.linspace(0.0, r, n)
    return np.column_stack([xs, np.zeros(n)])


class TestDLength:
    def test_unit_segment(self):
        assert d_length([(0, 0), (1, 0)]) == 1.0

    def test_l_path(self):
        assert d_length([(0, 0), (1, 0), (1, 1)]) == 2.0

    def test_single_vertex(self):
        assert d_length([(0.3, 0.4)]) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            d_length(np.zeros((0, 2)))

    def test_quarter_circle(self):
        th = np.linspace(0, math.pi / 2, 64)
        poly = np.column_stack([np.cos(th), np.sin(th)])
        assert d_length(poly) == pytest.approx(math.pi / 2, abs=1e-3)


class TestQhLength:
    def test_single_point_zero(self):
        assert qh_length(Disk(), [(0.1, 0.2)]) == 0.0

    def test_disk_radial_log2(self):
        # integral of dr/(1-r) from 0 to 1/2
        got = qh_length(Disk(), [(0, 0), (0.5, 0)])
        assert got == pytest.approx(math.log(2), abs=1e-6)

    def test_rect_vertical_log2(self):
        got = qh_length(Rectangle(), [(0.5, 0.5), (0.5, 0.75)])
        assert got == pytest.approx(math.log(2), abs=1e-6)

    def test_outside_vertex(self):
        with pytest.raises(OutsideDomainError):
            qh_length(Disk(), [(0, 0), (2.0, 0)])

    def test_boundary_contact(self):
        with pytest.raises(BoundaryContactError):
            qh_length(Rectangle(), [(0.5, 0.5), (0.5, 1.0)])


class TestParametrization:
    def test_endpoints(self):
        c = parametrized_curve(Disk(), radial_curve())
        assert np.allclose(qh_parametrize(c, 0.0), c.vertices[0])
        assert np.allclose(qh_parametrize(c, c.k_length), c.vertices[-1])

    def test_disk_half_log2_point(self):
        # invert the radial antiderivative: r = 1 - 2^{-1/2}
        c = parametrized_curve(Disk(), radial_curve())
        p = qh_parametrize(c, math.log(2) / 2)
        assert p[0] == pytest.approx(1 - 2 ** -0.5, abs=1e-3)
        assert p[1] == pytest.approx(0.0, abs=1e-12)

    def test_out_of_range(self):
        c = parametrized_curve(Disk(), radial_curve())
        with pytest.raises(InvalidParameterError):
            qh_parametrize(c, c.k_length * 1.5)
        with pytest.raises(InvalidParameterError):
            qh_parametrize(c, -0.5)

    def test_tables_monotone(self):
        c = parametrized_curve(Disk(), radial_curve())
        assert np.all(np.diff(c.cum_d) >= 0)
        assert np.all(np.diff(c.cum_k) >= 0)
        assert c.cum_d[-1] == pytest.approx(0.5, rel=1e-12)

    def test_lipschitz_bound_on_knots(self):
        # |g(s) - g(t)| <= M |s - t| with M = max delta on the curve
        bent = [(0.0, 0.0), (0.3, 0.2), (0.5, -0.1), (0.7, 0.0)]
        c = parametrized_curve(Disk(), bent)
        M = c.lipschitz_m
        n = len(c.vertices)
        for i in range(n):
            for j in range(i + 1, n):
                d = np.hypot(*(c.vertices[j] - c.vertices[i]))
                assert d <= M * (c.cum_k[j] - c.cum_k[i]) + 1e-12

    def test_metric_speed_integral_bound(self):
        # d(g(s), g(t)) <= integral of delta(g(tau)) d tau over [s, t]
        disk = Disk()
        bent = [(0.0, 0.0), (0.3, 0.2), (0.5, -0.1), (0.7, 0.0)]
        c = parametrized_curve(disk, bent)
        deltas = c.vertex_delta
        n = len(c.vertices)
        for i in range(n):
            for j in range(i + 1, n):
                d = np.hypot(*(c.vertices[j] - c.vertices[i]))
                # trapezoid of delta along the k-parameter between knots
                integral = 0.0
                for m in range(i, j):
                    integral += (c.cum_k[m + 1] - c.cum_k[m]) \
                        * (deltas[m] + deltas[m + 1]) / 2.0
                assert d <= integral * (1 + 5e-3) + 1e-9

    def test_chained_parametrization_consistent(self):
        c = parametrized_curve(Disk(), radial_curve())
        # l_k(g|[0,t]) = t at every knot by construction
        for t in np.linspace(0, c.k_length, 9):
            p = qh_parametrize(c, t)
            assert np.isfinite(p).all()
