import numpy as np
import pytest

from qhlab.domains import Disk, Rectangle, make_comb_domain
from qhlab.errors import InvalidParameterError, ResolutionTooCoarseError
from qhlab.graph import build_graph

from _oracles import _segment_hits_tooth, comb_teeth


class TestBuild:
    def test_rect_quarter_grid(self):
        g = build_graph(Rectangle(), 0.25, connectivity=8)
        assert g.n_nodes == 9
        xs = sorted(set(np.round(g.node_xy[:, 0], 12)))
        assert xs == [0.25, 0.5, 0.75]

    def test_disk_center_node(self):
        g = build_graph(Disk(), 0.5, connectivity=8)
        i = g.snap((0.0, 0.0))
        assert np.allclose(g.node_xy[i], [0, 0])
        assert g.node_delta[i] == pytest.approx(1.0)

    def test_row_major_order(self):
        g = build_graph(Rectangle(), 0.25, connectivity=8)
        ij = g.node_ij
        keys = ij[:, 1] * 10 + ij[:, 0]
        assert np.all(np.diff(keys) > 0)

    def test_rebuild_identical(self):
        g1 = build_graph(Disk(), 1 / 16, connectivity=16)
        g2 = build_graph(Disk(), 1 / 16, connectivity=16)
        assert np.array_equal(g1.node_xy, g2.node_xy)
        assert np.array_equal(g1.indices, g2.indices)
        assert np.array_equal(g1.w_k, g2.w_k)

    def test_bad_connectivity(self):
        with pytest.raises(InvalidParameterError):
            build_graph(Disk(), 0.1, connectivity=12)

    def test_too_coarse(self):
        with pytest.raises(ResolutionTooCoarseError):
            build_graph(Rectangle((0, 0.001), (0, 0.001)), 0.25)

    def test_fringe_nodes_thin_shell(self):
        g = build_graph(Disk(), 1 / 32, connectivity=16)
        assert np.all(g.node_delta >= g.h / 4)
        if len(g.fringe_delta):
            assert np.all(g.fringe_delta < g.h / 4)
            assert np.all(g.fringe_delta > 0)


class TestEdges:
    def test_no_edge_crosses_tooth(self):
        comb = make_comb_domain(2)
        g = build_graph(comb, 1 / 64, connectivity=16)
        # brute-force straddle check on every directed edge
        src = np.repeat(np.arange(g.n_nodes), np.diff(g.indptr))
        P = g.node_xy[src]
        Q = g.node_xy[g.indices]
        for t in comb_teeth(2):
            for (x0, y0), (x1, y1) in zip(P, Q):
                assert not _segment_hits_tooth(x0, y0, x1, y1, t)

    def test_edges_stay_inside(self):
        comb = make_comb_domain(2)
        g = build_graph(comb, 1 / 32, connectivity=16)
        src = np.repeat(np.arange(g.n_nodes), np.diff(g.indptr))
        P, Q = g.node_xy[src], g.node_xy[g.indices]
        for t in (np.arange(5) + 1.0) / 6.0:
            pts = P + t * (Q - P)
            assert comb.contains_batch(pts).all()

    def test_k_weight_bounds(self):
        g = build_graph(Disk(), 1 / 32, connectivity=16)
        src = np.repeat(np.arange(g.n_nodes), np.diff(g.indptr))
        P, Q = g.node_xy[src], g.node_xy[g.indices]
        dmax = np.maximum(g.node_delta[src], g.node_delta[g.indices])
        # lower bound holds exactly (enforced)
        assert np.all(g.w_k >= g.w_d / dmax - 1e-15)
        # upper bound: w_k <= l_d / min delta along samples
        ts = np.linspace(0, 1, 33)
        dmin = np.full(len(P), np.inf)
        for t in ts:
            pts = P + t * (Q - P)
            np.minimum(dmin, g.domain.delta_batch(pts), out=dmin)
        assert np.all(g.w_k <= g.w_d / dmin * (1 + 1e-9))

    def test_weights_symmetric(self):
        g = build_graph(Disk(), 1 / 16, connectivity=16)
        src = np.repeat(np.arange(g.n_nodes), np.diff(g.indptr))
        lut = {(int(u), int(v)): w for u, v, w in zip(src, g.indices, g.w_k)}
        for (u, v), w in lut.items():
            assert lut[(v, u)] == w

    def test_connectivity_degree(self):
        g8 = build_graph(Rectangle(), 1 / 32, connectivity=8)
        g16 = build_graph(Rectangle(), 1 / 32, connectivity=16)
        deg8 = np.diff(g8.indptr).max()
        deg16 = np.diff(g16.indptr).max()
        assert deg8 == 8
        assert deg16 == 16


class TestSnap:
    def test_snap_outside(self):
        from qhlab.errors import OutsideDomainError
        g = build_graph(Disk(), 1 / 16, connectivity=8)
        with pytest.raises(OutsideDomainError):
            g.snap((1.5, 0.0))

    def test_corridor_snap_respects_slit(self):
        comb = make_comb_domain(2)
        g = build_graph(comb, 1 / 64, connectivity=16)
        # approach point just left of the tooth at x = 1/4
        p = np.array([0.25 - 0.004, 0.2])
        i = g.snap_boundary_approach(p, (0.25, 0.2), (-1.0, 0.0))
        assert i is not None
        assert g.node_xy[i][0] < 0.25
        j = g.snap_boundary_approach(p, (0.25, 0.2), (1.0, 0.0))
        assert j is None or g.node_xy[j][0] > 0.25
