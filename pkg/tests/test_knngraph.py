import numpy as np
import pytest

from oodgrid import lap
from oodgrid.knngraph import (
    InvalidKError,
    approx_layout,
    build_knn_graph,
    dense_baseline,
    lattice_centers,
    repair,
    repair_with_trace,
    run_lap_benchmark,
)
from oodgrid.synthetic import clustered_points_2d

# the worked 4+4 example: instances on the left edge, cells on the right,
# vertical positions chosen so k=2 over-fills the two middle cells
FIG_POINTS = np.array([[0.0, 2.4], [0.0, 1.6], [0.0, 1.0], [0.0, 0.0]])
FIG_CENTERS = np.array([[1.5, 2.4], [1.5, 1.6], [1.5, 1.0], [1.5, 0.0]])


class TestBuild:
    def test_figure_initialization(self):
        g = build_knn_graph(FIG_POINTS, FIG_CENTERS, 2)
        assert [list(g.xadj[i]) for i in range(4)] == [[0, 1], [1, 2], [1, 2], [2, 3]]
        assert g.deg_y.tolist() == [1, 3, 3, 1]
        assert np.all(g.deg_x == 2)

    def test_complete_graph_when_k_equals_n(self):
        rng = np.random.default_rng(0)
        g = build_knn_graph(rng.random((7, 2)), rng.random((7, 2)), 7)
        assert np.all(g.deg_x == 7)
        assert np.all(g.deg_y == 7)

    def test_grid_2025_degrees(self):
        rng = np.random.default_rng(1)
        points = clustered_points_2d(2025, rng)
        bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
        centers = lattice_centers(bbox, 45, 45)
        g = build_knn_graph(points, centers, 100, grid_shape=(45, 45))
        assert np.all(g.deg_x == 100)
        assert int(g.deg_y.sum()) == 202500

    def test_invalid_k(self):
        rng = np.random.default_rng(2)
        pts = rng.random((5, 2))
        with pytest.raises(InvalidKError):
            build_knn_graph(pts, pts, 6)
        with pytest.raises(InvalidKError):
            build_knn_graph(pts, pts, 0)

    def test_lattice_path_matches_brute_path(self):
        for trial in range(8):
            rng = np.random.default_rng(100 + trial)
            side = int(rng.integers(4, 14))
            n = side * side
            points = rng.random((n, 2))
            bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
            centers = lattice_centers(bbox, side, side)
            k = int(rng.integers(1, min(n, 12)))
            g_lat = build_knn_graph(points, centers, k, grid_shape=(side, side))
            g_gen = build_knn_graph(points, centers, k)
            assert np.array_equal(g_lat.xadj, g_gen.xadj)
            assert np.allclose(g_lat.xw, g_gen.xw)

    def test_edges_sorted_by_cell_index(self):
        rng = np.random.default_rng(3)
        g = build_knn_graph(rng.random((30, 2)), rng.random((30, 2)), 5)
        assert np.all(np.diff(g.xadj, axis=1) > 0)


class TestRepair:
    def test_figure_trace(self):
        g = build_knn_graph(FIG_POINTS, FIG_CENTERS, 2)
        repaired, trace = repair_with_trace(g)
        assert {tuple(e) for e in trace.deleted.tolist()} == {(0, 1), (3, 2)}
        assert {tuple(e) for e in trace.inserted.tolist()} == {(0, 3), (3, 0)}
        assert [list(repaired.xadj[i]) for i in range(4)] == [[0, 3], [1, 2], [1, 2], [0, 3]]
        assert np.all(repaired.deg_y == 2)
        assert lap.solve_sparse(repaired).perm.tolist() == [0, 1, 2, 3]

    def test_already_regular_graph_unchanged(self):
        rng = np.random.default_rng(4)
        g = build_knn_graph(rng.random((6, 2)), rng.random((6, 2)), 6)
        repaired, trace = repair_with_trace(g)
        assert len(trace.deleted) == 0
        assert np.array_equal(repaired.xadj, g.xadj)

    def test_random_instances_become_regular_and_feasible(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            n = int(rng.integers(16, 401))
            k = int(rng.integers(2, 9))
            g = build_knn_graph(rng.random((n, 2)), rng.random((n, 2)), k)
            repaired = repair(g)
            assert np.all(repaired.deg_y == k)
            assert np.all(repaired.deg_x == k)
            a = lap.solve_sparse(repaired)
            assert np.array_equal(np.sort(a.perm), np.arange(n))

    def test_trace_replay_conserves_degree_sum(self):
        rng = np.random.default_rng(6)
        n, k = 100, 4
        g = build_knn_graph(rng.random((n, 2)), rng.random((n, 2)), k)
        repaired, trace = repair_with_trace(g)
        deg = g.deg_y.astype(int)
        deleted_once = set()
        for (dx, dy), (ix, iy) in zip(trace.deleted.tolist(), trace.inserted.tolist()):
            assert dx == ix  # a swap moves one endpoint of one instance
            assert (dx, dy) not in deleted_once  # each edge deleted at most once
            deleted_once.add((dx, dy))
            deg[dy] -= 1
            deg[iy] += 1
            assert deg.sum() == k * n  # conserved after every delete+insert pair
        assert np.array_equal(deg, repaired.deg_y)
        assert trace.edge_ops <= 2 * k * n

    def test_imbalance_is_monotone_nonincreasing(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(25, 200))
            k = int(rng.integers(2, 7))
            g = build_knn_graph(rng.random((n, 2)), rng.random((n, 2)), k)
            _, trace = repair_with_trace(g)
            if len(trace.imbalance_sizes) > 1:
                assert np.all(np.diff(trace.imbalance_sizes) <= 0)
            if len(trace.imbalance_sizes) > 0:
                assert trace.imbalance_sizes[-1] == 0

    def test_lattice_and_generic_repairs_agree(self):
        for trial in range(6):
            rng = np.random.default_rng(200 + trial)
            side = int(rng.integers(5, 12))
            n = side * side
            points = rng.random((n, 2))
            bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
            centers = lattice_centers(bbox, side, side)
            k = int(rng.integers(2, 9))
            r_lat = repair(build_knn_graph(points, centers, k, grid_shape=(side, side)))
            r_gen = repair(build_knn_graph(points, centers, k))
            assert np.array_equal(r_lat.xadj, r_gen.xadj)


class TestApproxLayout:
    def test_complete_graph_is_exact(self):
        rng = np.random.default_rng(8)
        points = rng.random((49, 2))
        bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
        centers = lattice_centers(bbox, 7, 7)
        _, report = approx_layout(points, centers, 49, grid_shape=(7, 7), with_baseline=True)
        assert report.cr == 0.0

    def test_optimum_is_lower_bound(self):
        rng = np.random.default_rng(9)
        for trial in range(5):
            points = clustered_points_2d(225, np.random.default_rng(trial))
            bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
            centers = lattice_centers(bbox, 15, 15)
            k = int(rng.integers(3, 30))
            _, report = approx_layout(points, centers, k, grid_shape=(15, 15), with_baseline=True)
            assert report.cr >= 0.0
            assert report.c_opt <= report.c_k

    def test_quality_improves_with_k(self):
        ks = [5, 15, 40, 100]
        means = []
        for k in ks:
            crs = []
            for trial in range(4):
                points = clustered_points_2d(400, np.random.default_rng(trial))
                bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
                centers = lattice_centers(bbox, 20, 20)
                _, report = approx_layout(points, centers, k, grid_shape=(20, 20), with_baseline=True)
                crs.append(report.cr)
            means.append(np.mean(crs))
        assert np.all(np.diff(means) <= 1e-12)

    def test_quality_trend_over_standard_k_sweep(self):
        # mean cost ratio weakly decreases through k = 20..500, averaged
        # over 10 trials on fixed synthetic data
        ks = [20, 50, 100, 200, 500]
        crs = {k: [] for k in ks}
        for trial in range(10):
            points = clustered_points_2d(576, np.random.default_rng(1000 + trial))
            bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
            centers = lattice_centers(bbox, 24, 24)
            from oodgrid.knngraph import dense_baseline as _dense

            base, _ = _dense(points, centers)
            for k in ks:
                asn, _ = approx_layout(points, centers, k, grid_shape=(24, 24))
                crs[k].append((asn.total_cost - base.total_cost) / base.total_cost)
        means = [np.mean(crs[k]) for k in ks]
        assert np.all(np.diff(means) <= 1e-12), means
        assert all(m >= -1e-12 for m in means)

    def test_timing_fields(self):
        points = clustered_points_2d(100, np.random.default_rng(0))
        bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
        centers = lattice_centers(bbox, 10, 10)
        _, report = approx_layout(points, centers, 10, grid_shape=(10, 10))
        assert report.t_seconds >= 0.0
        assert report.c_opt is None and report.cr is None


class TestBenchmark:
    def test_rows_shape(self):
        rows = run_lap_benchmark(64, [4, 8], trials=2, seed=0)
        assert len(rows) == 4
        for row in rows:
            assert row.n == 64
            assert row.c_opt is not None
            assert row.cr >= 0.0
            assert row.t_knn_seconds >= 0.0

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            run_lap_benchmark(50, [4], trials=1)

    def test_baseline_agrees_with_complete_approx(self):
        points = clustered_points_2d(36, np.random.default_rng(1))
        bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
        centers = lattice_centers(bbox, 6, 6)
        base, _ = dense_baseline(points, centers)
        asn, _ = approx_layout(points, centers, 36, grid_shape=(6, 6))
        assert asn.total_cost == pytest.approx(base.total_cost, abs=1e-9)
