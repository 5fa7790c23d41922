import itertools

import numpy as np
import pytest

from oodgrid import lap
from oodgrid.gridlayout import layout, make_grid
from oodgrid.synthetic import clustered_points_2d


class TestMakeGrid:
    def test_square_sides(self):
        pts = np.random.default_rng(0).random((5, 2))
        spec = make_grid(pts, 2025)
        assert (spec.m, spec.n) == (45, 45)
        spec = make_grid(pts, 5)
        assert (spec.m, spec.n) == (3, 3)

    def test_single_point(self):
        spec = make_grid(np.array([[2.0, 3.0]]), 1)
        assert (spec.m, spec.n) == (1, 1)
        assert np.allclose(spec.centers[0], [2.0, 3.0], atol=1e-6)

    def test_centers_partition_bbox(self):
        pts = np.array([[0.0, 0.0], [4.0, 2.0], [1.0, 1.0], [3.0, 0.5]])
        spec = make_grid(pts, 4)
        assert spec.bbox == (0.0, 0.0, 4.0, 2.0)
        # 2x2 grid: centers at quarter points, row 0 on top
        assert np.allclose(spec.centers, [[1.0, 1.5], [3.0, 1.5], [1.0, 0.5], [3.0, 0.5]])


class TestLayout:
    def test_points_in_perfect_grid_pattern_map_to_own_cells(self):
        # the tight bounding box of the four points yields a slightly
        # smaller grid, so the cost is the unavoidable symmetric offset,
        # but every point still lands in its own cell at the optimum
        from oodgrid.knngraph import lattice_centers

        pts = make_grid(np.array([[0.0, 0.0], [1.0, 1.0]]), 4).centers
        out = layout(pts, k=4)
        assert np.array_equal(out.cell_of_sample, np.arange(4))
        norm = (pts - [0.25, 0.25]) / 0.5  # unit-square geometry layout solved
        centers = lattice_centers((0.0, 0.0, 1.0, 1.0), 2, 2)
        costs = np.sqrt(((norm[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2))
        assert out.total_cost == pytest.approx(lap.brute_force(costs).total_cost, abs=1e-9)

    def test_complete_k_matches_dense_optimum(self):
        pts = clustered_points_2d(49, np.random.default_rng(1))
        out = layout(pts, k=49, with_baseline=True)
        assert out.report.cr == pytest.approx(0.0, abs=1e-12)

    def test_k_clamped_with_warning(self):
        pts = clustered_points_2d(25, np.random.default_rng(2))
        with pytest.warns(UserWarning, match="clamping"):
            out = layout(pts, k=9999)
        assert out.k_used == 25

    def test_bijection_over_cells(self):
        pts = clustered_points_2d(37, np.random.default_rng(3))
        out = layout(pts, k=10)
        # injective on real samples, 37 occupied cells out of 49
        assert len(set(out.cell_of_sample.tolist())) == 37
        assert int((out.sample_of_cell >= 0).sum()) == 37
        occupied = out.sample_of_cell[out.sample_of_cell >= 0]
        assert sorted(occupied.tolist()) == list(range(37))

    def test_padding_neutrality_vs_rectangular_brute_force(self):
        # with the complete graph, dropping the zero-cost padding rows must
        # reproduce the exact rectangular optimum
        for seed in range(6):
            rng = np.random.default_rng(seed)
            n_real = int(rng.integers(2, 8))
            pts = rng.random((n_real, 2))
            out = layout(pts, k=9)  # grid is at most 3x3 -> complete
            n_cells = out.grid.n_cells
            assert n_cells <= 9
            # oracle: enumerate all injections of samples into cells on the
            # normalized geometry the layout solved
            min_x, min_y, max_x, max_y = out.grid.bbox
            norm = (pts - [min_x, min_y]) / [max_x - min_x, max_y - min_y]
            from oodgrid.knngraph import lattice_centers

            centers = lattice_centers((0.0, 0.0, 1.0, 1.0), out.grid.m, out.grid.n)
            dist = np.sqrt(((norm[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2))
            combos = np.array(list(itertools.permutations(range(n_cells), n_real)))
            costs = dist[np.arange(n_real), combos].sum(axis=1)
            best = int(costs.argmin())
            assert out.total_cost == pytest.approx(costs[best], abs=1e-9)
            assert np.array_equal(out.cell_of_sample, combos[best])

    def test_clustered_points_stay_contiguous(self):
        rng = np.random.default_rng(4)
        n_per = 60
        centers2d = np.array([[0.2, 0.2], [0.8, 0.8], [0.2, 0.8]])
        pts = np.vstack([c + rng.normal(0, 0.05, size=(n_per, 2)) for c in centers2d])
        labels = np.repeat(np.arange(3), n_per)
        out = layout(pts, k=40)
        rows_cols = np.array([out.grid.cell_rowcol(c) for c in out.cell_of_sample])
        same, cross = [], []
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = abs(rows_cols[i][0] - rows_cols[j][0]) + abs(rows_cols[i][1] - rows_cols[j][1])
                (same if labels[i] == labels[j] else cross).append(d)
        assert np.mean(same) < np.mean(cross)

    def test_deterministic(self):
        pts = clustered_points_2d(64, np.random.default_rng(5))
        a = layout(pts, k=12)
        b = layout(pts, k=12)
        assert np.array_equal(a.cell_of_sample, b.cell_of_sample)

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            layout(np.random.default_rng(6).random((5, 2)), k=0)
