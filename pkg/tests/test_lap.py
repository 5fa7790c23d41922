import math

import numpy as np
import pytest

from oodgrid import lap


def complete_csr(w):
    n = w.shape[0]
    indptr = np.arange(n + 1) * n
    indices = np.tile(np.arange(n), n)
    return n, indptr, indices, w.ravel()


class TestSolveDense:
    def test_zero_diagonal_forces_identity(self):
        a = lap.solve_dense([[0.0, 1.0], [1.0, 0.0]])
        assert a.perm.tolist() == [0, 1]
        assert a.total_cost == 0.0

    def test_single_cell(self):
        a = lap.solve_dense([[3.5]])
        assert a.perm.tolist() == [0]
        assert a.total_cost == 3.5

    def test_matches_brute_force_on_random_5x5(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            w = rng.random((5, 5))
            assert lap.solve_dense(w).total_cost == pytest.approx(
                lap.brute_force(w).total_cost, abs=1e-12
            )

    def test_exact_equality_on_integer_costs(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(2, 8))
            w = rng.integers(0, 10, size=(n, n)).astype(float)
            assert lap.solve_dense(w).total_cost == lap.brute_force(w).total_cost

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        w = rng.integers(0, 3, size=(8, 8)).astype(float)  # plenty of ties
        first = lap.solve_dense(w)
        for _ in range(3):
            assert np.array_equal(lap.solve_dense(w).perm, first.perm)

    def test_total_cost_accumulation(self):
        rng = np.random.default_rng(4)
        w = rng.random((60, 60))
        a = lap.solve_dense(w)
        exact = math.fsum(w[i, a.perm[i]] for i in range(60))
        assert abs(a.total_cost - exact) <= 1e-9 * 60

    def test_rejects_bad_input(self):
        with pytest.raises(lap.InvalidCostMatrixError):
            lap.solve_dense(np.ones((2, 3)))
        with pytest.raises(lap.InvalidCostMatrixError):
            lap.solve_dense([[np.nan, 1.0], [1.0, 0.0]])
        with pytest.raises(lap.InvalidCostMatrixError):
            lap.solve_dense([[np.inf, 1.0], [1.0, 0.0]])
        with pytest.raises(lap.InvalidCostMatrixError):
            lap.solve_dense([[-1.0, 1.0], [1.0, 0.0]])

    def test_dual_certificate(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(2, 40))
            w = rng.random((n, n))
            a = lap.solve_dense(w)
            u_star = w[np.arange(n), a.perm] - a.col_prices[a.perm]
            slack = (w - a.col_prices[None, :]) - u_star[:, None]
            assert slack.min() > -1e-9

    def test_dual_certificate_exact_on_integers(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(2, 15))
            w = rng.integers(0, 50, size=(n, n)).astype(float)
            a = lap.solve_dense(w)
            u_star = w[np.arange(n), a.perm] - a.col_prices[a.perm]
            slack = (w - a.col_prices[None, :]) - u_star[:, None]
            assert slack.min() >= 0.0

    def test_perm_is_bijection(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(1, 50))
            a = lap.solve_dense(rng.random((n, n)))
            assert np.array_equal(np.sort(a.perm), np.arange(n))


class TestSolveSparse:
    def test_figure_graph_yields_diagonal_matching(self):
        # 2-regular graph on 4+4 vertices, weights from the figure geometry
        ys = [2.4, 1.6, 1.0, 0.0]
        dist = lambda i, j: math.hypot(1.5, ys[i] - ys[j])
        edges = {0: [0, 3], 1: [1, 2], 2: [1, 2], 3: [0, 3]}
        indptr = [0]
        indices = []
        data = []
        for i in range(4):
            for j in edges[i]:
                indices.append(j)
                data.append(dist(i, j))
            indptr.append(len(indices))
        a = lap.solve_sparse_csr(4, np.array(indptr), np.array(indices), np.array(data),
                                 expected_degree=2)
        assert a.perm.tolist() == [0, 1, 2, 3]
        assert a.total_cost == pytest.approx(4 * 1.5)

    def test_complete_graph_reproduces_dense_bit_for_bit(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            n = int(rng.integers(2, 40))
            w = rng.random((n, n))
            d = lap.solve_dense(w)
            s = lap.solve_sparse_csr(*complete_csr(w), expected_degree=n)
            assert np.array_equal(d.perm, s.perm)
            assert d.total_cost == s.total_cost

    def test_complete_graph_n30_cost_equality(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            w = rng.random((30, 30))
            d = lap.solve_dense(w)
            s = lap.solve_sparse_csr(*complete_csr(w), expected_degree=30)
            assert s.total_cost == d.total_cost

    def test_degree_precondition(self):
        # rows have degrees 2 and 1
        indptr = np.array([0, 2, 3])
        indices = np.array([0, 1, 0])
        data = np.array([1.0, 2.0, 3.0])
        with pytest.raises(lap.IrregularGraphError):
            lap.solve_sparse_csr(2, indptr, indices, data, expected_degree=2)

    def test_infeasible_graph_detected(self):
        # both rows see only column 0; no perfect matching exists
        indptr = np.array([0, 1, 2])
        indices = np.array([0, 0])
        data = np.array([1.0, 2.0])
        with pytest.raises(lap.InfeasibleGraphError):
            lap.solve_sparse_csr(2, indptr, indices, data)

    def test_sparse_dual_certificate_over_graph_edges(self):
        rng = np.random.default_rng(10)
        for _ in range(30):
            n = int(rng.integers(3, 25))
            w = rng.random((n, n))
            s = lap.solve_sparse_csr(*complete_csr(w), expected_degree=n)
            u_star = w[np.arange(n), s.perm] - s.col_prices[s.perm]
            slack = (w - s.col_prices[None, :]) - u_star[:, None]
            assert slack.min() > -1e-9


class TestBruteForce:
    def test_trivial(self):
        assert lap.brute_force([[0.0, 1.0], [1.0, 0.0]]).total_cost == 0.0
        assert lap.brute_force([[5.0]]).total_cost == 5.0

    def test_size_limit(self):
        with pytest.raises(lap.SizeLimitError):
            lap.brute_force(np.ones((10, 10)))

    def test_agreement_with_dense_on_1000_random_6x6(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            w = rng.integers(0, 30, size=(6, 6)).astype(float)
            assert lap.brute_force(w).total_cost == lap.solve_dense(w).total_cost
