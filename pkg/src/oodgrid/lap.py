"""Exact solvers for the linear assignment problem.

Shortest-augmenting-path solvers of the Jonker-Volgenant family, one for
dense cost matrices and one for sparse bipartite graphs in CSR form, plus
a brute-force permutation oracle used by the test suite.

Both solvers start from a column reduction of the prices and then run one
Dijkstra-style augmentation per unassigned row, stopping each search as
soon as the frontier reaches the nearest free column.  Ties break toward
the lowest column index, which makes every solver here deterministic; on a
complete sparse graph the sparse solver reproduces the dense solver's
permutation exactly.

The dense solver keeps the full n x n matrix in memory (8 n^2 bytes),
fine for the desk scale this package targets (n up to a few thousand).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit


class InvalidCostMatrixError(ValueError):
    """Cost input is not a square matrix of finite, non-negative reals."""


class SizeLimitError(ValueError):
    """Brute-force oracle called on an instance larger than 9x9."""


class IrregularGraphError(ValueError):
    """Sparse solver called on a graph whose vertex degrees are not all k."""


class InfeasibleGraphError(RuntimeError):
    """The sparse graph admits no perfect matching (repair bug upstream)."""


@dataclass(frozen=True)
class Assignment:
    """A minimum-cost bijection rows -> columns.

    perm[i] is the column assigned to row i.  col_prices holds the dual
    prices v at termination; they certify optimality through
    w[i, j] - v[j] >= w[i, perm[i]] - v[perm[i]] for every edge (i, j)
    present in the solved graph.  The brute-force oracle carries no prices.
    """

    perm: np.ndarray
    total_cost: float
    col_prices: np.ndarray | None = None


def _validate_costs(costs) -> np.ndarray:
    w = np.asarray(costs, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
        raise InvalidCostMatrixError(f"cost matrix must be square and non-empty, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise InvalidCostMatrixError("cost matrix contains non-finite entries")
    if np.any(w < 0):
        raise InvalidCostMatrixError("cost matrix contains negative entries")
    return w


@njit(cache=True)
def _dense_kernel(w):
    n = w.shape[0]
    u = np.zeros(n)
    v = np.zeros(n)
    col_of = np.full(n, -1, dtype=np.int64)
    row_of = np.full(n, -1, dtype=np.int64)

    # Column reduction: price each column at its cheapest row and greedily
    # assign that row when still free.  Lowest row index wins ties.
    for j in range(n):
        imin = 0
        best = w[0, j]
        for i in range(1, n):
            if w[i, j] < best:
                best = w[i, j]
                imin = i
        v[j] = best
        if col_of[imin] == -1:
            col_of[imin] = j
            row_of[j] = imin

    d = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=np.bool_)

    for r in range(n):
        if col_of[r] != -1:
            continue
        # bound = best distance to a free column found so far; the search
        # can stop once the frontier cannot beat it, and relaxations at or
        # beyond it can never matter
        bound = np.inf
        jbound = -1
        for j in range(n):
            d[j] = np.inf
            visited[j] = False
        for j in range(n):
            dj = w[r, j] - u[r] - v[j]
            if dj >= bound:
                continue
            d[j] = dj
            pred[j] = r
            if row_of[j] == -1:
                bound = dj
                jbound = j
        sink = -1
        dist_sink = 0.0
        while sink == -1:
            jmin = -1
            dmin = np.inf
            for j in range(n):
                if not visited[j] and d[j] < dmin:
                    dmin = d[j]
                    jmin = j
            if jmin == -1 and jbound == -1:
                return col_of, u, v, -1
            if jmin == -1 or dmin >= bound:
                sink = jbound
                dist_sink = bound
                break
            visited[jmin] = True
            if row_of[jmin] == -1:
                sink = jmin
                dist_sink = dmin
            else:
                i = row_of[jmin]
                for j in range(n):
                    if not visited[j]:
                        alt = dmin + (w[i, j] - u[i] - v[j])
                        if alt < d[j] and alt < bound:
                            d[j] = alt
                            pred[j] = i
                            if row_of[j] == -1:
                                bound = alt
                                jbound = j
        u[r] += dist_sink
        for j in range(n):
            if visited[j] and j != sink:
                i = row_of[j]
                u[i] += dist_sink - d[j]
                v[j] -= dist_sink - d[j]
        j = sink
        while True:
            i = pred[j]
            row_of[j] = i
            nxt = col_of[i]
            col_of[i] = j
            if i == r:
                break
            j = nxt
    return col_of, u, v, 0


@njit(cache=True, inline="always")
def _heap_push(hd, hj, size, dval, jval):
    pos = size
    hd[pos] = dval
    hj[pos] = jval
    while pos > 0:
        parent = (pos - 1) >> 1
        if hd[parent] < hd[pos] or (hd[parent] == hd[pos] and hj[parent] <= hj[pos]):
            break
        hd[parent], hd[pos] = hd[pos], hd[parent]
        hj[parent], hj[pos] = hj[pos], hj[parent]
        pos = parent
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(hd, hj, size):
    size -= 1
    hd[0] = hd[size]
    hj[0] = hj[size]
    pos = 0
    while True:
        left = 2 * pos + 1
        if left >= size:
            break
        right = left + 1
        child = left
        if right < size and (hd[right] < hd[left] or (hd[right] == hd[left] and hj[right] < hj[left])):
            child = right
        if hd[pos] < hd[child] or (hd[pos] == hd[child] and hj[pos] <= hj[child]):
            break
        hd[pos], hd[child] = hd[child], hd[pos]
        hj[pos], hj[child] = hj[child], hj[pos]
        pos = child
    return size


@njit(cache=True)
def _sparse_kernel(n, indptr, indices, data):
    u = np.zeros(n)
    v = np.zeros(n)
    col_best = np.full(n, np.inf)
    col_arg = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for e in range(indptr[i], indptr[i + 1]):
            j = indices[e]
            if data[e] < col_best[j]:
                col_best[j] = data[e]
                col_arg[j] = i
    col_of = np.full(n, -1, dtype=np.int64)
    row_of = np.full(n, -1, dtype=np.int64)
    for j in range(n):
        if col_arg[j] == -1:
            return col_of, u, v, -1
        v[j] = col_best[j]
        i = col_arg[j]
        if col_of[i] == -1:
            col_of[i] = j
            row_of[j] = i

    m = indptr[n]
    hd = np.empty(m + n + 1)
    hj = np.empty(m + n + 1, dtype=np.int64)
    d = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    # scanned columns in pop order, with their final distances; a scanned
    # column's d is set to -inf, which also blocks further relaxations
    scan_j = np.empty(n, dtype=np.int64)
    scan_d = np.empty(n)

    for r in range(n):
        if col_of[r] != -1:
            continue
        for j in range(n):
            d[j] = np.inf
        bound = np.inf
        jbound = -1
        hsize = 0
        nscan = 0
        for e in range(indptr[r], indptr[r + 1]):
            j = indices[e]
            nd = data[e] - u[r] - v[j]
            if nd >= bound or nd >= d[j]:
                continue
            d[j] = nd
            pred[j] = r
            hsize = _heap_push(hd, hj, hsize, nd, j)
            if row_of[j] == -1:
                bound = nd
                jbound = j
        sink = -1
        dist_sink = 0.0
        while True:
            if hsize == 0:
                if jbound == -1:
                    return col_of, u, v, -2
                sink = jbound
                dist_sink = bound
                break
            dj = hd[0]
            j = hj[0]
            hsize = _heap_pop(hd, hj, hsize)
            if dj >= bound:
                sink = jbound
                dist_sink = bound
                break
            if dj > d[j]:
                continue
            if row_of[j] == -1:
                sink = j
                dist_sink = dj
                break
            scan_j[nscan] = j
            scan_d[nscan] = dj
            nscan += 1
            d[j] = -np.inf
            i = row_of[j]
            ui = u[i]
            for e in range(indptr[i], indptr[i + 1]):
                j2 = indices[e]
                alt = dj + (data[e] - ui - v[j2])
                if alt < d[j2] and alt < bound:
                    d[j2] = alt
                    pred[j2] = i
                    hsize = _heap_push(hd, hj, hsize, alt, j2)
                    if row_of[j2] == -1:
                        bound = alt
                        jbound = j2
        if sink == -1:
            return col_of, u, v, -2
        u[r] += dist_sink
        for t in range(nscan):
            j = scan_j[t]
            i = row_of[j]
            u[i] += dist_sink - scan_d[t]
            v[j] -= dist_sink - scan_d[t]
        j = sink
        while True:
            i = pred[j]
            row_of[j] = i
            nxt = col_of[i]
            col_of[i] = j
            if i == r:
                break
            j = nxt
    return col_of, u, v, 0


def solve_dense(costs) -> Assignment:
    """Minimum-cost assignment on a dense square cost matrix.

    Deterministic: augmentation ties break toward the lowest column index.
    """
    w = _validate_costs(costs)
    n = w.shape[0]
    col_of, u, v, status = _dense_kernel(w)
    if status != 0:
        raise InfeasibleGraphError("dense solve failed; non-finite costs slipped validation")
    total = float(w[np.arange(n), col_of].sum())
    return Assignment(perm=col_of, total_cost=total, col_prices=v)


def solve_sparse_csr(n: int, indptr, indices, data, expected_degree: int | None = None) -> Assignment:
    """Minimum-cost perfect matching on an n x n bipartite graph in CSR form.

    When expected_degree is given, every row and column degree must equal it
    (the marriage-theorem precondition the repair step guarantees).
    """
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    data = np.ascontiguousarray(data, dtype=np.float64)
    if expected_degree is not None:
        k = int(expected_degree)
        row_deg = np.diff(indptr)
        col_deg = np.bincount(indices, minlength=n)
        if not (np.all(row_deg == k) and np.all(col_deg == k)):
            raise IrregularGraphError(
                f"graph is not {k}-regular: row degrees {row_deg.min()}..{row_deg.max()}, "
                f"column degrees {col_deg.min()}..{col_deg.max()}"
            )
    col_of, u, v, status = _sparse_kernel(n, indptr, indices, data)
    if status != 0:
        raise InfeasibleGraphError("no perfect matching on the sparse graph; repair postcondition violated")
    # gather the chosen weights and sum them the same way the dense solver
    # does, so the complete-graph case reproduces its total bit for bit
    chosen = np.empty(n)
    for i in range(n):
        lo, hi = indptr[i], indptr[i + 1]
        e = lo + np.searchsorted(indices[lo:hi], col_of[i])
        chosen[i] = data[e]
    return Assignment(perm=col_of, total_cost=float(chosen.sum()), col_prices=v)


def solve_sparse(graph) -> Assignment:
    """Minimum-cost perfect matching restricted to a k-regular bipartite graph.

    Accepts any object exposing n, k and to_csr() -> (indptr, indices, data)
    with per-row indices sorted ascending.
    """
    indptr, indices, data = graph.to_csr()
    return solve_sparse_csr(graph.n, indptr, indices, data, expected_degree=graph.k)


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def brute_force(costs) -> Assignment:
    """Exact minimum by exhaustive permutation enumeration (n <= 9).

    Ties resolve to the lexicographically smallest permutation.
    """
    w = _validate_costs(costs)
    n = w.shape[0]
    if n > 9:
        raise SizeLimitError(f"brute force limited to n <= 9, got n = {n}")
    perms = _perm_table(n)
    totals = w[np.arange(n), perms].sum(axis=1)
    best = int(np.argmin(totals))
    return Assignment(perm=perms[best].copy(), total_cost=float(totals[best]))
