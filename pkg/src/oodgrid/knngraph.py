"""kNN-sparsified bipartite graphs between instances and grid cells.

Builds the k-nearest-neighbor subgraph from every instance to the grid-cell
centers, then greedily repairs it so that every vertex on both sides has
degree exactly k.  A k-regular bipartite graph always admits a perfect
matching, so the sparse assignment solver is guaranteed to succeed on the
repaired graph.

The repair walks the over-full cells in descending (degree, weight-sum)
order.  For each such cell it scans incident edges from heaviest to
lightest and moves one edge endpoint to the cheapest under-full cell the
instance is not yet connected to; the cell is re-examined until its degree
drops to k.  Every swap preserves the total degree 2kN, each edge is
removed at most once, and an internal cap of 2kN edge operations turns any
logic error into a hard failure instead of a hang.

Cell centers normally form a regular lattice, so both the kNN queries and
the under-full-cell searches run on an expanding-ring walk over the
lattice; arbitrary center sets fall back to linear scans.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from numba import njit

from .lap import Assignment, _heap_pop, _heap_push, solve_sparse_csr


class InvalidKError(ValueError):
    """Requested neighbor count is outside 1..N."""


class RepairLogicError(RuntimeError):
    """Greedy repair violated one of its own invariants (internal bug)."""


@dataclass
class SparseBipartiteGraph:
    """Instance-to-grid-cell adjacency with Euclidean edge weights.

    Every instance row holds exactly k edges (xadj sorted by cell index,
    xw aligned).  Rows at index >= n_real are padding instances whose edges
    all weigh zero.  grid_shape is (rows, cols) when the centers form a
    regular lattice, else None.
    """

    points: np.ndarray
    centers: np.ndarray
    k: int
    n_real: int
    xadj: np.ndarray
    xw: np.ndarray
    grid_shape: tuple[int, int] | None = None

    @property
    def n(self) -> int:
        return self.xadj.shape[0]

    @property
    def deg_x(self) -> np.ndarray:
        return np.full(self.n, self.k, dtype=np.int64)

    @property
    def deg_y(self) -> np.ndarray:
        return np.bincount(self.xadj.ravel(), minlength=self.n)

    def edges(self, i: int) -> list[tuple[int, float]]:
        return [(int(j), float(w)) for j, w in zip(self.xadj[i], self.xw[i])]

    def edge_set(self) -> set[tuple[int, int]]:
        n = self.n
        return {(i, int(j)) for i in range(n) for j in self.xadj[i]}

    def to_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        indptr = np.arange(self.n + 1, dtype=np.int64) * self.k
        return indptr, self.xadj.ravel().astype(np.int64), self.xw.ravel().astype(np.float64)


@dataclass
class RepairTrace:
    """What the greedy repair did: one (instance, cell) pair per event."""

    deleted: np.ndarray
    inserted: np.ndarray
    imbalance_sizes: np.ndarray
    edge_ops: int


@dataclass
class ApproxReport:
    """Approximation quality and timing of one kNN-assignment run."""

    c_k: float
    c_opt: float | None = None
    cr: float | None = None
    t_seconds: float = 0.0
    t_baseline_seconds: float | None = None


def lattice_centers(bbox: tuple[float, float, float, float], gm: int, gn: int) -> np.ndarray:
    """Row-major cell centers of a gm x gn partition of bbox, row 0 on top."""
    min_x, min_y, max_x, max_y = bbox
    cw = (max_x - min_x) / gn
    ch = (max_y - min_y) / gm
    cols = min_x + (np.arange(gn) + 0.5) * cw
    rows = max_y - (np.arange(gm) + 0.5) * ch
    centers = np.empty((gm * gn, 2))
    centers[:, 0] = np.tile(cols, gm)
    centers[:, 1] = np.repeat(rows, gn)
    return centers


def _lattice_params(centers: np.ndarray, grid_shape: tuple[int, int]):
    gm, gn = grid_shape
    cw = centers[1, 0] - centers[0, 0] if gn > 1 else 0.0
    ch = centers[0, 1] - centers[gn, 1] if gm > 1 else 0.0
    if gn <= 1:
        cw = ch if ch > 0 else 1.0
    if gm <= 1:
        ch = cw if cw > 0 else 1.0
    x0 = centers[0, 0] - 0.5 * cw
    ytop = centers[0, 1] + 0.5 * ch
    return x0, ytop, cw, ch, gm, gn


# --- bounded max-heap of the k smallest (weight, index) pairs; top = worst ---


@njit(cache=True, inline="always")
def _kbest_consider(hw, hx, size, k, w, j):
    if size < k:
        pos = size
        hw[pos] = w
        hx[pos] = j
        while pos > 0:
            par = (pos - 1) >> 1
            if hw[par] > hw[pos] or (hw[par] == hw[pos] and hx[par] > hx[pos]):
                break
            hw[par], hw[pos] = hw[pos], hw[par]
            hx[par], hx[pos] = hx[pos], hx[par]
            pos = par
        return size + 1
    if w > hw[0] or (w == hw[0] and j > hx[0]):
        return size
    hw[0] = w
    hx[0] = j
    pos = 0
    while True:
        left = 2 * pos + 1
        if left >= size:
            break
        right = left + 1
        child = left
        if right < size and (hw[right] > hw[left] or (hw[right] == hw[left] and hx[right] > hx[left])):
            child = right
        if hw[pos] > hw[child] or (hw[pos] == hw[child] and hx[pos] >= hx[child]):
            break
        hw[pos], hw[child] = hw[child], hw[pos]
        hx[pos], hx[child] = hx[child], hx[pos]
        pos = child
    return size


@njit(cache=True)
def _build_kernel(points, centers, k, n_real, use_lattice, x0, ytop, cw, ch, gm, gn):
    n = centers.shape[0]
    xadj = np.empty((n, k), dtype=np.int64)
    xw = np.empty((n, k))
    hw = np.empty(k)
    hx = np.empty(k, dtype=np.int64)
    min_cell = cw if cw < ch else ch
    for i in range(n):
        if i >= n_real:
            # padding instance: zero weight everywhere, take the lowest cells
            for s in range(k):
                xadj[i, s] = s
                xw[i, s] = 0.0
            continue
        px = points[i, 0]
        py = points[i, 1]
        size = 0
        if use_lattice:
            c0 = int((px - x0) / cw)
            if c0 < 0:
                c0 = 0
            elif c0 > gn - 1:
                c0 = gn - 1
            r0 = int((ytop - py) / ch)
            if r0 < 0:
                r0 = 0
            elif r0 > gm - 1:
                r0 = gm - 1
            seen = 0
            ring = 0
            max_ring = gm + gn
            while seen < n:
                rlo = r0 - ring
                rhi = r0 + ring
                clo = c0 - ring
                chi = c0 + ring
                for r in range(rlo, rhi + 1):
                    if r < 0 or r >= gm:
                        continue
                    if r == rlo or r == rhi:
                        cstep = 1
                    else:
                        cstep = chi - clo if chi > clo else 1
                    for c in range(clo, chi + 1, cstep):
                        if c < 0 or c >= gn:
                            continue
                        j = r * gn + c
                        dx = px - centers[j, 0]
                        dy = py - centers[j, 1]
                        w = math.sqrt(dx * dx + dy * dy)
                        size = _kbest_consider(hw, hx, size, k, w, j)
                        seen += 1
                if size == k and (ring + 0.5) * min_cell > hw[0]:
                    break
                ring += 1
                if ring > max_ring:
                    break
        else:
            for j in range(n):
                dx = px - centers[j, 0]
                dy = py - centers[j, 1]
                w = math.sqrt(dx * dx + dy * dy)
                size = _kbest_consider(hw, hx, size, k, w, j)
        order = np.argsort(hx[:k])
        for s in range(k):
            xadj[i, s] = hx[order[s]]
            xw[i, s] = hw[order[s]]
    return xadj, xw


@njit(cache=True, inline="always")
def _yheap_push(hdeg, hws, hyj, size, deg, ws, j):
    pos = size
    hdeg[pos] = deg
    hws[pos] = ws
    hyj[pos] = j
    while pos > 0:
        par = (pos - 1) >> 1
        a_gt = hdeg[par] > hdeg[pos] or (
            hdeg[par] == hdeg[pos]
            and (hws[par] > hws[pos] or (hws[par] == hws[pos] and hyj[par] < hyj[pos]))
        )
        if a_gt:
            break
        hdeg[par], hdeg[pos] = hdeg[pos], hdeg[par]
        hws[par], hws[pos] = hws[pos], hws[par]
        hyj[par], hyj[pos] = hyj[pos], hyj[par]
        pos = par
    return size + 1


@njit(cache=True, inline="always")
def _yheap_pop(hdeg, hws, hyj, size):
    size -= 1
    hdeg[0] = hdeg[size]
    hws[0] = hws[size]
    hyj[0] = hyj[size]
    pos = 0
    while True:
        left = 2 * pos + 1
        if left >= size:
            break
        right = left + 1
        child = left
        if right < size:
            r_gt = hdeg[right] > hdeg[left] or (
                hdeg[right] == hdeg[left]
                and (hws[right] > hws[left] or (hws[right] == hws[left] and hyj[right] < hyj[left]))
            )
            if r_gt:
                child = right
        p_ge = hdeg[pos] > hdeg[child] or (
            hdeg[pos] == hdeg[child]
            and (hws[pos] > hws[child] or (hws[pos] == hws[child] and hyj[pos] <= hyj[child]))
        )
        if p_ge:
            break
        hdeg[pos], hdeg[child] = hdeg[child], hdeg[pos]
        hws[pos], hws[child] = hws[child], hws[pos]
        hyj[pos], hyj[child] = hyj[child], hyj[pos]
        pos = child
    return size


_SUPER = 8  # lattice cells per super-cell side in the under-full index


@njit(cache=True)
def _find_insertion(x, points, centers, n_real, k, adj, ylen, under_cnt, sgm, sgn,
                    use_lattice, x0, ytop, cw, ch, gm, gn):
    """Cheapest under-full cell not yet connected to instance x.

    Returns (cell, weight) or (-1, 0.0) if none exists.  Ties break toward
    the lowest cell index.  Padding instances weigh zero everywhere, so for
    them the first free under-full cell wins.  under_cnt counts under-full
    cells per super-cell block so saturated regions are skipped wholesale.
    """
    n = centers.shape[0]
    if x >= n_real:
        for j in range(n):
            if ylen[j] < k and not adj[x, j]:
                return j, 0.0
        return -1, 0.0
    px = points[x, 0]
    py = points[x, 1]
    best_j = -1
    best_w = np.inf
    if use_lattice:
        c0 = int((px - x0) / cw)
        if c0 < 0:
            c0 = 0
        elif c0 > gn - 1:
            c0 = gn - 1
        r0 = int((ytop - py) / ch)
        if r0 < 0:
            r0 = 0
        elif r0 > gm - 1:
            r0 = gm - 1
        min_cell = cw if cw < ch else ch
        sr0 = r0 // _SUPER
        sc0 = c0 // _SUPER
        sring = 0
        max_sring = sgm + sgn
        while sring <= max_sring:
            srlo = sr0 - sring
            srhi = sr0 + sring
            sclo = sc0 - sring
            schi = sc0 + sring
            for sr in range(srlo, srhi + 1):
                if sr < 0 or sr >= sgm:
                    continue
                if sr == srlo or sr == srhi:
                    scstep = 1
                else:
                    scstep = schi - sclo if schi > sclo else 1
                for sc in range(sclo, schi + 1, scstep):
                    if sc < 0 or sc >= sgn:
                        continue
                    if under_cnt[sr * sgn + sc] == 0:
                        continue
                    rlo = sr * _SUPER
                    rhi = min(rlo + _SUPER, gm)
                    clo = sc * _SUPER
                    chi = min(clo + _SUPER, gn)
                    for r in range(rlo, rhi):
                        for c in range(clo, chi):
                            j = r * gn + c
                            if ylen[j] >= k or adj[x, j]:
                                continue
                            dx = px - centers[j, 0]
                            dy = py - centers[j, 1]
                            w = math.sqrt(dx * dx + dy * dy)
                            if w < best_w or (w == best_w and j < best_j):
                                best_w = w
                                best_j = j
            # rings s' > sring hold cells at least this far away
            if best_j != -1 and (sring * _SUPER + 0.5) * min_cell > best_w:
                break
            sring += 1
    else:
        for j in range(n):
            if ylen[j] >= k or adj[x, j]:
                continue
            dx = px - centers[j, 0]
            dy = py - centers[j, 1]
            w = math.sqrt(dx * dx + dy * dy)
            if w < best_w or (w == best_w and j < best_j):
                best_w = w
                best_j = j
    if best_j == -1:
        return -1, 0.0
    return best_j, best_w


@njit(cache=True)
def _repair_kernel(points, centers, n_real, k, xadj, xw, use_lattice, x0, ytop, cw, ch, gm, gn):
    n = xadj.shape[0]
    kn = k * n

    adj = np.zeros((n, n), dtype=np.bool_)
    ylen = np.zeros(n, dtype=np.int64)
    wsum = np.zeros(n)
    for i in range(n):
        for s in range(k):
            j = xadj[i, s]
            adj[i, j] = True
            ylen[j] += 1
            wsum[j] += xw[i, s]

    if use_lattice:
        sgm = (gm + _SUPER - 1) // _SUPER
        sgn = (gn + _SUPER - 1) // _SUPER
    else:
        sgm = 1
        sgn = 1
    under_cnt = np.zeros(sgm * sgn, dtype=np.int64)
    if use_lattice:
        for j in range(n):
            if ylen[j] < k:
                sr = (j // gn) // _SUPER
                sc = (j % gn) // _SUPER
                under_cnt[sr * sgn + sc] += 1

    n_over = 0
    n_under = 0
    total_y = 0
    maxdeg = 1
    over_edges = 0
    for j in range(n):
        total_y += ylen[j]
        if ylen[j] > k:
            n_over += 1
            over_edges += ylen[j]
        elif ylen[j] < k:
            n_under += 1
        if ylen[j] > maxdeg:
            maxdeg = ylen[j]

    hdeg = np.empty(kn + n + 1, dtype=np.int64)
    hws = np.empty(kn + n + 1)
    hyj = np.empty(kn + n + 1, dtype=np.int64)
    hsz = 0
    for j in range(n):
        if ylen[j] > k:
            hsz = _yheap_push(hdeg, hws, hyj, hsz, ylen[j], wsum[j], j)

    # Over-full cells get their incident edges sorted once, heaviest first
    # (higher instance index breaking weight ties).  Only deletions follow,
    # so the snapshot stays valid; dead entries are skipped lazily and a
    # per-cell cursor jumps the dead prefix.
    srt_w = np.empty(over_edges if over_edges > 0 else 1)
    srt_x = np.empty(over_edges if over_edges > 0 else 1, dtype=np.int64)
    srt_slot = np.empty(over_edges if over_edges > 0 else 1, dtype=np.int64)
    srt_alive = np.zeros(over_edges if over_edges > 0 else 1, dtype=np.bool_)
    srt_off = np.full(n, -1, dtype=np.int64)
    srt_end = np.zeros(n, dtype=np.int64)
    srt_cur = np.zeros(n, dtype=np.int64)
    pool_used = 0
    scratch_d = np.empty(maxdeg)
    scratch_j = np.empty(maxdeg, dtype=np.int64)

    dels = np.empty((kn, 2), dtype=np.int64)
    inss = np.empty((kn, 2), dtype=np.int64)
    sizes = np.empty(kn, dtype=np.int64)
    nswap = 0
    ops = 0

    while hsz > 0:
        snap_deg = hdeg[0]
        yj = hyj[0]
        hsz = _yheap_pop(hdeg, hws, hyj, hsz)
        if ylen[yj] != snap_deg or ylen[yj] <= k:
            continue
        if srt_off[yj] == -1:
            # first examination: collect and sort incident edges via a
            # min-heap on (-weight, -instance)
            ssz = 0
            for i in range(n):
                if adj[i, yj]:
                    sl = -1
                    for s in range(k):
                        if xadj[i, s] == yj:
                            sl = s
                            break
                    if sl == -1:
                        return dels, inss, sizes, nswap, ops, -6
                    ssz = _heap_push(scratch_d, scratch_j, ssz, -xw[i, sl], -(i * k + sl))
            srt_off[yj] = pool_used
            pos = pool_used
            while ssz > 0:
                key = scratch_d[0]
                packed = -scratch_j[0]
                ssz = _heap_pop(scratch_d, scratch_j, ssz)
                srt_w[pos] = -key
                srt_x[pos] = packed // k
                srt_slot[pos] = packed % k
                srt_alive[pos] = True
                pos += 1
            srt_end[yj] = pos
            srt_cur[yj] = srt_off[yj]
            pool_used = pos
        swapped = False
        t = srt_cur[yj]
        while t < srt_end[yj] and not srt_alive[t]:
            t += 1
        srt_cur[yj] = t
        while t < srt_end[yj]:
            if not srt_alive[t]:
                t += 1
                continue
            x = srt_x[t]
            bw = srt_w[t]
            sl = srt_slot[t]
            jnew, wnew = _find_insertion(
                x, points, centers, n_real, k, adj, ylen, under_cnt, sgm, sgn,
                use_lattice, x0, ytop, cw, ch, gm, gn,
            )
            if jnew == -1:
                t += 1
                continue
            if xadj[x, sl] != yj:
                return dels, inss, sizes, nswap, ops, -6
            xadj[x, sl] = jnew
            xw[x, sl] = wnew
            adj[x, yj] = False
            adj[x, jnew] = True
            srt_alive[t] = False
            if t == srt_cur[yj]:
                srt_cur[yj] = t + 1
            ylen[yj] -= 1
            wsum[yj] -= bw
            total_y -= 1
            if ylen[yj] == k:
                n_over -= 1
            ylen[jnew] += 1
            wsum[jnew] += wnew
            total_y += 1
            if ylen[jnew] == k:
                n_under -= 1
                if use_lattice:
                    under_cnt[((jnew // gn) // _SUPER) * sgn + (jnew % gn) // _SUPER] -= 1
            ops += 2
            if total_y != kn:
                return dels, inss, sizes, nswap, ops, -5
            if nswap >= kn or ops > 2 * kn:
                return dels, inss, sizes, nswap, ops, -3
            dels[nswap, 0] = x
            dels[nswap, 1] = yj
            inss[nswap, 0] = x
            inss[nswap, 1] = jnew
            sizes[nswap] = n_over + n_under
            nswap += 1
            swapped = True
            break
        if not swapped:
            return dels, inss, sizes, nswap, ops, -2
        if ylen[yj] > k:
            hsz = _yheap_push(hdeg, hws, hyj, hsz, ylen[yj], wsum[yj], yj)

    for j in range(n):
        if ylen[j] != k:
            return dels, inss, sizes, nswap, ops, -4
    return dels, inss, sizes, nswap, ops, 0


_REPAIR_ERRORS = {
    -2: "a surplus cell admits no swap, contradicting the termination argument",
    -3: "edge-operation cap 2kN exceeded",
    -4: "repair finished with a vertex degree != k",
    -5: "degree sum drifted from 2kN during a swap",
    -6: "cell adjacency buffer out of sync with instance adjacency",
}


def build_knn_graph(
    points,
    grid_centers,
    k: int,
    *,
    grid_shape: tuple[int, int] | None = None,
    n_real: int | None = None,
) -> SparseBipartiteGraph:
    """Connect every instance to its k nearest grid-cell centers.

    Instance degrees are exactly k by construction; cell degrees are
    whatever the geometry produces and generally need repair().  Distance
    ties break toward the lower cell index.  Rows at index >= n_real (when
    given) are padding instances wired at zero weight to the first k cells.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    centers = np.ascontiguousarray(grid_centers, dtype=np.float64)
    n = centers.shape[0]
    if points.shape[0] != n:
        raise ValueError(f"expected as many instances as grid cells, got {points.shape[0]} vs {n}")
    if not 1 <= k <= n:
        raise InvalidKError(f"k must be in 1..{n}, got {k}")
    if n_real is None:
        n_real = n
    if grid_shape is not None:
        x0, ytop, cw, ch, gm, gn = _lattice_params(centers, grid_shape)
        use_lattice = True
    else:
        x0 = ytop = cw = ch = 0.0
        gm = gn = 0
        use_lattice = False
    xadj, xw = _build_kernel(points, centers, k, n_real, use_lattice, x0, ytop, cw, ch, gm, gn)
    return SparseBipartiteGraph(
        points=points,
        centers=centers,
        k=k,
        n_real=n_real,
        xadj=xadj,
        xw=xw,
        grid_shape=grid_shape,
    )


def repair_with_trace(graph: SparseBipartiteGraph) -> tuple[SparseBipartiteGraph, RepairTrace]:
    """repair() that also reports every edge deletion/insertion it performed."""
    xadj = graph.xadj.copy()
    xw = graph.xw.copy()
    if graph.grid_shape is not None:
        x0, ytop, cw, ch, gm, gn = _lattice_params(graph.centers, graph.grid_shape)
        use_lattice = True
    else:
        x0 = ytop = cw = ch = 0.0
        gm = gn = 0
        use_lattice = False
    dels, inss, sizes, nswap, ops, status = _repair_kernel(
        graph.points, graph.centers, graph.n_real, graph.k, xadj, xw,
        use_lattice, x0, ytop, cw, ch, gm, gn,
    )
    if status != 0:
        raise RepairLogicError(_REPAIR_ERRORS[status])
    order = np.argsort(xadj, axis=1)
    xadj = np.take_along_axis(xadj, order, axis=1)
    xw = np.take_along_axis(xw, order, axis=1)
    repaired = SparseBipartiteGraph(
        points=graph.points,
        centers=graph.centers,
        k=graph.k,
        n_real=graph.n_real,
        xadj=xadj,
        xw=xw,
        grid_shape=graph.grid_shape,
    )
    trace = RepairTrace(
        deleted=dels[:nswap].copy(),
        inserted=inss[:nswap].copy(),
        imbalance_sizes=sizes[:nswap].copy(),
        edge_ops=int(ops),
    )
    return repaired, trace


def repair(graph: SparseBipartiteGraph) -> SparseBipartiteGraph:
    """Make every cell degree exactly k by greedy delete+insert swaps.

    The input graph is untouched; a new graph satisfying the
    marriage-theorem condition is returned.
    """
    repaired, _ = repair_with_trace(graph)
    return repaired


def dense_baseline(points, grid_centers, *, n_real: int | None = None) -> tuple[Assignment, float]:
    """Optimal assignment on the full cost matrix, with its wall time.

    The timing covers cost-matrix construction plus the dense solve, i.e.
    everything the baseline does after projection.
    """
    from .lap import solve_dense

    pts = np.ascontiguousarray(points, dtype=np.float64)
    ctr = np.ascontiguousarray(grid_centers, dtype=np.float64)
    nr = pts.shape[0] if n_real is None else n_real
    t0 = time.perf_counter()
    diff = pts[:, None, :] - ctr[None, :, :]
    costs = np.sqrt((diff * diff).sum(axis=2))
    if nr < pts.shape[0]:
        costs[nr:, :] = 0.0
    assignment = solve_dense(costs)
    return assignment, time.perf_counter() - t0


def approx_layout(
    points,
    grid_centers,
    k: int,
    *,
    grid_shape: tuple[int, int] | None = None,
    n_real: int | None = None,
    with_baseline: bool = False,
) -> tuple[Assignment, ApproxReport]:
    """build -> repair -> sparse solve, timing only the matching phase.

    With with_baseline the dense solver also runs on the full cost matrix
    and the report carries the optimal cost and the cost ratio
    (c_k - c_opt) / c_opt.
    """
    t0 = time.perf_counter()
    graph = build_knn_graph(points, grid_centers, k, grid_shape=grid_shape, n_real=n_real)
    repaired = repair(graph)
    indptr, indices, data = repaired.to_csr()
    assignment = solve_sparse_csr(repaired.n, indptr, indices, data, expected_degree=k)
    t_knn = time.perf_counter() - t0

    report = ApproxReport(c_k=assignment.total_cost, t_seconds=t_knn)
    if with_baseline:
        baseline, t_base = dense_baseline(points, grid_centers, n_real=n_real)
        report.t_baseline_seconds = t_base
        report.c_opt = baseline.total_cost
        report.cr = (assignment.total_cost - baseline.total_cost) / baseline.total_cost
    return assignment, report


@dataclass
class BenchRow:
    """One benchmark measurement, one CSV line."""

    dataset: str
    n: int
    k: int
    trial: int
    c_k: float
    c_opt: float | None
    cr: float | None
    t_knn_seconds: float
    t_baseline_seconds: float | None


BENCH_CSV_COLUMNS = ["dataset", "N", "k", "trial", "c_k", "c_opt", "cr", "t_knn_seconds", "t_baseline_seconds"]


def run_lap_benchmark(
    n: int,
    ks: list[int],
    trials: int,
    seed: int = 0,
    *,
    with_baseline: bool = True,
    dataset_name: str = "synthetic-clusters",
) -> list[BenchRow]:
    """Approximation quality and timing sweep on synthetic clustered points.

    n must be a perfect square so the grid needs no padding instances and
    the kNN cost is directly comparable to the dense optimum.
    """
    from .synthetic import clustered_points_2d

    side = math.isqrt(n)
    if side * side != n:
        raise ValueError(f"benchmark N must be a perfect square (e.g. 2025 = 45x45), got {n}")
    rng = np.random.default_rng(seed)
    rows: list[BenchRow] = []
    for trial in range(trials):
        points = clustered_points_2d(n, rng)
        bbox = (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())
        centers = lattice_centers(bbox, side, side)
        c_opt = None
        t_base = None
        if with_baseline:
            baseline, t_base = dense_baseline(points, centers)
            c_opt = baseline.total_cost
        for k in ks:
            _, report = approx_layout(points, centers, k, grid_shape=(side, side))
            cr = None
            if c_opt is not None:
                cr = (report.c_k - c_opt) / c_opt
            rows.append(
                BenchRow(
                    dataset=dataset_name,
                    n=n,
                    k=k,
                    trial=trial,
                    c_k=report.c_k,
                    c_opt=c_opt,
                    cr=cr,
                    t_knn_seconds=report.t_seconds,
                    t_baseline_seconds=t_base,
                )
            )
    return rows
