"""Score-biased sampling, the zoom hierarchy, and representative picking.

The overview can only show S x S samples at a time.  Sampling weights
blend the normalized detection score with inverse local density, so dense
unremarkable regions are under-sampled while sparse regions with
suspicious samples survive.  Samples that are not displayed are assigned
to their nearest displayed sample; zooming into a region gathers the
displayed samples there plus their hidden assignees and lays them out in
a child grid, always keeping the previously displayed ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gridlayout import GridAssignment, layout


class EmptySelectionError(ValueError):
    """Zoom region contains no displayed samples."""


def knn_radius(coords: np.ndarray, k: int = 10) -> np.ndarray:
    """Distance to each point's k-th nearest neighbor (k clamps to N-1)."""
    coords = np.asarray(coords, dtype=np.float64)
    n = coords.shape[0]
    if n == 1:
        return np.zeros(1)
    k = min(k, n - 1)
    sq = (coords * coords).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (coords @ coords.T)
    np.maximum(d2, 0.0, out=d2)
    # element k skips the zero self-distance at element 0
    kth = np.partition(d2, k, axis=1)[:, k]
    return np.sqrt(kth)


def ood_biased_sample(candidates, scores, coords2d, budget: int, alpha: float = 0.5,
                      seed: int = 0) -> np.ndarray:
    """Weighted sampling without replacement of `budget` candidate ids.

    weight_i = alpha * normalized_score_i + (1 - alpha) * inverse_density_i
    with density from a 10-NN radius estimate in 2D.  Deterministic for a
    fixed seed (exponential-key reservoir ranking).  A budget at or above
    the candidate count returns all candidates.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    candidates = np.asarray(candidates, dtype=np.int64)
    n = len(candidates)
    if budget >= n:
        return candidates.copy()
    scores = np.asarray(scores, dtype=np.float64)
    coords2d = np.asarray(coords2d, dtype=np.float64)

    span = scores.max() - scores.min()
    s_norm = (scores - scores.min()) / span if span > 0 else np.zeros(n)
    radii = knn_radius(coords2d, k=10)
    inv_density = radii * radii
    if inv_density.max() > 0:
        inv_density = inv_density / inv_density.max()
    weights = alpha * s_norm + (1.0 - alpha) * inv_density

    rng = np.random.default_rng(seed)
    u = rng.random(n)
    keys = np.where(weights > 0.0, u ** (1.0 / np.where(weights > 0.0, weights, 1.0)), -1.0)
    order = np.lexsort((np.arange(n), -keys))
    return candidates[order[:budget]].copy()


def pick_representatives(displayed, scores, cell_positions, min_dist: float) -> np.ndarray:
    """Greedy selection in descending score order, skipping anything whose
    grid position is within min_dist of an already-placed sample."""
    if min_dist < 0:
        raise ValueError(f"min_dist must be non-negative, got {min_dist}")
    displayed = np.asarray(displayed, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    pos = np.asarray(cell_positions, dtype=np.float64)
    order = np.lexsort((np.arange(len(displayed)), -scores))
    chosen: list[int] = []
    chosen_pos: list[np.ndarray] = []
    for idx in order:
        p = pos[idx]
        if any(np.hypot(*(p - q)) < min_dist for q in chosen_pos):
            continue
        chosen.append(int(displayed[idx]))
        chosen_pos.append(p)
    return np.array(chosen, dtype=np.int64)


@dataclass
class HierarchyNode:
    """One zoom level: what is shown, and where everything else went."""

    node_id: int
    parent: int | None
    selected_region: tuple[int, int, int, int] | None
    displayed: np.ndarray
    hidden_assignment: dict[int, int]
    category_counts: dict[str, int]
    grid: GridAssignment

    @property
    def universe(self) -> set[int]:
        return set(int(s) for s in self.displayed) | set(self.hidden_assignment.keys())

    def cell_of(self, sample_id: int) -> int:
        idx = int(np.nonzero(self.displayed == sample_id)[0][0])
        return int(self.grid.cell_of_sample[idx])


class Hierarchy:
    """Tree of zoom levels over one layout.

    Children always retain the displayed samples of the selected region
    (mental-map preservation); hidden samples follow their nearest
    displayed sample.
    """

    def __init__(self, coords2d, scores_normalized, labels, class_names,
                 max_side: int = 45, k: int = 100, alpha: float = 0.5, seed: int = 0):
        self.coords = np.asarray(coords2d, dtype=np.float64)
        self.scores = np.asarray(scores_normalized, dtype=np.float64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.class_names = list(class_names)
        self.max_side = int(max_side)
        self.k = int(k)
        self.alpha = float(alpha)
        self.seed = int(seed)
        self.nodes: list[HierarchyNode] = []

    def _counts(self, sample_ids) -> dict[str, int]:
        counts: dict[str, int] = {}
        for s in sample_ids:
            name = self.class_names[self.labels[s]]
            counts[name] = counts.get(name, 0) + 1
        return counts

    def _assign_hidden(self, displayed: np.ndarray, hidden: np.ndarray) -> dict[int, int]:
        if len(hidden) == 0:
            return {}
        dc = self.coords[displayed]
        hc = self.coords[hidden]
        d2 = ((hc[:, None, :] - dc[None, :, :]) ** 2).sum(axis=2)
        nearest = d2.argmin(axis=1)
        return {int(h): int(displayed[nearest[t]]) for t, h in enumerate(hidden)}

    def _make_node(self, sample_ids: np.ndarray, displayed: np.ndarray, parent: int | None,
                   region: tuple[int, int, int, int] | None) -> HierarchyNode:
        displayed = np.asarray(displayed, dtype=np.int64)
        hidden = np.setdiff1d(np.asarray(sample_ids, dtype=np.int64), displayed)
        grid = layout(self.coords[displayed], k=min(self.k, max(1, len(displayed))))
        node = HierarchyNode(
            node_id=len(self.nodes),
            parent=parent,
            selected_region=region,
            displayed=displayed,
            hidden_assignment=self._assign_hidden(displayed, hidden),
            category_counts=self._counts(sample_ids),
            grid=grid,
        )
        self.nodes.append(node)
        return node

    def build_root(self, sample_ids) -> HierarchyNode:
        sample_ids = np.asarray(sample_ids, dtype=np.int64)
        budget = self.max_side * self.max_side
        if len(sample_ids) <= budget:
            displayed = sample_ids
        else:
            displayed = ood_biased_sample(
                sample_ids,
                self.scores[sample_ids],
                self.coords[sample_ids],
                budget,
                alpha=self.alpha,
                seed=self.seed,
            )
        return self._make_node(sample_ids, displayed, parent=None, region=None)

    def zoom(self, node: HierarchyNode | int, region: tuple[int, int, int, int]) -> HierarchyNode:
        """Open the cell rectangle (r0, c0, r1, c1), inclusive, as a child.

        The child shows every displayed sample inside the region; hidden
        samples assigned to them fill the remaining cells, sampled by
        score and sparseness when they do not all fit.
        """
        if isinstance(node, int):
            node = self.nodes[node]
        r0, c0, r1, c1 = region
        r0, r1 = sorted((int(r0), int(r1)))
        c0, c1 = sorted((int(c0), int(c1)))
        kept = []
        for idx, sid in enumerate(node.displayed):
            cell = int(node.grid.cell_of_sample[idx])
            r, c = node.grid.grid.cell_rowcol(cell)
            if r0 <= r <= r1 and c0 <= c <= c1:
                kept.append(int(sid))
        if not kept:
            raise EmptySelectionError(f"no displayed samples inside region {region}")
        kept_arr = np.array(sorted(kept), dtype=np.int64)
        kept_set = set(kept)
        hidden_in = np.array(
            sorted(h for h, owner in node.hidden_assignment.items() if owner in kept_set),
            dtype=np.int64,
        )
        universe = np.concatenate([kept_arr, hidden_in])
        budget = self.max_side * self.max_side
        if len(universe) > budget:
            fill = ood_biased_sample(
                hidden_in,
                self.scores[hidden_in],
                self.coords[hidden_in],
                budget - len(kept_arr),
                alpha=self.alpha,
                seed=self.seed + node.node_id + 1,
            )
            displayed = np.concatenate([kept_arr, fill])
        else:
            displayed = universe
        return self._make_node(universe, displayed, parent=node.node_id, region=(r0, c0, r1, c1))

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "node_id": n.node_id,
                    "parent": n.parent,
                    "category_counts": n.category_counts,
                    "grid": [n.grid.grid.m, n.grid.grid.n],
                }
                for n in self.nodes
            ]
        }
