"""Synthetic data generators for benchmarks and end-to-end runs.

Two dataset kinds are produced for the CLI: a color-bias classification
problem whose test split contains samples from a feature region absent at
training time, and a plain multi-cluster problem with one test-only
cluster.  Both are written in the standard manifest layout so every other
command can consume them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def clustered_points_2d(n: int, rng: np.random.Generator, n_clusters: int | None = None) -> np.ndarray:
    """2D Gaussian-mixture point cloud resembling a projected image dataset.

    Cluster spread scales with cluster size (local density a small multiple
    of the global average), the way neighborhood-preserving projections
    spread dense groups over area proportional to their cardinality, and a
    few percent of points scatter as background.
    """
    if n_clusters is None:
        n_clusters = int(rng.integers(5, 9))
    centers = rng.uniform(0.15, 0.85, size=(n_clusters, 2))
    weights = rng.uniform(0.5, 1.5, size=n_clusters)
    weights = weights / weights.sum()
    n_background = int(round(n * 0.05))
    counts = rng.multinomial(n - n_background, weights)
    points = np.empty((n, 2))
    pos = 0
    for c in range(n_clusters):
        m = counts[c]
        sigma = float(rng.uniform(0.25, 0.45)) * np.sqrt(max(m, 1) / n)
        points[pos : pos + m] = centers[c] + rng.normal(0.0, sigma, size=(m, 2))
        pos += m
    points[pos:] = rng.uniform(0.0, 1.0, size=(n - pos, 2))
    return points


@dataclass
class SyntheticDataset:
    """In-memory dataset bundle before it is written to disk."""

    name: str
    classes: list[str]
    feature_sets: dict[str, np.ndarray]
    labels: np.ndarray
    is_train: np.ndarray
    is_ood: np.ndarray
    coords2d: np.ndarray | None = None
    notes: dict = field(default_factory=dict)


# (color gain, class-signal gain) per feature set: the "hl" views carry the
# class signal, the "ll" views mostly see the color attribute.
_COLOR_BIAS_GAINS = {
    "hl_net_a": (0.4, 2.0),
    "hl_net_b": (0.7, 1.7),
    "hl_net_c": (1.0, 1.4),
    "ll_color": (2.0, 0.5),
    "ll_texture": (1.7, 0.3),
    "ll_edge": (2.2, 0.15),
}


def make_color_bias_dataset(
    n_train: int = 600,
    n_test: int = 600,
    seed: int = 0,
    dim: int = 8,
    noise: float = 2.0,
) -> SyntheticDataset:
    """Two-class problem where one attribute ("color") correlates perfectly
    with the label at training time but flips on half of the test split.

    The flipped samples are the ground-truth OoD samples: views that lean
    on the color attribute misclassify them confidently, views that carry
    the class signal still get them right, and the disagreement drives up
    the entropy of the averaged prediction.
    """
    rng = np.random.default_rng(seed)
    n_ood = n_test // 2
    n = n_train + n_test

    labels = np.concatenate([
        rng.integers(0, 2, size=n_train),
        rng.integers(0, 2, size=n_test),
    ])
    is_train = np.zeros(n, dtype=bool)
    is_train[:n_train] = True
    is_ood = np.zeros(n, dtype=bool)
    ood_idx = n_train + rng.permutation(n_test)[:n_ood]
    is_ood[ood_idx] = True

    color = labels.copy()
    color[is_ood] = 1 - color[is_ood]
    color_sign = 2.0 * color - 1.0
    label_sign = 2.0 * labels - 1.0

    feature_sets: dict[str, np.ndarray] = {}
    for name, (color_gain, label_gain) in _COLOR_BIAS_GAINS.items():
        u = rng.normal(size=dim)
        u /= np.linalg.norm(u)
        v = rng.normal(size=dim)
        v -= (v @ u) * u
        v /= np.linalg.norm(v)
        X = (
            color_sign[:, None] * color_gain * u[None, :]
            + label_sign[:, None] * label_gain * v[None, :]
            + rng.normal(0.0, noise, size=(n, dim))
        )
        feature_sets[name] = X

    # 2D coordinates for layout: class signal on one axis, color on the other,
    # so flipped-color samples land in regions the training data never covers.
    coords = np.column_stack([
        label_sign + rng.normal(0.0, 0.35, size=n),
        color_sign + rng.normal(0.0, 0.35, size=n),
    ])

    return SyntheticDataset(
        name="color-bias",
        classes=["dog", "cat"],
        feature_sets=feature_sets,
        labels=labels,
        is_train=is_train,
        is_ood=is_ood,
        coords2d=coords,
        notes={"n_train": n_train, "n_test": n_test, "n_ood": int(n_ood)},
    )


def make_cluster_dataset(
    n_train: int = 400,
    n_test: int = 400,
    seed: int = 0,
    n_classes: int = 4,
    dim: int = 10,
) -> SyntheticDataset:
    """Gaussian clusters, one per class, plus a test-only cluster tagged OoD."""
    rng = np.random.default_rng(seed)
    n = n_train + n_test
    centers = rng.normal(0.0, 4.0, size=(n_classes + 1, dim))
    centers2d = rng.uniform(0.1, 0.9, size=(n_classes + 1, 2))

    labels = np.empty(n, dtype=np.int64)
    is_train = np.zeros(n, dtype=bool)
    is_train[:n_train] = True
    is_ood = np.zeros(n, dtype=bool)
    cluster = np.empty(n, dtype=np.int64)

    labels[:n_train] = rng.integers(0, n_classes, size=n_train)
    cluster[:n_train] = labels[:n_train]
    n_novel = n_test // 5
    test_cluster = np.concatenate([
        rng.integers(0, n_classes, size=n_test - n_novel),
        np.full(n_novel, n_classes),
    ])
    rng.shuffle(test_cluster)
    cluster[n_train:] = test_cluster
    # the novel cluster has no label of its own; it gets the nearest class id
    labels[n_train:] = np.minimum(test_cluster, n_classes - 1)
    is_ood[n_train:] = test_cluster == n_classes

    X = centers[cluster] + rng.normal(0.0, 1.0, size=(n, dim))
    view_b = X @ rng.normal(0.0, 1.0 / np.sqrt(dim), size=(dim, dim)) + rng.normal(0.0, 0.3, size=(n, dim))
    coords = centers2d[cluster] + rng.normal(0.0, 0.05, size=(n, 2))

    return SyntheticDataset(
        name="clusters",
        classes=[f"class_{c}" for c in range(n_classes)],
        feature_sets={"view_a": X, "view_b": view_b},
        labels=labels,
        is_train=is_train,
        is_ood=is_ood,
        coords2d=coords,
        notes={"n_train": n_train, "n_test": n_test, "novel_cluster_size": int(n_novel)},
    )
