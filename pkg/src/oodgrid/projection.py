"""2D embeddings of high-dimensional features.

Exact (non-tree-approximated) t-SNE with the classic optimizer settings:
early exaggeration x12 for the first 250 iterations, momentum switching
from 0.5 to 0.8 at iteration 250, per-parameter gain adaptation, and a
seeded Gaussian start.  O(N^2) per iteration, which is fine at desk scale.

Precomputed coordinates load from a two-column CSV so the layout pipeline
can be exercised independently of projection quality.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DegenerateInputError(ValueError):
    """Perplexity calibration failed (duplicate rows beyond tolerance)."""


class ManifestMismatchError(ValueError):
    """Coordinate file row count disagrees with the dataset manifest."""


@dataclass(frozen=True)
class ProjectedPoints:
    """N x 2 coordinates plus where they came from."""

    coords: np.ndarray
    source: str  # "computed" | "precomputed"
    seed: int = 0


def _pairwise_sq_dists(X: np.ndarray) -> np.ndarray:
    sq = (X * X).sum(axis=1)
    D2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(D2, 0.0, out=D2)
    np.fill_diagonal(D2, 0.0)
    return D2


def conditional_probabilities(D2: np.ndarray, perplexity: float, max_steps: int = 50,
                              tol: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """Per-row Gaussian affinities calibrated to the target perplexity.

    Binary search on the precision of each row's kernel until the entropy
    of the conditional distribution matches log(perplexity) within tol.
    Raises DegenerateInputError when a row cannot be calibrated in
    max_steps, which happens when distances degenerate (duplicate rows).
    """
    n = D2.shape[0]
    target = np.log(perplexity)
    P = np.zeros((n, n))
    betas = np.ones(n)
    for i in range(n):
        beta = 1.0
        beta_lo, beta_hi = 0.0, np.inf
        row = np.delete(D2[i], i)
        for step in range(max_steps):
            expo = np.exp(-row * beta)
            total = expo.sum()
            if total <= 0.0:
                h = 0.0
                p = np.zeros_like(row)
            else:
                p = expo / total
                # H = log(total) + beta * <d^2>
                h = np.log(total) + beta * float((row * p).sum())
            diff = h - target
            if abs(diff) < tol:
                break
            if diff > 0:
                beta_lo = beta
                beta = beta * 2.0 if beta_hi == np.inf else (beta + beta_hi) / 2.0
            else:
                beta_hi = beta
                beta = beta / 2.0 if beta_lo == 0.0 else (beta + beta_lo) / 2.0
        else:
            raise DegenerateInputError(
                f"perplexity search did not converge for row {i} in {max_steps} steps"
            )
        betas[i] = beta
        P[i, np.arange(n) != i] = p
    return P, betas


def tsne(
    features,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    learning_rate: float = 200.0,
    standardize: bool = True,
) -> ProjectedPoints:
    """Project feature rows onto the plane, deterministically for a seed."""
    X = np.asarray(features, dtype=np.float64)
    n = X.shape[0]
    if n < 4:
        raise ValueError(f"need at least 4 samples to embed, got {n}")
    if not perplexity < n / 3:
        raise ValueError(f"perplexity must be below N/3 = {n / 3:.2f}, got {perplexity}")
    if standardize:
        mu = X.mean(axis=0)
        sd = X.std(axis=0)
        sd[sd == 0.0] = 1.0
        X = (X - mu) / sd

    P_cond, _ = conditional_probabilities(_pairwise_sq_dists(X), perplexity)
    P = (P_cond + P_cond.T) / (2.0 * n)
    np.maximum(P, 1e-12, out=P)

    rng = np.random.default_rng(seed)
    Y = rng.normal(0.0, 1e-4, size=(n, 2))
    update = np.zeros_like(Y)
    gains = np.ones_like(Y)

    exaggeration_until = min(250, iterations)
    P_run = P * 12.0
    for it in range(iterations):
        if it == exaggeration_until:
            P_run = P
        momentum = 0.5 if it < 250 else 0.8

        D2y = _pairwise_sq_dists(Y)
        num = 1.0 / (1.0 + D2y)
        np.fill_diagonal(num, 0.0)
        Q = num / num.sum()
        np.maximum(Q, 1e-12, out=Q)

        PQn = (P_run - Q) * num
        grad = 4.0 * (PQn.sum(axis=1)[:, None] * Y - PQn @ Y)

        flip = np.sign(grad) != np.sign(update)
        gains[flip] += 0.2
        gains[~flip] *= 0.8
        np.maximum(gains, 0.01, out=gains)

        update = momentum * update - learning_rate * gains * grad
        Y = Y + update

    Y = Y - Y.mean(axis=0)
    return ProjectedPoints(coords=Y, source="computed", seed=seed)


def save_coords(path, coords) -> Path:
    path = Path(path)
    coords = np.asarray(coords, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for x, y in coords:
            writer.writerow([repr(float(x)), repr(float(y))])
    return path


def load_precomputed(path, expected_n: int | None = None) -> ProjectedPoints:
    """Load verbatim x,y coordinates written by save_coords or elsewhere."""
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["x", "y"]:
            raise ValueError(f"{path}: expected header 'x,y', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric coordinate {row}") from exc
    coords = np.array(rows, dtype=np.float64).reshape(-1, 2)
    if expected_n is not None and coords.shape[0] != expected_n:
        raise ManifestMismatchError(
            f"{path}: {coords.shape[0]} coordinate rows but the manifest declares {expected_n} samples"
        )
    return ProjectedPoints(coords=coords, source="precomputed")
