"""Detection quality measures: AUROC, AUPR, top-K precision.

AUROC uses the rank (Mann-Whitney) formulation, counting ties as one half.
AUPR is average precision with step interpolation.  Rankings break score
ties by stable sample index, so every measure is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class UndefinedMetricError(ValueError):
    """The metric needs both a positive and a negative sample."""


class InvalidKError(ValueError):
    """Requested cutoff K is outside 1..N."""


@dataclass(frozen=True)
class EvalResult:
    auroc: float
    aupr: float
    prec_k: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "auroc": self.auroc,
            "aupr": self.aupr,
            "prec_k": {str(k): v for k, v in sorted(self.prec_k.items())},
        }


def _check_inputs(scores, is_ood) -> tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=np.float64)
    is_ood = np.asarray(is_ood, dtype=bool)
    if scores.shape != is_ood.shape or scores.ndim != 1:
        raise ValueError(f"scores {scores.shape} and flags {is_ood.shape} must be equal-length vectors")
    return scores, is_ood


def _midranks(scores: np.ndarray) -> np.ndarray:
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auroc(scores, is_ood) -> float:
    """P(score_pos > score_neg) + 0.5 P(score_pos == score_neg)."""
    scores, is_ood = _check_inputs(scores, is_ood)
    n_pos = int(is_ood.sum())
    n_neg = len(is_ood) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUROC needs at least one positive and one negative sample")
    ranks = _midranks(scores)
    return float((ranks[is_ood].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def _descending_order(scores: np.ndarray) -> np.ndarray:
    # stable sort on negated scores keeps original index order within ties
    return np.argsort(-scores, kind="stable")


def aupr(scores, is_ood) -> float:
    """Average precision: mean over positives of precision at their rank."""
    scores, is_ood = _check_inputs(scores, is_ood)
    n_pos = int(is_ood.sum())
    if n_pos == 0:
        raise UndefinedMetricError("AUPR needs at least one positive sample")
    order = _descending_order(scores)
    hits = is_ood[order]
    cum_hits = np.cumsum(hits)
    ranks = np.arange(1, len(scores) + 1)
    precisions = cum_hits[hits] / ranks[hits]
    return float(precisions.sum() / n_pos)


def prec_at_k(scores, is_ood, k: int) -> float:
    """Fraction of true positives among the K highest-scored samples."""
    scores, is_ood = _check_inputs(scores, is_ood)
    if not 1 <= k <= len(scores):
        raise InvalidKError(f"K must be in 1..{len(scores)}, got {k}")
    order = _descending_order(scores)
    return float(is_ood[order[:k]].sum() / k)


def evaluate(scores, is_ood, ks=(50, 100, 200)) -> EvalResult:
    """All three measures at once; cutoffs beyond N are skipped."""
    scores, is_ood = _check_inputs(scores, is_ood)
    return EvalResult(
        auroc=auroc(scores, is_ood),
        aupr=aupr(scores, is_ood),
        prec_k={int(k): prec_at_k(scores, is_ood, int(k)) for k in ks if 1 <= k <= len(scores)},
    )
