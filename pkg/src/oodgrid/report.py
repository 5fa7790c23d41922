"""Figure rendering for the CLI report paths.

Every figure-producing command writes PNGs next to its CSV/JSON output:
benchmark curves for the assignment sweep, a score histogram for
detection, ROC/PR curves for evaluation, and a colored cell map for
layouts.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_bench_figures(rows, out_dir) -> list[Path]:
    """Cost-ratio and timing curves over k from benchmark rows."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ks = sorted({r.k for r in rows})
    mean_cr = []
    mean_t = []
    for k in ks:
        sel = [r for r in rows if r.k == k]
        crs = [r.cr for r in sel if r.cr is not None]
        mean_cr.append(np.mean(crs) if crs else np.nan)
        mean_t.append(np.mean([r.t_knn_seconds for r in sel]))
    base_ts = [r.t_baseline_seconds for r in rows if r.t_baseline_seconds is not None]

    paths = []
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(ks, mean_cr, "o-")
    ax.set_xlabel("k")
    ax.set_ylabel("mean cost ratio $(C_k - C_{opt})/C_{opt}$")
    ax.set_title("Approximation quality vs k")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    p = out_dir / "bench_cost_ratio.png"
    fig.savefig(p, dpi=130)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(ks, mean_t, "o-", label="kNN matching")
    if base_ts:
        ax.axhline(np.mean(base_ts), color="crimson", ls="--", label="dense baseline")
    ax.set_xlabel("k")
    ax.set_ylabel("seconds")
    ax.set_title("Matching time vs k")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    p = out_dir / "bench_time.png"
    fig.savefig(p, dpi=130)
    plt.close(fig)
    paths.append(p)
    return paths


def save_score_histogram(table, path, truth=None) -> Path:
    """Distribution of normalized detection scores, split by truth if given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    norm = table.ood_score_normalized
    bins = np.linspace(0, 1, 41)
    if truth is not None:
        truth = np.asarray(truth, dtype=bool)
        ax.hist(norm[~truth], bins=bins, alpha=0.6, label="normal")
        ax.hist(norm[truth], bins=bins, alpha=0.6, label="OoD (truth)")
        ax.legend()
    else:
        ax.hist(norm, bins=bins, alpha=0.8)
    ax.set_xlabel("normalized OoD score")
    ax.set_ylabel("samples")
    ax.set_title("OoD score distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_roc_pr(scores, is_ood, result, path) -> Path:
    """ROC and PR curves with the scalar summaries in the titles."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    scores = np.asarray(scores, dtype=np.float64)
    is_ood = np.asarray(is_ood, dtype=bool)
    order = np.argsort(-scores, kind="stable")
    hits = is_ood[order]
    tp = np.concatenate([[0], np.cumsum(hits)])
    fp = np.concatenate([[0], np.cumsum(~hits)])
    tpr = tp / max(tp[-1], 1)
    fpr = fp / max(fp[-1], 1)
    ranks = np.arange(1, len(scores) + 1)
    precision = tp[1:] / ranks
    recall = tpr[1:]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.5))
    ax1.plot(fpr, tpr)
    ax1.plot([0, 1], [0, 1], "k:", alpha=0.5)
    ax1.set_xlabel("false positive rate")
    ax1.set_ylabel("true positive rate")
    ax1.set_title(f"ROC (AUROC = {result.auroc:.4f})")
    ax2.plot(recall, precision)
    ax2.set_xlabel("recall")
    ax2.set_ylabel("precision")
    ax2.set_ylim(0, 1.02)
    ax2.set_title(f"PR (AUPR = {result.aupr:.4f})")
    for ax in (ax1, ax2):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_grid_figure(assignment, labels, class_names, path, scores_normalized=None,
                     cutoffs=(0.6, 0.8)) -> Path:
    """Cell map of a layout: hue per class, three lightness bins per score."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    m, n = assignment.grid.m, assignment.grid.n
    img = np.ones((m, n, 3))
    cmap = plt.get_cmap("tab10")
    for cell in range(assignment.grid.n_cells):
        sid = int(assignment.sample_of_cell[cell])
        if sid < 0:
            continue
        r, c = assignment.grid.cell_rowcol(cell)
        base = np.array(cmap(labels[sid] % 10)[:3])
        if scores_normalized is not None:
            s = scores_normalized[sid]
            tint = 0.65 if s < cutoffs[0] else (0.3 if s < cutoffs[1] else 0.0)
        else:
            tint = 0.35
        img[r, c] = base * (1 - tint) + tint
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(img, interpolation="nearest")
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title(f"{m} x {n} grid layout")
    handles = [plt.Line2D([0], [0], marker="s", ls="", color=cmap(i % 10), label=name)
               for i, name in enumerate(class_names)]
    ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.01, 1.0), fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
