"""Headless entry points.

    oodgrid gen-synthetic --kind color-bias --out data/demo
    oodgrid detect data/demo/manifest.json --n-models 3 --out runs/demo
    oodgrid layout data/demo/manifest.json --split test --k 100 --out runs/demo
    oodgrid bench-lap --n 2025 --k 50,100 --trials 10 --out runs/bench
    oodgrid eval-ood runs/demo/scores.csv data/demo/ood_truth.csv --out runs/demo
    oodgrid serve --data-dir data --port 8780

Report-producing commands render PNG figures next to their CSV/JSON
output.  Every command is deterministic for a fixed --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd


def _cmd_gen_synthetic(args) -> int:
    from .data import write_dataset
    from .synthetic import make_cluster_dataset, make_color_bias_dataset

    if args.kind == "color-bias":
        bundle = make_color_bias_dataset(n_train=args.n_train, n_test=args.n_test, seed=args.seed)
    else:
        bundle = make_cluster_dataset(n_train=args.n_train, n_test=args.n_test, seed=args.seed)
    manifest = write_dataset(bundle, args.out)
    print(f"wrote {bundle.name} dataset ({len(bundle.labels)} samples) to {manifest}")
    return 0


def _cmd_detect(args) -> int:
    from .data import load_dataset, read_ood_truth, scores_to_frame
    from .ensemble import SampleTypeThresholds, score, select_coefficients, train_family
    from .metrics import evaluate
    from .report import save_roc_pr, save_score_histogram

    dataset = load_dataset(args.manifest)
    names = args.feature_sets.split(",") if args.feature_sets else list(dataset.features)
    missing = [n for n in names if n not in dataset.features]
    if missing:
        raise ValueError(f"unknown feature sets {missing}")
    feats = {n: dataset.features[n] for n in names}
    coefficients = select_coefficients(args.n_models)
    classifiers = train_family(feats, dataset.labels, coefficients, dataset.is_train,
                               n_classes=len(dataset.classes))
    table = score(classifiers, feats, classes=dataset.classes,
                  thresholds=SampleTypeThresholds.for_classes(len(dataset.classes)))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scores_to_frame(table).to_csv(out / "scores.csv", index=False)
    print(f"{len(classifiers)} classifiers ({len(names)} feature sets x {len(coefficients)} coefficients)")
    print(f"scores -> {out / 'scores.csv'}")

    truth = None
    if args.truth:
        truth = read_ood_truth(args.truth, dataset.n_samples)
        test = ~dataset.is_train
        result = evaluate(table.ood_score[test], truth[test])
        with open(out / "eval.json", "w") as fh:
            json.dump(result.to_dict(), fh, indent=1)
        save_roc_pr(table.ood_score[test], truth[test], result, out / "detect_roc_pr.png")
        print(f"test-split AUROC={result.auroc:.4f} AUPR={result.aupr:.4f} -> {out / 'eval.json'}")
    save_score_histogram(table, out / "detect_scores.png", truth=truth)
    return 0


def _cmd_layout(args) -> int:
    from .data import load_dataset, layout_to_dict
    from .gridlayout import layout
    from .projection import tsne
    from .report import save_grid_figure

    dataset = load_dataset(args.manifest)
    if args.split == "train":
        ids = np.nonzero(dataset.is_train)[0]
    elif args.split == "test":
        ids = np.nonzero(~dataset.is_train)[0]
    else:
        ids = np.arange(dataset.n_samples)
    if args.categories:
        wanted = [dataset.classes.index(c) for c in args.categories.split(",")]
        ids = ids[np.isin(dataset.labels[ids], wanted)]
    if len(ids) == 0:
        raise ValueError("no samples match the split/category selection")

    if dataset.coords2d is not None:
        coords = dataset.coords2d[ids]
    else:
        first = dataset.manifest.feature_sets[0].name
        print(f"no precomputed 2D coordinates; projecting feature set {first!r}")
        coords = tsne(dataset.features[first][ids], seed=args.seed).coords

    assignment = layout(coords, k=args.k, with_baseline=args.baseline)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "layout.json", "w") as fh:
        json.dump(layout_to_dict(assignment), fh, indent=1)
    save_grid_figure(assignment, dataset.labels[ids], dataset.classes, out / "layout.png")
    rep = assignment.report
    msg = f"{len(ids)} samples on a {assignment.grid.m}x{assignment.grid.n} grid, k={assignment.k_used}, matching {rep.t_seconds:.3f}s"
    if rep.cr is not None:
        msg += f", cost ratio {rep.cr:.3e} vs dense baseline ({rep.t_baseline_seconds:.3f}s)"
    print(msg)
    print(f"layout -> {out / 'layout.json'}")
    return 0


def _cmd_bench_lap(args) -> int:
    from .knngraph import BENCH_CSV_COLUMNS, run_lap_benchmark
    from .report import save_bench_figures

    ks = [int(k) for k in args.k.split(",")]
    rows = run_lap_benchmark(args.n, ks, args.trials, seed=args.seed,
                             with_baseline=not args.no_baseline)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        [
            {
                "dataset": r.dataset, "N": r.n, "k": r.k, "trial": r.trial,
                "c_k": r.c_k, "c_opt": r.c_opt, "cr": r.cr,
                "t_knn_seconds": r.t_knn_seconds, "t_baseline_seconds": r.t_baseline_seconds,
            }
            for r in rows
        ],
        columns=BENCH_CSV_COLUMNS,
    )
    frame.to_csv(out / "bench.csv", index=False)
    save_bench_figures(rows, out)
    for k in ks:
        sel = frame[frame.k == k]
        line = f"k={k}: mean t_knn={sel.t_knn_seconds.mean():.3f}s"
        if not args.no_baseline:
            line += f", mean cr={sel.cr.mean():.3e}, mean t_baseline={sel.t_baseline_seconds.mean():.3f}s"
        print(line)
    print(f"benchmark -> {out / 'bench.csv'}")
    return 0


def _cmd_eval_ood(args) -> int:
    from .data import load_scores
    from .metrics import evaluate
    from .report import save_roc_pr

    scores_frame = load_scores(args.scores)
    truth_frame = pd.read_csv(args.truth)
    merged = scores_frame.merge(truth_frame, on="sample_id", how="inner")
    if merged.empty:
        raise ValueError("no common sample_ids between scores and truth")
    result = evaluate(
        merged["ood_score"].to_numpy(),
        merged["is_ood"].to_numpy().astype(bool),
        ks=[int(k) for k in args.prec_k.split(",")],
    )
    doc = result.to_dict()
    print(json.dumps(doc, indent=1))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "eval.json", "w") as fh:
            json.dump(doc, fh, indent=1)
        save_roc_pr(merged["ood_score"].to_numpy(), merged["is_ood"].to_numpy().astype(bool),
                    result, out / "eval_roc_pr.png")
        print(f"eval -> {out / 'eval.json'}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oodgrid", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synthetic", help="write a synthetic dataset")
    p.add_argument("--kind", choices=["color-bias", "clusters"], default="color-bias")
    p.add_argument("--out", required=True)
    p.add_argument("--n-train", type=int, default=600)
    p.add_argument("--n-test", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_gen_synthetic)

    p = sub.add_parser("detect", help="train the ensemble and score every sample")
    p.add_argument("manifest")
    p.add_argument("--n-models", type=int, default=3)
    p.add_argument("--feature-sets", help="comma-separated subset (default: all)")
    p.add_argument("--truth", help="sample_id,is_ood CSV for evaluation")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_detect)

    p = sub.add_parser("layout", help="compute a grid layout for one split")
    p.add_argument("manifest")
    p.add_argument("--split", choices=["train", "test", "both"], default="test")
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--categories", help="comma-separated class names")
    p.add_argument("--baseline", action="store_true", help="also run the dense solver")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_layout)

    p = sub.add_parser("bench-lap", help="assignment quality/time sweep on synthetic clusters")
    p.add_argument("--n", type=int, default=2025)
    p.add_argument("--k", default="50,100")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-baseline", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_bench_lap)

    p = sub.add_parser("eval-ood", help="AUROC/AUPR/top-K from scores + truth CSVs")
    p.add_argument("scores")
    p.add_argument("truth")
    p.add_argument("--prec-k", default="50,100,200")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_eval_ood)

    p = sub.add_parser("serve", help="start the exploration HTTP server")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--port", type=int, default=8780)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
