"""Dataset manifests, feature/label/split ingestion, artifact persistence.

A dataset is a JSON manifest next to plain CSV files: one feature matrix
per feature set (header f0..f{D-1}), labels (sample_id,class_index), the
train/test split (sample_id,split), and optionally precomputed 2D
coordinates plus image/saliency directories.  Validation runs to the end
and reports every problem at once.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .ensemble import OoDScoreTable
from .projection import load_precomputed


class DatasetValidationError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("dataset validation failed:\n  " + "\n  ".join(problems))


class InvalidArtifactKindError(ValueError):
    """persist() called with an unknown artifact kind."""


@dataclass
class FeatureSetSpec:
    name: str
    dim: int
    path: str


@dataclass
class DatasetManifest:
    name: str
    n_samples: int
    classes: list[str]
    feature_sets: list[FeatureSetSpec]
    labels_path: str
    split_path: str
    image_dir: str | None = None
    saliency_dir: str | None = None
    precomputed_2d_path: str | None = None
    root: Path = field(default_factory=Path)

    def resolve(self, rel: str) -> Path:
        return self.root / rel


@dataclass
class Dataset:
    manifest: DatasetManifest
    features: dict[str, np.ndarray]
    labels: np.ndarray
    is_train: np.ndarray
    coords2d: np.ndarray | None = None

    @property
    def name(self) -> str:
        return self.manifest.name

    @property
    def n_samples(self) -> int:
        return self.manifest.n_samples

    @property
    def classes(self) -> list[str]:
        return self.manifest.classes


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    with open(path) as fh:
        raw = json.load(fh)
    return DatasetManifest(
        name=raw["name"],
        n_samples=int(raw["n_samples"]),
        classes=list(raw["classes"]),
        feature_sets=[FeatureSetSpec(f["name"], int(f["dim"]), f["path"]) for f in raw["feature_sets"]],
        labels_path=raw["labels_path"],
        split_path=raw["split_path"],
        image_dir=raw.get("image_dir"),
        saliency_dir=raw.get("saliency_dir"),
        precomputed_2d_path=raw.get("precomputed_2d_path"),
        root=path.parent,
    )


def load_dataset(manifest_path) -> Dataset:
    """Load everything the manifest references, collecting every problem."""
    manifest = load_manifest(manifest_path)
    problems: list[str] = []
    n = manifest.n_samples

    features: dict[str, np.ndarray] = {}
    for spec in manifest.feature_sets:
        fp = manifest.resolve(spec.path)
        if not fp.exists():
            problems.append(f"feature set {spec.name!r}: missing file {fp}")
            continue
        mat = pd.read_csv(fp).to_numpy(dtype=np.float64)
        if mat.shape[0] != n:
            problems.append(f"feature set {spec.name!r}: {mat.shape[0]} rows, manifest declares {n}")
            continue
        if mat.shape[1] != spec.dim:
            problems.append(f"feature set {spec.name!r}: {mat.shape[1]} columns, manifest declares {spec.dim}")
            continue
        if not np.all(np.isfinite(mat)):
            problems.append(f"feature set {spec.name!r}: non-finite entries")
            continue
        features[spec.name] = mat

    labels = np.zeros(n, dtype=np.int64)
    lp = manifest.resolve(manifest.labels_path)
    if not lp.exists():
        problems.append(f"labels: missing file {lp}")
    else:
        frame = pd.read_csv(lp)
        if len(frame) != n:
            problems.append(f"labels: {len(frame)} rows in {lp}, manifest declares {n}")
        else:
            labels = frame["class_index"].to_numpy(dtype=np.int64)
            bad = (labels < 0) | (labels >= len(manifest.classes))
            for row in np.nonzero(bad)[0][:5]:
                problems.append(f"labels: row {row} has class index {labels[row]} outside 0..{len(manifest.classes) - 1}")

    is_train = np.zeros(n, dtype=bool)
    sp = manifest.resolve(manifest.split_path)
    if not sp.exists():
        problems.append(f"split: missing file {sp}")
    else:
        frame = pd.read_csv(sp)
        if len(frame) != n:
            problems.append(f"split: {len(frame)} rows in {sp}, manifest declares {n}")
        else:
            values = frame["split"].astype(str).to_numpy()
            unknown = set(values) - {"train", "test"}
            if unknown:
                problems.append(f"split: unknown values {sorted(unknown)} in {sp}")
            is_train = values == "train"

    coords = None
    if manifest.precomputed_2d_path is not None:
        cp = manifest.resolve(manifest.precomputed_2d_path)
        if not cp.exists():
            problems.append(f"coordinates: missing file {cp}")
        else:
            try:
                coords = load_precomputed(cp, expected_n=n).coords
            except ValueError as exc:
                problems.append(str(exc))

    if problems:
        raise DatasetValidationError(problems)
    return Dataset(manifest=manifest, features=features, labels=labels, is_train=is_train, coords2d=coords)


SCORES_COLUMNS = ["sample_id", "ood_score", "ood_score_normalized", "confidence",
                  "predicted_class", "sample_type"]


def scores_to_frame(table: OoDScoreTable) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "sample_id": table.sample_ids,
            "ood_score": table.ood_score,
            "ood_score_normalized": table.ood_score_normalized,
            "confidence": table.confidence,
            "predicted_class": table.predicted_class,
            "sample_type": table.sample_type,
        }
    )


def layout_to_dict(assignment, include_timings: bool = True) -> dict:
    cells = []
    for cell in range(assignment.grid.n_cells):
        sid = int(assignment.sample_of_cell[cell])
        cells.append({"cell": cell, "sample_id": None if sid < 0 else sid})
    out = {
        "grid": {"m": assignment.grid.m, "n": assignment.grid.n},
        "cells": cells,
        "total_cost": assignment.total_cost,
        "k": assignment.k_used,
    }
    if assignment.report.cr is not None:
        out["cr"] = assignment.report.cr
    if include_timings:
        out["timings"] = {"t_seconds": assignment.report.t_seconds}
        if assignment.report.t_baseline_seconds is not None:
            out["timings"]["t_baseline_seconds"] = assignment.report.t_baseline_seconds
    return out


def persist(kind: str, payload, dataset: str, run_id: str, base_dir="results") -> Path:
    """Write one artifact under base_dir/<dataset>/<run_id>/, overwriting."""
    out_dir = Path(base_dir) / dataset / run_id
    out_dir.mkdir(parents=True, exist_ok=True)
    if kind == "scores":
        path = out_dir / "scores.csv"
        scores_to_frame(payload).to_csv(path, index=False)
    elif kind == "layout":
        path = out_dir / "layout.json"
        with open(path, "w") as fh:
            json.dump(layout_to_dict(payload), fh, indent=1)
    elif kind == "hierarchy":
        path = out_dir / "hierarchy.json"
        doc = payload.to_json_dict() if hasattr(payload, "to_json_dict") else payload
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
    else:
        raise InvalidArtifactKindError(f"unknown artifact kind {kind!r}")
    return path


def load_scores(path) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in SCORES_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"{path}: missing scores columns {missing}")
    return frame


def load_layout(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def load_hierarchy(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def read_ood_truth(path, n_samples: int | None = None) -> np.ndarray:
    """Ground-truth flags from a sample_id,is_ood CSV."""
    frame = pd.read_csv(path)
    if "sample_id" not in frame.columns or "is_ood" not in frame.columns:
        raise ValueError(f"{path}: expected columns sample_id,is_ood")
    if n_samples is None:
        n_samples = int(frame["sample_id"].max()) + 1
    flags = np.zeros(n_samples, dtype=bool)
    flags[frame["sample_id"].to_numpy(dtype=np.int64)] = frame["is_ood"].to_numpy().astype(bool)
    return flags


def write_dataset(bundle, out_dir) -> Path:
    """Write a SyntheticDataset bundle in the standard manifest layout."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = len(bundle.labels)

    feature_specs = []
    for name, mat in bundle.feature_sets.items():
        fname = f"features_{name}.csv"
        pd.DataFrame(mat, columns=[f"f{d}" for d in range(mat.shape[1])]).to_csv(
            out_dir / fname, index=False
        )
        feature_specs.append({"name": name, "dim": int(mat.shape[1]), "path": fname})

    pd.DataFrame({"sample_id": np.arange(n), "class_index": bundle.labels}).to_csv(
        out_dir / "labels.csv", index=False
    )
    split = np.where(bundle.is_train, "train", "test")
    pd.DataFrame({"sample_id": np.arange(n), "split": split}).to_csv(
        out_dir / "split.csv", index=False
    )
    pd.DataFrame({"sample_id": np.arange(n), "is_ood": bundle.is_ood.astype(int)}).to_csv(
        out_dir / "ood_truth.csv", index=False
    )

    manifest = {
        "name": bundle.name,
        "n_samples": n,
        "classes": bundle.classes,
        "feature_sets": feature_specs,
        "labels_path": "labels.csv",
        "split_path": "split.csv",
    }
    if bundle.coords2d is not None:
        with open(out_dir / "coords2d.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y"])
            for x, y in bundle.coords2d:
                writer.writerow([repr(float(x)), repr(float(y))])
        manifest["precomputed_2d_path"] = "coords2d.csv"

    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=1)
    return manifest_path
