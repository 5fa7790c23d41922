"""HTTP JSON API for interactive exploration.

Sessions are in-memory: one dataset, one score table, any number of
layouts, one zoom hierarchy per layout grid.  Detection and layout run as
background jobs the client polls; zooming is immediate.  Layout responses
are deterministic for a given request body (including the seed), down to
the byte, so re-issuing a request reproduces the grid exactly; wall-clock
timings are therefore reported by the CLI artifacts, never by the API.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, Response
from pydantic import BaseModel, Field

from .data import Dataset, load_dataset
from .ensemble import (
    OoDScoreTable,
    SampleTypeThresholds,
    score,
    select_coefficients,
    train_family,
)
from .projection import tsne
from .sampling import EmptySelectionError, Hierarchy, HierarchyNode, pick_representatives

DEFAULT_PORT = 8780
DEFAULT_MAX_SIDE = 45
DEFAULT_MIN_DIST = 3.0


class DetectRequest(BaseModel):
    n_models: int = 3
    feature_sets: list[str] | None = None


class LayoutRequest(BaseModel):
    split: str = Field("test", pattern="^(train|test|both)$")
    categories: list[str] | None = None
    k: int = 100
    mode: str = Field("single", pattern="^(single|juxtapose|superpose)$")
    seed: int = 0
    max_side: int = DEFAULT_MAX_SIDE


class ZoomRequest(BaseModel):
    region: list[int]  # [row0, col0, row1, col1], inclusive cell rectangle
    grid_index: int = 0
    node_id: int = 0


@dataclass
class LayoutEntry:
    layout_id: str
    body: str
    response_bytes: bytes
    hierarchies: list[Hierarchy] = field(default_factory=list)


@dataclass
class Session:
    session_id: str
    dataset: Dataset
    coords: np.ndarray | None = None
    table: OoDScoreTable | None = None
    layouts: dict[str, LayoutEntry] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def ensure_coords(self) -> np.ndarray:
        if self.coords is None:
            first = self.dataset.manifest.feature_sets[0].name
            self.coords = tsne(self.dataset.features[first], seed=0).coords
        return self.coords

    def normalized_scores(self) -> np.ndarray:
        if self.table is None:
            return np.zeros(self.dataset.n_samples)
        return self.table.ood_score_normalized


def _canonical_json(doc) -> bytes:
    return json.dumps(doc, separators=(",", ":"), sort_keys=True).encode()


def _grid_payload(session: Session, hierarchy: Hierarchy, node: HierarchyNode, part: str) -> dict:
    ds = session.dataset
    table = session.table
    cells = []
    for cell in range(node.grid.grid.n_cells):
        local = int(node.grid.sample_of_cell[cell])
        if local < 0:
            cells.append({"cell": cell, "sample_id": None})
            continue
        sid = int(node.displayed[local])
        entry = {
            "cell": cell,
            "sample_id": sid,
            "class": ds.classes[ds.labels[sid]],
            "split": "train" if ds.is_train[sid] else "test",
        }
        if table is not None:
            entry["ood_norm"] = float(table.ood_score_normalized[sid])
            entry["confidence"] = float(table.confidence[sid])
            entry["sample_type"] = table.sample_type[sid]
        else:
            entry["ood_norm"] = 0.0
        cells.append(entry)
    positions = np.array(
        [node.grid.grid.cell_rowcol(int(node.grid.cell_of_sample[t])) for t in range(len(node.displayed))],
        dtype=np.float64,
    ).reshape(-1, 2)
    reps = pick_representatives(
        node.displayed,
        session.normalized_scores()[node.displayed],
        positions,
        DEFAULT_MIN_DIST,
    )
    return {
        "split": part,
        "m": node.grid.grid.m,
        "n": node.grid.grid.n,
        "node_id": node.node_id,
        "parent": node.parent,
        "n_samples": len(node.universe),
        "n_displayed": len(node.displayed),
        "category_counts": node.category_counts,
        "representatives": [int(r) for r in reps],
        "cells": cells,
    }


def _subset_ids(ds: Dataset, part: str, categories: list[str] | None) -> np.ndarray:
    if part == "train":
        mask = ds.is_train.copy()
    elif part == "test":
        mask = ~ds.is_train
    else:
        mask = np.ones(ds.n_samples, dtype=bool)
    if categories:
        unknown = [c for c in categories if c not in ds.classes]
        if unknown:
            raise HTTPException(status_code=400, detail=f"unknown categories {unknown}")
        wanted = np.isin(ds.labels, [ds.classes.index(c) for c in categories])
        mask &= wanted
    return np.nonzero(mask)[0]


def compute_layout(session: Session, req: LayoutRequest) -> LayoutEntry:
    ds = session.dataset
    coords = session.ensure_coords()
    scores_norm = session.normalized_scores()
    parts = ["train", "test"] if req.mode == "juxtapose" else (
        ["both"] if req.mode == "superpose" else [req.split]
    )
    body = json.dumps(req.model_dump(), sort_keys=True)
    layout_id = hashlib.sha1(body.encode()).hexdigest()[:16]

    hierarchies: list[Hierarchy] = []
    grids: list[dict] = []
    for part in parts:
        ids = _subset_ids(ds, part, req.categories)
        if len(ids) == 0:
            raise HTTPException(status_code=400, detail=f"no samples in split {part!r} with those categories")
        hierarchy = Hierarchy(
            coords,
            scores_norm,
            ds.labels,
            ds.classes,
            max_side=req.max_side,
            k=req.k,
            seed=req.seed,
        )
        root = hierarchy.build_root(ids)
        hierarchies.append(hierarchy)
        grids.append(_grid_payload(session, hierarchy, root, part))
    response = {
        "layout_id": layout_id,
        "mode": req.mode,
        "k": req.k,
        "seed": req.seed,
        "grids": grids,
    }
    entry = LayoutEntry(layout_id=layout_id, body=body, response_bytes=_canonical_json(response))
    entry.hierarchies = hierarchies
    return entry


def create_app(data_dir) -> FastAPI:
    data_dir = Path(data_dir)
    app = FastAPI(title="oodgrid")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: dict[str, Session] = {}
    jobs: dict[str, dict] = {}
    executor = ThreadPoolExecutor(max_workers=2)

    def discover() -> dict[str, Path]:
        return {p.parent.name: p for p in sorted(data_dir.glob("*/manifest.json"))}

    def get_session(session_id: str) -> Session:
        if session_id not in sessions:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return sessions[session_id]

    def submit(fn) -> dict:
        job_id = uuid.uuid4().hex[:12]
        jobs[job_id] = {"status": "pending", "result": None, "error": None}

        def run():
            jobs[job_id]["status"] = "running"
            try:
                jobs[job_id]["result"] = fn()
                jobs[job_id]["status"] = "done"
            except HTTPException as exc:
                jobs[job_id]["error"] = exc.detail
                jobs[job_id]["status"] = "error"
            except Exception as exc:  # surfaced to the polling client
                jobs[job_id]["error"] = f"{type(exc).__name__}: {exc}"
                jobs[job_id]["status"] = "error"

        executor.submit(run)
        return {"job_id": job_id, "status": "pending"}

    @app.get("/api/datasets")
    def list_datasets():
        out = []
        for name, manifest_path in discover().items():
            with open(manifest_path) as fh:
                raw = json.load(fh)
            out.append(
                {
                    "name": name,
                    "n_samples": raw["n_samples"],
                    "classes": raw["classes"],
                    "feature_sets": [f["name"] for f in raw["feature_sets"]],
                    "has_images": raw.get("image_dir") is not None,
                }
            )
        return out

    @app.post("/api/sessions")
    def create_session(body: dict):
        name = body.get("dataset")
        datasets = discover()
        if name not in datasets:
            raise HTTPException(status_code=404, detail=f"unknown dataset {name!r}")
        dataset = load_dataset(datasets[name])
        session = Session(session_id=uuid.uuid4().hex[:12], dataset=dataset, coords=dataset.coords2d)
        sessions[session.session_id] = session
        return {"session_id": session.session_id, "dataset": name, "n_samples": dataset.n_samples}

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        if job_id not in jobs:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        job = jobs[job_id]
        out = {"job_id": job_id, "status": job["status"]}
        if job["status"] == "done":
            out["result"] = job["result"]
        elif job["status"] == "error":
            out["error"] = job["error"]
        return out

    @app.post("/api/sessions/{session_id}/detect")
    def detect(session_id: str, req: DetectRequest):
        session = get_session(session_id)

        def run():
            with session.lock:
                ds = session.dataset
                names = req.feature_sets or [f.name for f in ds.manifest.feature_sets]
                missing = [n for n in names if n not in ds.features]
                if missing:
                    raise HTTPException(status_code=400, detail=f"unknown feature sets {missing}")
                feats = {n: ds.features[n] for n in names}
                classifiers = train_family(
                    feats, ds.labels, select_coefficients(req.n_models), ds.is_train,
                    n_classes=len(ds.classes),
                )
                session.table = score(
                    classifiers,
                    feats,
                    classes=ds.classes,
                    thresholds=SampleTypeThresholds.for_classes(len(ds.classes)),
                )
                table = session.table
                return {
                    "n_classifiers": len(classifiers),
                    "n_models": req.n_models,
                    "feature_sets": names,
                    "score_range": [float(table.ood_score.min()), float(table.ood_score.max())],
                    "max_entropy": float(np.log(len(ds.classes))),
                    "type_counts": {t: table.sample_type.count(t) for t in set(table.sample_type)},
                }

        return submit(run)

    @app.get("/api/sessions/{session_id}/scores")
    def scores(session_id: str, split: str = "test", categories: str | None = None):
        session = get_session(session_id)
        if session.table is None:
            raise HTTPException(status_code=409, detail="detection has not been run on this session")
        ds = session.dataset
        cats = categories.split(",") if categories else None
        ids = _subset_ids(ds, split, cats)
        table = session.table
        return [
            {
                "sample_id": int(s),
                "class": ds.classes[ds.labels[s]],
                "split": "train" if ds.is_train[s] else "test",
                "ood_score": float(table.ood_score[s]),
                "ood_score_normalized": float(table.ood_score_normalized[s]),
                "confidence": float(table.confidence[s]),
                "predicted_class": ds.classes[int(table.predicted_class[s])],
                "sample_type": table.sample_type[s],
            }
            for s in ids
        ]

    @app.post("/api/sessions/{session_id}/layout")
    def layout_endpoint(session_id: str, req: LayoutRequest):
        session = get_session(session_id)

        def run():
            with session.lock:
                entry = compute_layout(session, req)
                previous = session.layouts.get(entry.layout_id)
                if previous is not None and previous.response_bytes == entry.response_bytes:
                    # identical recomputation: keep accumulated zoom children
                    entry.hierarchies = previous.hierarchies
                session.layouts[entry.layout_id] = entry
                return json.loads(entry.response_bytes)

        return submit(run)

    @app.get("/api/sessions/{session_id}/layouts/{layout_id}")
    def get_layout(session_id: str, layout_id: str):
        session = get_session(session_id)
        if layout_id not in session.layouts:
            raise HTTPException(status_code=404, detail=f"unknown layout {layout_id}")
        return Response(content=session.layouts[layout_id].response_bytes, media_type="application/json")

    @app.post("/api/sessions/{session_id}/layouts/{layout_id}/zoom")
    def zoom(session_id: str, layout_id: str, req: ZoomRequest):
        session = get_session(session_id)
        if layout_id not in session.layouts:
            raise HTTPException(status_code=404, detail=f"unknown layout {layout_id}")
        entry = session.layouts[layout_id]
        if not 0 <= req.grid_index < len(entry.hierarchies):
            raise HTTPException(status_code=400, detail=f"grid_index out of range")
        if len(req.region) != 4:
            raise HTTPException(status_code=400, detail="region must be [row0, col0, row1, col1]")
        hierarchy = entry.hierarchies[req.grid_index]
        if not 0 <= req.node_id < len(hierarchy.nodes):
            raise HTTPException(status_code=404, detail=f"unknown node {req.node_id}")
        with session.lock:
            try:
                child = hierarchy.zoom(req.node_id, tuple(req.region))
            except EmptySelectionError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            payload = _grid_payload(session, hierarchy, child, "zoom")
            payload["hierarchy"] = hierarchy.to_json_dict()
            return payload

    @app.get("/api/sessions/{session_id}/samples/{sample_id}/detail")
    def sample_detail(session_id: str, sample_id: int, neighbors: int = 8):
        session = get_session(session_id)
        ds = session.dataset
        if not 0 <= sample_id < ds.n_samples:
            raise HTTPException(status_code=404, detail=f"unknown sample {sample_id}")
        coords = session.ensure_coords()
        train_ids = np.nonzero(ds.is_train)[0]
        d2 = ((coords[train_ids] - coords[sample_id]) ** 2).sum(axis=1)
        order = train_ids[np.argsort(d2, kind="stable")]
        order = order[order != sample_id][:neighbors]
        out = {
            "sample_id": sample_id,
            "class": ds.classes[ds.labels[sample_id]],
            "split": "train" if ds.is_train[sample_id] else "test",
            "neighbors": [int(t) for t in order],
        }
        if session.table is not None:
            table = session.table
            out.update(
                ood_score=float(table.ood_score[sample_id]),
                ood_score_normalized=float(table.ood_score_normalized[sample_id]),
                confidence=float(table.confidence[sample_id]),
                predicted_class=ds.classes[int(table.predicted_class[sample_id])],
                sample_type=table.sample_type[sample_id],
            )
        return out

    def _serve_asset(dataset: str, sample_id: int, attr: str):
        datasets = discover()
        if dataset not in datasets:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        with open(datasets[dataset]) as fh:
            raw = json.load(fh)
        rel = raw.get(attr)
        if rel is None:
            raise HTTPException(status_code=404, detail=f"dataset has no {attr}")
        path = datasets[dataset].parent / rel / f"{sample_id}.png"
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"no asset for sample {sample_id}")
        return FileResponse(path)

    @app.get("/api/samples/{dataset}/{sample_id}/image")
    def sample_image(dataset: str, sample_id: int):
        return _serve_asset(dataset, sample_id, "image_dir")

    @app.get("/api/samples/{dataset}/{sample_id}/saliency")
    def sample_saliency(dataset: str, sample_id: int):
        return _serve_asset(dataset, sample_id, "saliency_dir")

    return app
