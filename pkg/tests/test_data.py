import json

import numpy as np
import pandas as pd
import pytest

from oodgrid.data import (
    DatasetValidationError,
    InvalidArtifactKindError,
    load_dataset,
    load_hierarchy,
    load_layout,
    load_scores,
    persist,
    read_ood_truth,
    scores_to_frame,
    write_dataset,
)
from oodgrid.ensemble import OoDScoreTable
from oodgrid.gridlayout import layout
from oodgrid.synthetic import make_cluster_dataset, make_color_bias_dataset


@pytest.fixture(scope="module")
def dataset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    bundle = make_color_bias_dataset(n_train=60, n_test=60, seed=1)
    manifest = write_dataset(bundle, out)
    return manifest, bundle


class TestLoadDataset:
    def test_round_trip(self, dataset_dir):
        manifest, bundle = dataset_dir
        ds = load_dataset(manifest)
        assert ds.n_samples == 120
        assert ds.classes == bundle.classes
        assert set(ds.features) == set(bundle.feature_sets)
        for name in ds.features:
            assert np.allclose(ds.features[name], bundle.feature_sets[name])
        assert np.array_equal(ds.labels, bundle.labels)
        assert np.array_equal(ds.is_train, bundle.is_train)
        assert np.allclose(ds.coords2d, bundle.coords2d)

    def test_ten_feature_sets_register(self, tmp_path):
        bundle = make_color_bias_dataset(n_train=20, n_test=20, seed=2)
        rng = np.random.default_rng(0)
        names = [f"hl_{i}" for i in range(6)] + [f"ll_{i}" for i in range(4)]
        bundle.feature_sets = {n: rng.normal(size=(40, 3)) for n in names}
        manifest = write_dataset(bundle, tmp_path)
        ds = load_dataset(manifest)
        assert len(ds.features) == 10

    def test_row_count_mismatch_names_the_file(self, tmp_path):
        bundle = make_color_bias_dataset(n_train=10, n_test=10, seed=3)
        manifest = write_dataset(bundle, tmp_path)
        labels = pd.read_csv(tmp_path / "labels.csv")
        labels.loc[len(labels)] = [99, 0]
        labels.to_csv(tmp_path / "labels.csv", index=False)
        with pytest.raises(DatasetValidationError, match="labels.csv"):
            load_dataset(manifest)

    def test_problems_are_aggregated(self, tmp_path):
        bundle = make_color_bias_dataset(n_train=10, n_test=10, seed=4)
        manifest = write_dataset(bundle, tmp_path)
        (tmp_path / "labels.csv").unlink()
        (tmp_path / "split.csv").unlink()
        with pytest.raises(DatasetValidationError) as err:
            load_dataset(manifest)
        assert len(err.value.problems) >= 2

    def test_class_index_out_of_range(self, tmp_path):
        bundle = make_cluster_dataset(n_train=20, n_test=20, seed=5)
        manifest = write_dataset(bundle, tmp_path)
        labels = pd.read_csv(tmp_path / "labels.csv")
        labels.loc[0, "class_index"] = 99
        labels.to_csv(tmp_path / "labels.csv", index=False)
        with pytest.raises(DatasetValidationError, match="class index"):
            load_dataset(manifest)


def small_table(n=8, n_classes=2, seed=0):
    rng = np.random.default_rng(seed)
    avg = rng.dirichlet(np.ones(n_classes), size=n)
    ood = -(avg * np.log(avg)).sum(axis=1)
    return OoDScoreTable(
        sample_ids=np.arange(n),
        classes=[f"c{i}" for i in range(n_classes)],
        avg_dist=avg,
        ood_score=ood,
        confidence=avg.max(axis=1),
        predicted_class=avg.argmax(axis=1),
        sample_type=["normal"] * n,
    )


class TestPersist:
    def test_scores_round_trip(self, tmp_path):
        table = small_table()
        path = persist("scores", table, "demo", "run1", base_dir=tmp_path)
        frame = load_scores(path)
        ref = scores_to_frame(table)
        pd.testing.assert_frame_equal(frame, ref)

    def test_distinct_runs_are_retained(self, tmp_path):
        table = small_table()
        p1 = persist("scores", table, "demo", "run1", base_dir=tmp_path)
        p2 = persist("scores", table, "demo", "run2", base_dir=tmp_path)
        assert p1 != p2 and p1.exists() and p2.exists()

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(InvalidArtifactKindError):
            persist("mystery", {}, "demo", "run1", base_dir=tmp_path)

    def test_layout_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        assignment = layout(rng.random((10, 2)), k=5)
        path = persist("layout", assignment, "demo", "run1", base_dir=tmp_path)
        doc = load_layout(path)
        assert doc["grid"] == {"m": 4, "n": 4}
        assert doc["k"] == 5
        assert doc["total_cost"] == assignment.total_cost
        by_cell = {c["cell"]: c["sample_id"] for c in doc["cells"]}
        for i, cell in enumerate(assignment.cell_of_sample):
            assert by_cell[int(cell)] == i
        assert "timings" in doc

    def test_hierarchy_round_trip(self, tmp_path):
        doc = {"nodes": [{"node_id": 0, "parent": None, "category_counts": {"a": 3}, "grid": [3, 3]}]}
        path = persist("hierarchy", doc, "demo", "run1", base_dir=tmp_path)
        assert load_hierarchy(path) == doc


class TestTruth:
    def test_read_flags(self, tmp_path):
        p = tmp_path / "truth.csv"
        pd.DataFrame({"sample_id": [0, 1, 2, 3], "is_ood": [0, 1, 1, 0]}).to_csv(p, index=False)
        flags = read_ood_truth(p)
        assert flags.tolist() == [False, True, True, False]

    def test_rejects_missing_columns(self, tmp_path):
        p = tmp_path / "truth.csv"
        pd.DataFrame({"sample_id": [0], "wrong": [1]}).to_csv(p, index=False)
        with pytest.raises(ValueError):
            read_ood_truth(p)
