import json

import numpy as np
import pandas as pd
import pytest

from oodgrid.cli import main


@pytest.fixture(scope="module")
def demo_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "demo"
    assert main(["gen-synthetic", "--kind", "color-bias", "--out", str(out),
                 "--n-train", "150", "--n-test", "150", "--seed", "0"]) == 0
    return out


class TestGenSynthetic:
    def test_writes_manifest_layout(self, demo_dataset):
        manifest = json.loads((demo_dataset / "manifest.json").read_text())
        assert manifest["n_samples"] == 300
        assert len(manifest["feature_sets"]) == 6
        for rel in ["labels.csv", "split.csv", "ood_truth.csv", "coords2d.csv"]:
            assert (demo_dataset / rel).exists()

    def test_clusters_kind(self, tmp_path):
        out = tmp_path / "cl"
        assert main(["gen-synthetic", "--kind", "clusters", "--out", str(out),
                     "--n-train", "80", "--n-test", "80"]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["n_samples"] == 160

    def test_deterministic_given_seed(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["gen-synthetic", "--out", str(a), "--seed", "9", "--n-train", "40", "--n-test", "40"])
        main(["gen-synthetic", "--out", str(b), "--seed", "9", "--n-train", "40", "--n-test", "40"])
        for rel in ["labels.csv", "split.csv", "ood_truth.csv", "features_hl_net_a.csv"]:
            assert (a / rel).read_text() == (b / rel).read_text()


class TestDetect:
    def test_scores_and_eval(self, demo_dataset, tmp_path):
        out = tmp_path / "run"
        rc = main(["detect", str(demo_dataset / "manifest.json"), "--n-models", "3",
                   "--truth", str(demo_dataset / "ood_truth.csv"), "--out", str(out)])
        assert rc == 0
        frame = pd.read_csv(out / "scores.csv")
        assert len(frame) == 300
        assert (frame["ood_score"] >= 0).all()
        assert (frame["ood_score"] <= np.log(2) + 1e-9).all()
        evaldoc = json.loads((out / "eval.json").read_text())
        assert evaldoc["auroc"] > 0.5
        assert (out / "detect_scores.png").exists()
        assert (out / "detect_roc_pr.png").exists()

    def test_unknown_feature_set_fails(self, demo_dataset, tmp_path):
        rc = main(["detect", str(demo_dataset / "manifest.json"),
                   "--feature-sets", "nope", "--out", str(tmp_path / "x")])
        assert rc != 0


class TestLayoutCommand:
    def test_layout_artifacts(self, demo_dataset, tmp_path):
        out = tmp_path / "run"
        rc = main(["layout", str(demo_dataset / "manifest.json"), "--split", "test",
                   "--k", "40", "--baseline", "--out", str(out)])
        assert rc == 0
        doc = json.loads((out / "layout.json").read_text())
        assert doc["grid"] == {"m": 13, "n": 13}  # 150 test samples
        assert doc["cr"] >= 0.0
        assert "timings" in doc and "t_baseline_seconds" in doc["timings"]
        assert (out / "layout.png").exists()

    def test_oversized_k_clamps(self, demo_dataset, tmp_path, capsys):
        import warnings

        out = tmp_path / "run2"
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rc = main(["layout", str(demo_dataset / "manifest.json"), "--split", "test",
                       "--k", "9999", "--out", str(out)])
        assert rc == 0
        assert any("clamping" in str(w.message) for w in caught)
        doc = json.loads((out / "layout.json").read_text())
        assert doc["k"] == 169


class TestBenchLap:
    def test_csv_and_figures(self, tmp_path):
        out = tmp_path / "bench"
        rc = main(["bench-lap", "--n", "100", "--k", "5,10", "--trials", "2",
                   "--seed", "1", "--out", str(out)])
        assert rc == 0
        frame = pd.read_csv(out / "bench.csv")
        assert list(frame.columns) == ["dataset", "N", "k", "trial", "c_k", "c_opt", "cr",
                                       "t_knn_seconds", "t_baseline_seconds"]
        assert len(frame) == 4
        assert (frame["cr"] >= 0).all()
        assert (out / "bench_cost_ratio.png").exists()
        assert (out / "bench_time.png").exists()

    def test_non_square_n_fails_cleanly(self, tmp_path):
        rc = main(["bench-lap", "--n", "50", "--k", "5", "--trials", "1",
                   "--out", str(tmp_path / "b")])
        assert rc == 1


class TestEvalOod:
    def test_matches_detect_eval(self, demo_dataset, tmp_path):
        run = tmp_path / "run"
        main(["detect", str(demo_dataset / "manifest.json"), "--n-models", "1",
              "--truth", str(demo_dataset / "ood_truth.csv"), "--out", str(run)])
        # restrict scores to the test split so the standalone command sees
        # the same population detect evaluated
        split = pd.read_csv(demo_dataset / "split.csv")
        scores = pd.read_csv(run / "scores.csv")
        test_ids = split[split["split"] == "test"]["sample_id"]
        scores[scores["sample_id"].isin(test_ids)].to_csv(run / "scores_test.csv", index=False)
        out = tmp_path / "eval"
        rc = main(["eval-ood", str(run / "scores_test.csv"), str(demo_dataset / "ood_truth.csv"),
                   "--out", str(out)])
        assert rc == 0
        a = json.loads((run / "eval.json").read_text())
        b = json.loads((out / "eval.json").read_text())
        assert a["auroc"] == pytest.approx(b["auroc"], abs=1e-12)
        assert (out / "eval_roc_pr.png").exists()

    def test_disjoint_ids_fail(self, tmp_path):
        s = tmp_path / "s.csv"
        t = tmp_path / "t.csv"
        pd.DataFrame({"sample_id": [0], "ood_score": [1.0], "ood_score_normalized": [1.0],
                      "confidence": [0.9], "predicted_class": [0], "sample_type": ["normal"]}).to_csv(s, index=False)
        pd.DataFrame({"sample_id": [5], "is_ood": [1]}).to_csv(t, index=False)
        assert main(["eval-ood", str(s), str(t)]) == 1
