import csv
import json

import pytest
from click.testing import CliRunner

from counterspeech.cli import main
from counterspeech.fixtures import generate_feature_dataset, generate_tweet_fixture


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def scored_csv(path, n=120, seed=0):
    import numpy as np

    rng = np.random.default_rng(seed)
    y = (rng.random(n) < 0.3).astype(int)
    scores = np.clip(np.where(y == 1, rng.normal(0.8, 0.1, n), rng.normal(0.3, 0.15, n)), 0, 1)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["score", "label"])
        for s, l in zip(scores, y):
            writer.writerow([f"{s:.4f}", "hateful" if l else "not_hateful"])


class TestFixtureReplayReport:
    def test_round_trip(self, runner, tmp_path):
        fixture = tmp_path / "f.jsonl"
        store = tmp_path / "run.db"
        made = invoke(runner, ["fixture", "--out", str(fixture), "--n", "200",
                               "--abusive-every", "10", "--seed", "3"])
        assert json.loads(made.output)["abusive"] == 20

        replayed = invoke(runner, [
            "replay", "--fixture", str(fixture), "--seed", "1",
            "--store", str(store), "--theta", "0.8", "--daily-cap", "15",
        ])
        summary = json.loads(replayed.output)
        assert summary["analysed"] == 200
        assert summary["abusive"] == 20
        assert summary["sent"] == 15
        assert summary["suppressed"] == 5

        as_text = invoke(runner, ["report", "--store", str(store)])
        assert "Total tweets analysed: 200" in as_text.output
        assert "10.00%" in as_text.output  # abusive rate

        as_json = invoke(runner, ["report", "--store", str(store), "--format", "json"])
        payload = json.loads(as_json.output)
        assert payload["total_analysed"] == 200
        assert payload["total_abusive"] == 20
        assert payload["total_sent"] == 15
        assert payload["abusive_rate"] == pytest.approx(0.1)

    def test_report_window_flags(self, runner, tmp_path):
        fixture = tmp_path / "f.jsonl"
        store = tmp_path / "run.db"
        generate_tweet_fixture(fixture, 100, abusive_every=10, seed=0, spacing_seconds=3600)
        invoke(runner, ["replay", "--fixture", str(fixture), "--store", str(store)])
        windowed = invoke(runner, [
            "report", "--store", str(store), "--format", "json",
            "--from", "2019-04-01T00:00:00+00:00", "--to", "2019-04-03T02:00:00+00:00",
        ])
        assert json.loads(windowed.output)["total_analysed"] == 50


class TestEvalCommands:
    def test_auc_json(self, runner, tmp_path):
        data = tmp_path / "scores.csv"
        scored_csv(data)
        out = invoke(runner, ["eval", "auc", "--dataset", str(data),
                              "--out", str(tmp_path / "rep")])
        payload = json.loads(out.output)
        assert 0.9 < payload["auc"] <= 1.0
        saved = json.loads((tmp_path / "rep" / "auc.json").read_text())
        assert saved == payload

    def test_cv_outputs_schema(self, runner, tmp_path):
        data = tmp_path / "features.csv"
        generate_feature_dataset(data, 150, seed=1)
        invoke(runner, [
            "eval", "cv", "--dataset", str(data), "--k", "3", "--seed", "0",
            "--out", str(tmp_path / "rep"), "--num-trees", "5", "--max-leaves", "4",
        ])
        with open(tmp_path / "rep" / "cv.csv") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["feature_set", "model", "fold", "auc"]
        assert len(rows) == 1 + 3
        payload = json.loads((tmp_path / "rep" / "cv.json").read_text())
        assert set(payload[0]) == {"model", "feature_set", "k", "fold_aucs", "mean_auc", "std_auc"}

    def test_ablate_outputs_rows_per_group(self, runner, tmp_path):
        data = tmp_path / "features.csv"
        generate_feature_dataset(data, 150, seed=2)
        result = invoke(runner, [
            "eval", "ablate", "--dataset", str(data), "--k", "3", "--seed", "0",
            "--out", str(tmp_path / "rep"), "--num-trees", "5", "--max-leaves", "4",
        ])
        for name in ("all", "toxicity", "sentiment", "hate", "random-baseline"):
            assert name in result.output
        payload = json.loads((tmp_path / "rep" / "ablate.json").read_text())
        assert len(payload) == 5

    def test_kde_outputs_schema(self, runner, tmp_path):
        data = tmp_path / "scores.csv"
        scored_csv(data)
        invoke(runner, ["eval", "kde", "--dataset", str(data), "--out", str(tmp_path / "rep")])
        with open(tmp_path / "rep" / "kde_density.csv") as f:
            header = next(csv.reader(f))
        assert header == ["grid", "density_hateful", "density_not_hateful"]
        with open(tmp_path / "rep" / "kde_histogram.csv") as f:
            hist_rows = list(csv.reader(f))
        assert hist_rows[0] == ["bin_left", "bin_right", "density_hateful", "density_not_hateful"]
        assert len(hist_rows) == 1 + 40
        summary = json.loads((tmp_path / "rep" / "kde.json").read_text())
        for integral in summary["integrals"].values():
            assert integral == pytest.approx(1.0, abs=0.01)


class TestTrain:
    def test_train_writes_model(self, runner, tmp_path):
        data = tmp_path / "features.csv"
        generate_feature_dataset(data, 120, seed=3)
        model_path = tmp_path / "model.json"
        result = invoke(runner, [
            "train", "--dataset", str(data), "--out", str(model_path),
            "--num-trees", "5", "--max-leaves", "4", "--no-sweep",
        ])
        assert model_path.exists()
        obj = json.loads(model_path.read_text())
        assert set(obj) == {"registry", "base_score", "learning_rate", "trees"}
        assert json.loads(result.output.strip().splitlines()[-1])["num_trees"] == 5
