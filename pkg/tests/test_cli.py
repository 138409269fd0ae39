import json

import numpy as np
import pytest

from mdboost import load_csv, load_ensemble
from mdboost.cli import dispatch


def run(argv):
    return dispatch(argv)


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "toy.csv"
    assert run(["toygen", "--n", "120", "--seed", "3", "--out", str(path)]) == 0
    return str(path)


class TestExitCodes:
    def test_missing_required_flag(self, capsys):
        assert run(["train", "--algo", "mdboost"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert run(["toygen", "--frobnicate", "1", "--out", "/tmp/x"]) == 1

    def test_no_subcommand(self):
        assert run([]) == 1

    def test_data_error_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n")  # header only, no data rows
        code = run(["train", "--data", str(bad), "--algo", "adaboost",
                    "--out", str(tmp_path / "m.json")])
        assert code == 2
        assert "mdboost train" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path):
        assert run(["predict", "--model", str(tmp_path / "nope.json"),
                    "--data", str(tmp_path / "nope.csv"),
                    "--out", str(tmp_path / "p.csv")]) == 2

    def test_mdboost_requires_d(self, toy_csv, tmp_path):
        assert run(["train", "--data", toy_csv, "--algo", "mdboost",
                    "--out", str(tmp_path / "m.json")]) == 2


class TestTrainPredict:
    def test_train_then_predict_diff_oracle(self, toy_csv, tmp_path):
        model = tmp_path / "model.json"
        assert run(["train", "--data", toy_csv, "--algo", "mdboost",
                    "--d", "10", "--max-iters", "60", "--out", str(model)]) == 0
        preds_path = tmp_path / "preds.csv"
        assert run(["predict", "--model", str(model), "--data", toy_csv,
                    "--out", str(preds_path)]) == 0

        lines = preds_path.read_text().splitlines()
        assert lines[0] == "prediction"
        preds = np.array([int(v) for v in lines[1:]])
        ds = load_csv(toy_csv)
        assert preds.shape[0] == ds.n_examples
        assert set(preds.tolist()) <= {-1, 1}

        # independent diff: training error = 1 - accuracy
        train_error = float(np.mean(preds != ds.labels))
        from mdboost import error_rate
        ensemble, _ = load_ensemble(model)
        assert train_error == pytest.approx(error_rate(ensemble, ds))

    def test_adaboost_train(self, toy_csv, tmp_path):
        model = tmp_path / "ab.json"
        assert run(["train", "--data", toy_csv, "--algo", "adaboost",
                    "--max-iters", "25", "--out", str(model)]) == 0
        doc = json.loads(model.read_text())
        assert doc["delta"] is None
        assert doc["d_param"] == pytest.approx(
            sum(m["weight"] for m in doc["members"]))

    def test_model_schema(self, toy_csv, tmp_path):
        model = tmp_path / "model.json"
        run(["train", "--data", toy_csv, "--algo", "mdboost", "--d", "5",
             "--max-iters", "20", "--out", str(model)])
        doc = json.loads(model.read_text())
        assert set(doc) == {"delta", "d_param", "members"}
        assert doc["delta"] == 1e-6
        assert doc["d_param"] == 5.0
        for m in doc["members"]:
            assert set(m) == {"weight", "feature_index", "threshold", "polarity"}


class TestMargins:
    def test_margins_csv(self, toy_csv, tmp_path):
        model = tmp_path / "model.json"
        run(["train", "--data", toy_csv, "--algo", "mdboost", "--d", "8",
             "--max-iters", "40", "--out", str(model)])
        out = tmp_path / "margins.csv"
        assert run(["margins", "--model", str(model), "--data", toy_csv,
                    "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# mean=")
        assert lines[4] == "margin,cumulative_frequency"
        last = lines[-1].split(",")
        assert float(last[1]) == 1.0


class TestStats:
    @pytest.fixture
    def errors_csv(self, tmp_path):
        path = tmp_path / "errors.csv"
        rows = ["dataset,AB,LP,MD"]
        rng = np.random.default_rng(0)
        for i in range(13):
            ab = 20 + rng.uniform(0, 10)
            rows.append(f"ds{i},{ab:.2f},{ab + 1:.2f},{ab - 1:.2f}")
        path.write_text("\n".join(rows) + "\n")
        return str(path)

    def test_wilcoxon_json(self, errors_csv, tmp_path):
        out = tmp_path / "w.json"
        assert run(["stats", "--errors", errors_csv, "--test", "wilcoxon",
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["test"] == "wilcoxon"
        pairs = {(r["algorithm"], r["against"]) for r in doc["results"]}
        assert len(pairs) == 6  # ordered pairs of 3 algorithms
        md_vs_lp = next(r for r in doc["results"]
                        if r["algorithm"] == "MD" and r["against"] == "LP")
        assert md_vs_lp["statistic"] == 91.0
        assert md_vs_lp["better"] is True

    def test_friedman_json(self, errors_csv, tmp_path):
        out = tmp_path / "f.json"
        assert run(["stats", "--errors", errors_csv, "--test", "friedman",
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        ranks = doc["results"]["average_ranks"]
        assert ranks["MD"] == 1.0 and ranks["LP"] == 3.0
        assert doc["results"]["reject"] is True

    def test_bonferroni_dunn_json(self, errors_csv, tmp_path):
        out = tmp_path / "bd.json"
        assert run(["stats", "--errors", errors_csv, "--test", "bonferroni-dunn",
                    "--control", "MD", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert all(r["control"] == "MD" for r in doc["results"])
        assert len(doc["results"]) == 2

    def test_bonferroni_dunn_all_controls(self, errors_csv, tmp_path):
        out = tmp_path / "bd_all.json"
        assert run(["stats", "--errors", errors_csv, "--test", "bonferroni-dunn",
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert len(doc["results"]) == 6

    def test_unknown_control(self, errors_csv, tmp_path):
        assert run(["stats", "--errors", errors_csv, "--test", "bonferroni-dunn",
                    "--control", "XX", "--out", str(tmp_path / "x.json")]) == 2


class TestExperimentCommand:
    def test_runs_config(self, toy_csv, tmp_path):
        config = {
            "data": toy_csv,
            "algorithm": "mdboost",
            "split": {"train_frac": 0.6, "val_frac": 0.2, "test_frac": 0.2,
                      "seed": 1, "repeats": 2},
            "checkpoints": [15],
            "d_grid": [2, 10],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        out = tmp_path / "results.json"
        assert run(["experiment", "--config", str(cfg_path),
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert len(doc["rows"]) == 2
        assert all(0 <= r["test_error"] <= 1 for r in doc["rows"])


class TestDeterminism:
    def test_toygen_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["toygen", "--n", "50", "--seed", "9", "--out", str(a)])
        run(["toygen", "--n", "50", "--seed", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_train_byte_identical(self, toy_csv, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            run(["train", "--data", toy_csv, "--algo", "mdboost", "--d", "5",
                 "--max-iters", "30", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()
