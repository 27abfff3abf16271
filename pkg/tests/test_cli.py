import json
import math

import numpy as np
import pytest

from logitsimplex import validate_simplex
from logitsimplex.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


@pytest.fixture
def batch(tmp_path):
    return write(
        tmp_path,
        "batch.json",
        {"C": 2, "items": [{"mean": [0, 0], "var": [1, 1]}, {"mean": [1.0, -0.5], "var": [0.2, 0.7]}]},
    )


class TestPredict:
    @pytest.mark.parametrize(
        "act", ["exp", "normcdf", "sigmoid", "softmax-mf", "laplace-bridge", "shekhovtsov", "mc"]
    )
    def test_round_trip(self, batch, tmp_path, act):
        out = tmp_path / "p.json"
        assert main(["predict", batch, "--activation", act, "--out", str(out)]) == 0
        rows = json.loads(out.read_text())
        assert len(rows) == 2
        for r in rows:
            validate_simplex(np.array(r))

    def test_mc_seed_determinism(self, batch, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for p in (a, b):
            assert main(["predict", batch, "--activation", "mc", "--seed", "4", "--out", str(p)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_negative_variance(self, tmp_path, capsys):
        f = write(tmp_path, "bad.json", {"C": 2, "items": [{"mean": [0, 0], "var": [1, -1]}]})
        assert main(["predict", f]) == 1
        assert "item 0" in capsys.readouterr().err

    def test_wrong_length(self, tmp_path, capsys):
        f = write(tmp_path, "bad.json", {"C": 3, "items": [{"mean": [0, 0, 0], "var": [1, 1]}]})
        assert main(["predict", f]) == 1
        assert "var" in capsys.readouterr().err

    def test_laplace_numerical_failure(self, tmp_path):
        f = write(tmp_path, "lb.json", {"C": 2, "items": [{"mean": [0, 1], "var": [0, 1]}]})
        assert main(["predict", f, "--activation", "laplace-bridge"]) == 2

    def test_unknown_activation(self, batch):
        assert main(["predict", batch, "--activation", "relu"]) == 1


class TestDirichlet:
    def test_gamma_ones(self, tmp_path, capsys):
        f = write(tmp_path, "d.json", {"C": 2, "items": [{"mean": [0, 0], "var": [1, 1]}]})
        assert main(["dirichlet", f]) == 0
        out = json.loads(capsys.readouterr().out)
        np.testing.assert_allclose(out[0]["gamma"], [1.0, 1.0], atol=1e-12)
        assert set(out[0]) == {"gamma", "mean", "expected_entropy", "mutual_information", "predictive_entropy"}

    def test_zero_sigma(self, tmp_path, capsys):
        f = write(tmp_path, "d.json", {"C": 3, "items": [{"mean": [0, 1, 2], "var": [0, 0, 0]}]})
        assert main(["dirichlet", f, "--activation", "sigmoid"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert sum(out[0]["gamma"]) > 1e6
        assert out[0]["mutual_information"] <= 1e-6

    def test_malformed(self, tmp_path):
        assert main(["dirichlet", write(tmp_path, "x.json", "{not json")]) == 1
        assert main(["dirichlet", str(tmp_path / "missing.json")]) == 1

    def test_matching_failure(self, tmp_path, capsys):
        f = write(tmp_path, "d.json", {"C": 2, "items": [{"mean": [0, 0], "var": [1, 1]}]})
        assert main(["dirichlet", f, "--activation", "exp"]) == 2
        assert "class 0" in capsys.readouterr().err


class TestBench:
    def test_fig1(self, tmp_path):
        args = ["bench", "fig1", "--classes", "2,10", "--datasets", "5", "--seed", "7", "--threads", "1"]
        assert main(args + ["--out-dir", str(tmp_path / "a")]) == 0
        assert main(args + ["--out-dir", str(tmp_path / "b")]) == 0
        csv = (tmp_path / "a" / "fig1.csv").read_text()
        assert csv == (tmp_path / "b" / "fig1.csv").read_text()
        lines = csv.splitlines()
        assert lines[0] == "method,C,mean_kl,std_kl,n_excluded"
        assert {l.split(",")[1] for l in lines[1:]} == {"2", "10"}
        assert json.loads((tmp_path / "a" / "fig1.json").read_text())["config"]["master_seed"] == 7

    def test_theorem_zero_box(self, tmp_path, capsys):
        args = ["bench", "theorem", "--var-range", "0,0", "--trials", "5", "--grid-samples", "1000",
                "--truth-samples", "1000", "--out-dir", str(tmp_path)]
        assert main(args) == 0
        summary = json.loads((tmp_path / "theorem.json").read_text())
        assert summary["M"] == 0
        assert "M: 0.0" in capsys.readouterr().out

    def test_mc_scaling_bad_classes(self, tmp_path):
        assert main(["bench", "mc-scaling", "--classes", "10,20", "--out-dir", str(tmp_path)]) == 1

    def test_bad_config(self, tmp_path):
        assert main(["bench", "fig1", "--datasets", "0", "--out-dir", str(tmp_path)]) == 1
        assert main(["bench", "fig1", "--classes", "a,b"]) == 1


class TestEval:
    def test_one_hot(self, tmp_path, capsys):
        f = write(tmp_path, "e.json", {"probs": [[1, 0], [0, 1], [1, 0]], "labels": [0, 1, 0]})
        assert main(["eval", f, "--metrics", "acc,nll"]) == 0
        out = capsys.readouterr().out
        assert "acc: 1" in out
        assert float(out.split("nll: ")[1].split()[0]) == pytest.approx(0.0, abs=1e-12)

    def test_handcrafted(self, tmp_path, capsys):
        doc = {
            "probs": [[0.55, 0.45], [0.42, 0.58], [0.88, 0.12], [0.1, 0.9]],
            "labels": [0, 0, 0, 0],
            "ood": [0, 0, 1, 1],
            "scores": [0.1, 0.4, 0.35, 0.8],
        }
        f = write(tmp_path, "e.json", doc)
        assert main(["eval", f, "--metrics", "ece,auroc,acc,binary-logprob"]) == 0
        vals = dict(l.split(": ") for l in capsys.readouterr().out.splitlines())
        assert float(vals["ece"]) == pytest.approx((abs(1 - 0.55 - 0.58) + abs(1 - 0.88 - 0.9)) / 4)
        assert float(vals["auroc"]) == 0.75
        assert float(vals["acc"]) == 0.5
        expected = np.mean([math.log(0.55), math.log(0.42), math.log(0.88), math.log(0.1)])
        assert float(vals["binary-logprob"]) == pytest.approx(expected)

    def test_single_class_auroc(self, tmp_path):
        f = write(tmp_path, "e.json", {"probs": [[0.5, 0.5], [0.9, 0.1]], "labels": [0, 1], "ood": [1, 1]})
        assert main(["eval", f, "--metrics", "auroc"]) == 1

    def test_label_out_of_range(self, tmp_path):
        f = write(tmp_path, "e.json", {"probs": [[0.5, 0.5]], "labels": [2]})
        assert main(["eval", f]) == 1

    def test_unknown_metric(self, tmp_path):
        f = write(tmp_path, "e.json", {"probs": [[0.5, 0.5]], "labels": [0]})
        assert main(["eval", f, "--metrics", "brier"]) == 1


def test_module_entry_point(batch):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "logitsimplex", "predict", batch], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert len(json.loads(out.stdout)) == 2
