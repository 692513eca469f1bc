import json
import logging

import pytest

import numpy as np

from fracdrift.cli import main
from fracdrift.utility import read_csv_columns


def _write_config(tmp_path, name="config.json", **sections):
    data = {
        "model": {"H": 0.3, "sigma": 1.0, "T": 1.0, "N": 64},
        "basis": {"kind": "polynomial", "degree": 1},
        "seed": 7,
    }
    data.update(sections)
    fp = tmp_path / name
    fp.write_text(json.dumps(data))
    return str(fp)


def _run(command, config, out, *extra):
    return main([command, "--config", config, "--out", str(out), *extra])


class TestUsage:
    def test_help(self, capsys):
        assert main(["--help"]) == 0
        assert "estimate-ml" in capsys.readouterr().out
        assert main(["simulate", "--help"]) == 0
        assert "--seed" in capsys.readouterr().out

    def test_usage_errors(self, tmp_path):
        config = _write_config(tmp_path)
        assert main([]) == 2
        assert main(["fit", "--config", config]) == 2
        assert main(["simulate"]) == 2
        assert _run("simulate", config, tmp_path, "--seed", "-1") == 2
        assert _run("simulate", config, tmp_path, "--format", "xml") == 2
        assert _run("mc", config, tmp_path, "--workers", "0") == 2

    def test_config_error(self, tmp_path, caplog):
        config = _write_config(
            tmp_path, model={"H": 1.2, "sigma": 1.0, "T": 1.0, "N": 64})
        assert _run("simulate", config, tmp_path / "out") == 2
        assert "model.H" in caplog.text
        assert not (tmp_path / "out").exists()

        assert _run("simulate", str(tmp_path / "missing.json"),
                    tmp_path) == 2
        config = _write_config(tmp_path)
        assert _run("mc", config, tmp_path) == 2
        assert "mc:" in caplog.text
        assert _run("cost-curve", config, tmp_path) == 2
        assert "prior.normal" in caplog.text

    def test_runtime_error(self, tmp_path, caplog):
        config = _write_config(tmp_path,
                               basis={"kind": "polynomial", "degree": 0})
        out = tmp_path / "out"
        assert _run("estimate-ml", config, out) == 1
        assert "estimate-ml" in caplog.text
        assert not out.exists() or not any(out.iterdir())

    def test_invalid_input(self, tmp_path, caplog):
        config = _write_config(tmp_path)
        bad = tmp_path / "bad.csv"
        bad.write_text("t,x\n0,1\n")
        assert _run("transform", config, tmp_path, "--input",
                    str(bad)) == 2
        assert "--input" in caplog.text


class TestSimulate:
    def test_path(self, tmp_path, caplog):
        caplog.set_level(logging.INFO)
        config = _write_config(
            tmp_path, model={"H": 0.5, "sigma": 1.0, "T": 1.0, "N": 256})
        assert _run("simulate", config, tmp_path) == 0
        assert "Standardized increments" in caplog.text

        header, data = read_csv_columns(str(tmp_path / "path.csv"))
        assert header == ["t", "value"]
        assert data.shape == (257, 2)
        np.testing.assert_allclose(data[:, 0], np.linspace(0., 1., 257))
        assert data[0, 1] == 0.
        # Brownian increments
        z = np.diff(data[:, 1]) * 16.
        assert abs(np.var(z) - 1.) < 0.3

    def test_determinism(self, tmp_path):
        config = _write_config(tmp_path, truth={"theta": [0.5, 1.]})
        for name, extra in [("a", ()), ("b", ()), ("c", ("--seed", "8")),
                            ("d", ("--seed", "7"))]:
            assert _run("simulate", config, tmp_path / name, *extra) == 0
        a = (tmp_path / "a" / "path.csv").read_bytes()
        assert (tmp_path / "b" / "path.csv").read_bytes() == a
        assert (tmp_path / "c" / "path.csv").read_bytes() != a
        assert (tmp_path / "d" / "path.csv").read_bytes() == a

    def test_json_format(self, tmp_path):
        config = _write_config(tmp_path)
        assert _run("simulate", config, tmp_path, "--format", "json") == 0
        data = json.loads((tmp_path / "path.json").read_text())
        assert sorted(data) == ["t", "value"]
        assert len(data["t"]) == 65
        assert data["value"][0] == 0.


class TestPipeline:
    def test_round_trip(self, tmp_path):
        config = _write_config(tmp_path, truth={"theta": [0.2, 1.]})
        sim = tmp_path / "sim"
        assert _run("simulate", config, sim) == 0
        path = str(sim / "path.csv")

        for command, name in [("transform", "martingale.csv"),
                              ("estimate-ml", "summary.json"),
                              ("estimate-ml", "trajectory.csv")]:
            assert _run(command, config, tmp_path / "direct") == 0
            assert _run(command, config, tmp_path / "piped",
                        "--input", path) == 0
            assert (tmp_path / "direct" / name).read_bytes() == \
                (tmp_path / "piped" / name).read_bytes()

        header, data = read_csv_columns(
            str(tmp_path / "direct" / "martingale.csv"))
        assert header == ["t", "M", "w", "m"]
        assert data.shape == (65, 4)

    def test_planted_parameters(self, tmp_path, capsys):
        theta = [0.3, 1.5, -0.8]
        config = _write_config(
            tmp_path, model={"H": 0.2, "sigma": 1e-8, "T": 1.0, "N": 512},
            basis={"kind": "polynomial", "degree": 2},
            truth={"theta": theta})
        assert _run("estimate-ml", config, tmp_path) == 0
        assert "theta_hat = " in capsys.readouterr().out

        summary = json.loads((tmp_path / "summary.json").read_text())
        np.testing.assert_allclose(summary["theta_hat"], theta, atol=1e-4)
        assert summary["estimated"] == [False, True, True]
        assert summary["t"] == 1.

        header, data = read_csv_columns(str(tmp_path / "trajectory.csv"))
        assert header == ["t", "theta_0", "theta_1", "theta_2", "cond"]
        assert data.shape == (512, 5)

    def test_early_ill_conditioned_times(self, tmp_path, caplog):
        config = _write_config(
            tmp_path, model={"H": 0.3, "sigma": 1.0, "T": 1.0, "N": 512},
            basis={"kind": "polynomial", "degree": 3},
            truth={"theta": [0., 1., 0.5, -0.5]})
        assert _run("estimate-ml", config, tmp_path) == 0
        assert "ill-conditioned" in caplog.text

        header, data = read_csv_columns(str(tmp_path / "trajectory.csv"))
        assert data.shape == (512, 6)
        assert np.isnan(data[0, 2]) and data[0, -1] > 1e12
        assert np.all(np.isfinite(data[-1]))
        summary = json.loads((tmp_path / "summary.json").read_text())
        np.testing.assert_allclose(data[-1, 1:-1], summary["theta_hat"],
                                   rtol=1e-9)


class TestBayes:
    def test_normal(self, tmp_path):
        config = _write_config(
            tmp_path, truth={"theta": [0.2, 1.]},
            prior={"normal": {"m": [0., 0.], "Sigma": [[1., 0.], [0., 1.]]}})
        assert _run("estimate-bayes", config, tmp_path) == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["mean"][0] == 0.2
        assert summary["cov"][0] == [0., 0.]
        assert 0. < summary["mse_trace"] < 1.

    def test_uniform(self, tmp_path):
        config = _write_config(tmp_path, truth={"theta": [0., 1.]},
                               prior={"uniform": {"a": 0., "b": 2.}})
        assert _run("estimate-bayes", config, tmp_path) == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert 0. < summary["estimate"] < 2.
        assert 0. < summary["mse"] < 1. / 3.

        header, data = read_csv_columns(str(tmp_path / "posterior.csv"))
        assert header == ["t", "estimate", "variance"]
        assert data[0, 1] == 1.
        assert data[-1, 1] == pytest.approx(summary["estimate"], rel=1e-12)

    def test_uniform_needs_degree_one(self, tmp_path, caplog):
        config = _write_config(tmp_path,
                               basis={"kind": "polynomial", "degree": 2},
                               prior={"uniform": {"a": 0., "b": 2.}})
        assert _run("estimate-bayes", config, tmp_path) == 2
        assert "basis.degree" in caplog.text

    @pytest.mark.parametrize("prior", [
        {"normal": {"m": [0., 0.5], "Sigma": [[1., 0.], [0., 0.5]]}},
        {"uniform": {"a": -1., "b": 1.}},
    ])
    def test_oracle_check(self, tmp_path, prior):
        config = _write_config(tmp_path, truth={"theta": [0., 0.3]},
                               prior=prior)
        assert _run("oracle-check", config, tmp_path) == 0
        report = json.loads((tmp_path / "oracle.json").read_text())
        assert report["agree"] is True


class TestStopping:
    def test_cost_curve(self, tmp_path):
        config = _write_config(
            tmp_path, model={"H": 0.2, "sigma": 1.0, "T": 30.0, "N": 300},
            basis={"kind": "polynomial", "degree": 2},
            prior={"normal": {"m": [0., 0., 0.],
                              "Sigma": np.eye(3).tolist()}},
            c=0.02)
        assert _run("cost-curve", config, tmp_path) == 0
        header, data = read_csv_columns(str(tmp_path / "F_curve.csv"))
        assert header == ["t", "F"]
        assert data.shape == (301, 2)
        assert data[0, 1] == pytest.approx(3.)

        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["interior_minimum"] is True
        assert summary["n"] == 2
        assert summary["c"] == 0.02
        assert summary["unimodal"] is True
        assert summary["expected_cost"] <= data[:, 1].min() + 1e-12

        assert _run("cost-curve", config, tmp_path, "--format", "json") == 0
        curve = json.loads((tmp_path / "F_curve.json").read_text())
        np.testing.assert_array_equal(curve["F"], data[:, 1])

    def test_stop_normal(self, tmp_path):
        config = _write_config(
            tmp_path, model={"H": 0.2, "sigma": 1.0, "T": 30.0, "N": 300},
            basis={"kind": "polynomial", "degree": 2},
            truth={"theta": [0., 0.5, -0.1]},
            prior={"normal": {"m": [0., 0., 0.],
                              "Sigma": np.eye(3).tolist()}},
            c=0.02)
        assert _run("stop-normal", config, tmp_path) == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["tau"] <= summary["t_stop"] <= summary["tau"] + 0.1
        assert len(summary["posterior"]["mean"]) == 3
        assert summary["posterior"]["t"] == summary["t_stop"]

    def test_stop_uniform(self, tmp_path):
        config = _write_config(
            tmp_path, model={"H": 0.3, "sigma": 1.0, "T": 2.0, "N": 20},
            truth={"theta": [0., 1.]}, prior={"uniform": {"a": 0., "b": 2.}},
            c=0.05, lattice={"n_bins": 51})
        assert _run("stop-uniform", config, tmp_path) == 0
        lines = (tmp_path / "policy.csv").read_text().splitlines()
        assert lines[0] == "t,M,action"
        assert len(lines) == 1 + 21 * 51

        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["tau"] is None
        assert 0. < summary["expected_cost"] < 1. / 3.
        assert 0. < summary["t_stop"] <= 2.
        assert 0. <= summary["estimate"] <= 2.

    def test_stop_uniform_input_mismatch(self, tmp_path, caplog):
        config = _write_config(
            tmp_path, model={"H": 0.3, "sigma": 1.0, "T": 2.0, "N": 20},
            prior={"uniform": {"a": 0., "b": 2.}}, c=0.05,
            lattice={"n_bins": 51})
        path = tmp_path / "short.csv"
        path.write_text("t,value\n" + "".join(
            f"{0.2 * k},{0.1 * k}\n" for k in range(11)))
        out = tmp_path / "out"
        assert _run("stop-uniform", config, out, "--input", str(path)) == 1
        assert "11 values" in caplog.text
        # nothing is written when the observation is rejected
        assert not out.exists() or not any(out.iterdir())


class TestMonteCarlo:
    def test_report(self, tmp_path):
        config = _write_config(
            tmp_path, truth={"theta": [0., 1.]},
            mc={"scenario": "quick", "estimator": "ml", "replications": 20})
        assert _run("mc", config, tmp_path / "a") == 0
        assert _run("mc", config, tmp_path / "b", "--workers", "3") == 0
        report = (tmp_path / "a" / "report.csv").read_bytes()
        assert (tmp_path / "b" / "report.csv").read_bytes() == report

        lines = report.decode().splitlines()
        assert lines[0] == "scenario,statistic,value,se,n_reps"
        assert lines[1].startswith("quick,mean[theta_1],")
        assert lines[1].endswith(",20")

    def test_invalid_experiment(self, tmp_path, caplog):
        config = _write_config(
            tmp_path, mc={"estimator": "bayes-normal", "replications": 5})
        assert _run("mc", config, tmp_path) == 2
        assert "normal prior" in caplog.text
