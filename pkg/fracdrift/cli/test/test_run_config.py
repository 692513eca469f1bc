import json

import pytest

import numpy as np
from pydantic import ValidationError

from fracdrift.cli import load_run_config, parse_run_config
from fracdrift.estimation import NormalPrior, UniformPrior
from fracdrift.exceptions import ConfigError


def _config(**sections):
    ret = {
        "model": {"H": 0.3, "sigma": 0.5, "T": 2.0, "N": 64},
        "basis": {"kind": "polynomial", "degree": 1},
    }
    ret.update(sections)
    return ret


def _config_error_path(data, base_dir="."):
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(data, base_dir)
    return excinfo.value.path


def test_minimal():
    cfg = parse_run_config(_config())
    assert cfg.model.H == 0.3
    assert cfg.model.N == 64
    assert cfg.model.grid.horizon == 2.
    assert cfg.model.model.H == 0.3
    assert cfg.basis.degree == 1
    assert cfg.basis.build(0.5).dimension == 2
    assert cfg.theta is None
    assert cfg.prior is None
    assert cfg.c is None
    assert cfg.seed == 0
    assert cfg.method == "cholesky"
    assert cfg.rule == "trapezoid"
    assert cfg.lattice.n_bins == 201
    assert cfg.mc is None

    with pytest.raises(ConfigError, match="prior.normal"):
        cfg.require_prior(NormalPrior)
    with pytest.raises(ConfigError, match="^c:"):
        cfg.require_cost()
    with pytest.raises(ConfigError, match="basis.degree"):
        cfg.require_polynomial(2)


def test_full():
    cfg = parse_run_config(_config(
        truth={"theta": [0., 1.]},
        prior={"normal": {"m": [0., 0.], "Sigma": [[1., 0.], [0., 2.]]}},
        c=0.02,
        seed="0xff",
        simulation={"method": "hosking"},
        estimation={"rule": "left"},
        lattice={"n_bins": 101, "hermite_nodes": 9},
        mc={"scenario": "s1", "estimator": "bayes-normal",
            "replications": 50},
    ))
    assert cfg.theta == (0., 1.)
    assert isinstance(cfg.prior, NormalPrior)
    np.testing.assert_array_equal(cfg.prior.covariance(),
                                  [[1., 0.], [0., 2.]])
    assert cfg.c == 0.02
    assert cfg.seed == 255
    assert cfg.method == "hosking"
    assert cfg.rule == "left"
    assert cfg.lattice.n_bins == 101
    assert cfg.lattice.hermite_nodes == 9
    assert cfg.lattice.legendre_nodes == 33
    assert cfg.mc.estimator == "bayes-normal"
    assert cfg.mc.replications == 50

    cfg = parse_run_config(_config(prior={"uniform": {"a": 0, "b": 2}}))
    assert isinstance(cfg.prior, UniformPrior)
    assert cfg.prior.scalar_bounds() == (0., 2.)


def test_unknown_keys():
    assert _config_error_path(_config(output="x")) == "output"
    data = _config()
    data["model"]["h"] = 0.3
    assert _config_error_path(data) == "model.h"
    assert _config_error_path(
        _config(prior={"normal": {"m": [0.], "S": [[1.]]}})) == \
        "prior.normal.S"
    assert _config_error_path(
        _config(mc={"estimator": "ml", "replications": 2, "n": 1})) == \
        "mc.n"


@pytest.mark.parametrize("key, value", [
    ("H", "0.3"), ("H", 1.5), ("H", 0), ("H", True), ("sigma", 0),
    ("T", -1.), ("T", float("inf")), ("sigma", float("nan")), ("N", 2.5),
    ("N", 0), ("N", False), ("N", "64")
])
def test_invalid_model(key, value):
    data = _config()
    data["model"][key] = value
    assert _config_error_path(data) == f"model.{key}"


def test_missing_values():
    data = _config()
    del data["model"]["sigma"]
    assert _config_error_path(data) == "model.sigma"
    assert _config_error_path({"basis": {"kind": "polynomial",
                                         "degree": 1}}) == "model.H"
    assert _config_error_path(_config(basis={"kind": "polynomial"})) == \
        "basis.degree"
    assert _config_error_path(_config(basis={"degree": 1})) == "basis.kind"
    with pytest.raises(ConfigError, match="expected an object"):
        parse_run_config([1, 2])


def test_basis():
    cfg = parse_run_config(
        _config(basis={"kind": "tabulated", "table": "basis.csv"}),
        "/data/run")
    assert cfg.basis.table == "/data/run/basis.csv"
    with pytest.raises(ConfigError, match="polynomial"):
        cfg.require_polynomial()
    with pytest.raises(ConfigError, match="basis.table"):
        cfg.basis.build(1.)

    assert _config_error_path(
        _config(basis={"kind": "tabulated", "table": "a.csv",
                       "degree": 1})) == "basis.degree"
    assert _config_error_path(
        _config(basis={"kind": "polynomial", "degree": 1,
                       "table": "a.csv"})) == "basis.table"
    assert _config_error_path(
        _config(basis={"kind": "spline", "degree": 1})) == "basis.kind"
    assert _config_error_path(
        _config(basis={"kind": "polynomial", "degree": -1})) == \
        "basis.degree"


def test_tabulated_basis(tmp_path):
    (tmp_path / "basis.csv").write_text("t,dphi_0\n0,1\n0.5,1\n1,1\n")
    cfg = parse_run_config(
        _config(basis={"kind": "tabulated", "table": "basis.csv"}),
        str(tmp_path))
    basis = cfg.basis.build(1.)
    assert basis.dimension == 1


def test_invalid_prior_and_truth():
    assert _config_error_path(_config(prior={})) == "prior"
    assert _config_error_path(
        _config(prior={"normal": {"m": [0.], "Sigma": [[1.]]},
                       "uniform": {"a": 0, "b": 1}})) == "prior"
    assert _config_error_path(
        _config(prior={"normal": {"m": [0., 0.],
                                  "Sigma": [[1., 2.], [2., 1.]]}})) == \
        "prior.normal.Sigma"
    assert _config_error_path(
        _config(prior={"normal": {"m": "zero", "Sigma": [[1.]]}})) == \
        "prior.normal.m"
    assert _config_error_path(
        _config(prior={"uniform": {"a": 1, "b": 0}})) == "prior.uniform.b"
    assert _config_error_path(
        _config(prior={"uniform": {"a": 0}})) == "prior.uniform.b"

    assert _config_error_path(_config(truth={"theta": [1.]})) == \
        "truth.theta"
    assert _config_error_path(_config(truth={"theta": [[1., 2.]]})) == \
        "truth.theta"


def test_invalid_options():
    assert _config_error_path(_config(c=-0.1)) == "c"
    assert _config_error_path(_config(seed=-1)) == "seed"
    assert _config_error_path(_config(seed="abc")) == "seed"
    assert _config_error_path(
        _config(simulation={"method": "fft"})) == "simulation.method"
    assert _config_error_path(
        _config(estimation={"rule": "midpoint"})) == "estimation.rule"
    assert _config_error_path(_config(lattice={"n_bins": 10})) == "lattice"
    assert _config_error_path(
        _config(lattice={"n_sd": 0})) == "lattice.n_sd"
    assert _config_error_path(
        _config(mc={"estimator": "ridge", "replications": 2})) == \
        "mc.estimator"
    assert _config_error_path(
        _config(mc={"estimator": "ml", "replications": 0})) == \
        "mc.replications"


def test_load_run_config(tmp_path):
    fp = tmp_path / "config.json"
    fp.write_text(json.dumps(_config(seed=3)))
    assert load_run_config(str(fp)).seed == 3

    fp.write_text("{model: }")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_run_config(str(fp))
    with pytest.raises(ConfigError, match="cannot read"):
        load_run_config(str(tmp_path / "missing.json"))


def test_error_messages():
    with pytest.raises(ConfigError, match="^model.h: unknown key$"):
        data = _config()
        data["model"]["h"] = 0.3
        parse_run_config(data)
    with pytest.raises(ConfigError, match="^model.N: missing value$"):
        parse_run_config(_config(model={"H": 0.3, "sigma": 1., "T": 1.}))
    with pytest.raises(ConfigError, match="^model: expected an object$"):
        parse_run_config(_config(model=[0.3, 1., 1., 64]))
    with pytest.raises(ConfigError, match="expected a number, got '0.3'"):
        parse_run_config(_config(model={"H": "0.3", "sigma": 1., "T": 1.,
                                        "N": 64}))
    with pytest.raises(ConfigError, match="expected b >= a = 1.0"):
        parse_run_config(_config(prior={"uniform": {"a": 1, "b": 0}}))
    with pytest.raises(ConfigError, match="expected one of cholesky"):
        parse_run_config(_config(simulation={"method": "fft"}))
    with pytest.raises(ConfigError, match="^prior: expected exactly one"):
        parse_run_config(_config(prior={}))
    # the path leaves out array indices
    with pytest.raises(ConfigError, match=r"^truth.theta: expected a number"):
        parse_run_config(_config(truth={"theta": [0., None]}))


def test_parsed_sections_are_frozen():
    cfg = parse_run_config(_config(mc={"estimator": "ml",
                                       "replications": 2}))
    assert cfg.mc.scenario == "default"
    with pytest.raises(ValidationError):
        cfg.model.H = 0.4
