"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import json
import os.path as osp
from dataclasses import dataclass, field
from typing import (
    Annotated, Dict, List, Literal, Optional, Sequence, Tuple
)

import numpy as np
from pydantic import (
    AfterValidator, BaseModel, BeforeValidator, ConfigDict, Field,
    FiniteFloat, StrictInt, StrictStr, ValidationError, ValidationInfo,
    field_validator, model_validator
)

from ..basis import DriftBasis, load_tabulated_basis
from ..config import config
from ..core import HurstModel, TimeGrid, make_hurst_model
from ..estimation import NormalPrior, Prior, StatisticLattice, UniformPrior
from ..estimation.information import SCORE_RULES
from ..exceptions import ConfigError, FracDriftError
from ..harness import ESTIMATORS
from ..simulation.fbm import METHODS
from ..utility import parse_seed

POLYNOMIAL = "polynomial"
TABULATED = "tabulated"


def _number(v):
    # JSON booleans are ints in Python
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"expected a number, got {v!r}")
    return v


def _one_of(choices: Sequence[str]) -> AfterValidator:
    def check(v: str) -> str:
        if v not in choices:
            raise ValueError(
                f"expected one of {', '.join(choices)}, got {v!r}")
        return v
    return AfterValidator(check)


Number = Annotated[FiniteFloat, BeforeValidator(_number)]
NonEmptyStr = Annotated[StrictStr, Field(min_length=1)]


class _Strict(BaseModel):
    """JSON object which rejects unknown keys."""

    model_config = ConfigDict(extra="forbid", frozen=True)


class ModelConfig(_Strict):
    H: Number = Field(gt=0., lt=1.)
    sigma: Number = Field(gt=0.)
    T: Number = Field(gt=0.)
    N: StrictInt = Field(ge=1)

    @property
    def model(self) -> HurstModel:
        return make_hurst_model(self.H)

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.uniform(self.T, self.N)


class BasisConfig(_Strict):
    """Polynomial basis of a degree or a basis tabulated in a CSV file.

    :ivar table: path of the table, relative paths are resolved against
        the directory of the config file.
    """

    kind: Literal["polynomial", "tabulated"]
    degree: Optional[Annotated[StrictInt, Field(ge=0)]] = Field(
        default=None, validate_default=True)
    table: Optional[NonEmptyStr] = Field(default=None,
                                         validate_default=True)

    @field_validator("degree")
    @classmethod
    def _check_degree(cls, v: Optional[int],
                      info: ValidationInfo) -> Optional[int]:
        kind = info.data.get("kind")
        if kind == POLYNOMIAL and v is None:
            raise ValueError("missing value")
        if kind == TABULATED and v is not None:
            raise ValueError("not allowed for a tabulated basis")
        return v

    @field_validator("table")
    @classmethod
    def _check_table(cls, v: Optional[str],
                     info: ValidationInfo) -> Optional[str]:
        kind = info.data.get("kind")
        if kind == TABULATED and v is None:
            raise ValueError("expected a file path")
        if kind == POLYNOMIAL and v is not None:
            raise ValueError("not allowed for a polynomial basis")
        return v

    def build(self, sigma: float) -> DriftBasis:
        if self.kind == POLYNOMIAL:
            return DriftBasis.polynomial(self.degree, sigma)
        try:
            return load_tabulated_basis(self.table, sigma)
        except (OSError, ValueError) as e:
            raise ConfigError(str(e), path="basis.table") from e


class McConfig(_Strict):
    scenario: NonEmptyStr = "default"
    estimator: Annotated[StrictStr, _one_of(ESTIMATORS)]
    replications: StrictInt = Field(ge=1)


class _NormalPrior(_Strict):
    m: List[Number] = Field(min_length=1)
    Sigma: List[List[Number]] = Field(min_length=1)


class _UniformPrior(_Strict):
    a: Number
    b: Number

    @field_validator("b")
    @classmethod
    def _check_order(cls, v: float, info: ValidationInfo) -> float:
        a = info.data.get("a")
        if a is not None and a > v:
            raise ValueError(f"expected b >= a = {a}, got {v}")
        return v


class _Prior(_Strict):
    normal: Optional[_NormalPrior] = None
    uniform: Optional[_UniformPrior] = None

    @model_validator(mode="after")
    def _check_exclusive(self) -> "_Prior":
        if (self.normal is None) == (self.uniform is None):
            raise ValueError(
                "expected exactly one of 'normal' and 'uniform'")
        return self

    def build(self) -> Prior:
        if self.uniform is not None:
            return UniformPrior(self.uniform.a, self.uniform.b)
        try:
            return NormalPrior(np.array(self.normal.m),
                               np.array(self.normal.Sigma))
        except (FracDriftError, ValueError) as e:
            raise ConfigError(str(e), path="prior.normal.Sigma") from e


class _Truth(_Strict):
    theta: List[Number] = Field(min_length=1)


class _Simulation(_Strict):
    method: Annotated[StrictStr, _one_of(METHODS)] = "cholesky"


class _Estimation(_Strict):
    rule: Annotated[StrictStr, _one_of(SCORE_RULES)] = "trapezoid"


class _Lattice(_Strict):
    n_bins: StrictInt = config["DP_STATISTIC_BINS"]
    n_sd: Number = Field(default=config["DP_STATISTIC_SPAN"], gt=0.)
    hermite_nodes: StrictInt = config["DP_HERMITE_NODES"]
    legendre_nodes: StrictInt = config["DP_LEGENDRE_NODES"]

    def build(self) -> StatisticLattice:
        try:
            return StatisticLattice(**self.model_dump())
        except FracDriftError as e:
            raise ConfigError(str(e), path="lattice") from e


class _Document(_Strict):
    # absent sections are validated as empty objects so that the error
    # names the first missing field
    model: ModelConfig = Field(default_factory=dict, validate_default=True)
    basis: BasisConfig = Field(default_factory=dict, validate_default=True)
    truth: Optional[_Truth] = None
    prior: Optional[_Prior] = None
    c: Optional[Annotated[Number, Field(ge=0.)]] = None
    seed: Annotated[int, BeforeValidator(parse_seed)] = 0
    simulation: _Simulation = _Simulation()
    estimation: _Estimation = _Estimation()
    lattice: _Lattice = _Lattice()
    mc: Optional[McConfig] = None


_MESSAGES = {
    "missing": "missing value",
    "extra_forbidden": "unknown key",
    "model_type": "expected an object",
    "model_attributes_type": "expected an object",
    "dict_type": "expected an object",
}


def _config_error(e: ValidationError) -> ConfigError:
    """Convert the first validation error into a ConfigError at its JSON
    path. Array indices are left out of the path."""
    err = e.errors()[0]
    path = ".".join(str(k) for k in err["loc"] if not isinstance(k, int))
    msg = _MESSAGES.get(err["type"], err["msg"])
    if err["type"] == "value_error":
        msg = str(err["ctx"]["error"])
    return ConfigError(msg, path=path or None)


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Parsed JSON run configuration.

    Schema::

        {
          "model": {"H": 0.3, "sigma": 1.0, "T": 1.0, "N": 256},
          "basis": {"kind": "polynomial", "degree": 2}
                   | {"kind": "tabulated", "table": "basis.csv"},
          "truth": {"theta": [0.0, 1.0, -0.5]},
          "prior": {"normal": {"m": [...], "Sigma": [[...], ...]}}
                   | {"uniform": {"a": 0.0, "b": 2.0}},
          "c": 0.02,
          "seed": 42,
          "simulation": {"method": "cholesky"},
          "estimation": {"rule": "trapezoid"},
          "lattice": {"n_bins": 201, "n_sd": 6.0, "hermite_nodes": 15,
                      "legendre_nodes": 33},
          "mc": {"scenario": "s1", "estimator": "ml", "replications": 200}
        }

    Only "model" and "basis" are required. The seed is an unsigned 64-bit
    integer, or a string in decimal or 0x-prefixed hexadecimal.
    """

    model: ModelConfig
    basis: BasisConfig
    theta: Optional[Tuple[float, ...]] = None
    prior: Optional[Prior] = None
    c: Optional[float] = None
    seed: int = 0
    method: str = "cholesky"
    rule: str = "trapezoid"
    lattice: StatisticLattice = field(default_factory=StatisticLattice)
    mc: Optional[McConfig] = None

    def require_prior(self, kind: type) -> Prior:
        if not isinstance(self.prior, kind):
            name = "normal" if kind is NormalPrior else "uniform"
            raise ConfigError(f"a {name} prior is required",
                              path=f"prior.{name}")
        return self.prior

    def require_cost(self) -> float:
        if self.c is None:
            raise ConfigError("missing observation cost", path="c")
        return self.c

    def require_polynomial(self, degree: Optional[int] = None) -> int:
        if self.basis.kind != POLYNOMIAL:
            raise ConfigError("a polynomial basis is required",
                              path="basis.kind")
        if degree is not None and self.basis.degree != degree:
            raise ConfigError(f"degree {degree} is required",
                              path="basis.degree")
        return self.basis.degree


def parse_run_config(data: Dict, base_dir: str = ".") -> RunConfig:
    """Validate a decoded JSON document and build a RunConfig.

    :raise ConfigError: naming the JSON path of the offending field.
    """
    try:
        doc = _Document.model_validate(data)
    except ValidationError as e:
        raise _config_error(e) from e

    basis = doc.basis
    if basis.kind == TABULATED:
        basis = basis.model_copy(
            update={"table": osp.join(base_dir, basis.table)})

    theta = None
    if doc.truth is not None:
        theta = tuple(doc.truth.theta)
        if basis.kind == POLYNOMIAL and len(theta) != basis.degree + 1:
            raise ConfigError(
                f"expected {basis.degree + 1} elements, got {len(theta)}",
                path="truth.theta")

    return RunConfig(
        model=doc.model,
        basis=basis,
        theta=theta,
        prior=None if doc.prior is None else doc.prior.build(),
        c=doc.c,
        seed=doc.seed,
        method=doc.simulation.method,
        rule=doc.estimation.rule,
        lattice=doc.lattice.build(),
        mc=doc.mc,
    )


def load_run_config(path: str) -> RunConfig:
    """Read and validate a JSON run configuration.

    :raise ConfigError
    """
    try:
        with open(path) as fp:
            data = json.load(fp)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from e
    return parse_run_config(data, osp.dirname(osp.abspath(path)))
