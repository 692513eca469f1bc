"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError

from ..algorithm import mean_and_se, variance_and_se
from ..basis import DriftBasis, PsiEvaluations, psi_closed_poly
from ..config import config
from ..core import HurstModel, TimeGrid, make_hurst_model, weight_w
from ..estimation import (
    NormalPrior, Prior, UniformPrior, fixed_components, gram_matrix,
    mle_estimate, normal_posterior, score_vector, uniform_posterior_n1
)
from ..exceptions import (
    DimensionError, DomainError, ExperimentAbortedError, FracDriftError,
    ReplicationError
)
from ..simulation import FbmSampler, RngSeed, SamplePath, drift_values
from ..transform import MartingaleTransform
from ..utility import write_csv

logger = logging.getLogger(__name__)

ML = "ml"
BRACKET = "bracket"
BAYES_NORMAL = "bayes-normal"
BAYES_UNIFORM = "bayes-uniform"
ESTIMATORS = (ML, BRACKET, BAYES_NORMAL, BAYES_UNIFORM)


@dataclass(frozen=True)
class ExperimentSpec:
    """Monte Carlo experiment on a polynomial drift.

    :ivar theta: true parameters for 'ml'. For 'bayes-uniform' only
        theta[0] is used, as the known constant coefficient.
    :ivar prior: NormalPrior of dimension degree + 1 for 'bayes-normal',
        one-dimensional UniformPrior of theta_1 for 'bayes-uniform'.
    :ivar method: FBM simulation method.

    :raise DomainError, DimensionError
    """

    scenario: str
    H: float
    sigma: float
    T: float
    N: int
    degree: int
    estimator: str
    replications: int
    base_seed: RngSeed
    theta: Optional[Tuple[float, ...]] = None
    prior: Optional[Prior] = None
    method: str = "cholesky"

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise DomainError(f"Unknown estimator {self.estimator!r}, "
                              f"expected one of {ESTIMATORS}")
        if self.replications < 1:
            raise DomainError(
                f"Need at least 1 replication, got {self.replications}")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        make_hurst_model(self.H)
        TimeGrid.uniform(self.T, self.N)
        if self.theta is not None:
            object.__setattr__(self, "theta", tuple(float(v)
                                                    for v in self.theta))

        n = self.degree + 1
        if self.estimator != BRACKET and self.degree < 1:
            raise DomainError(
                f"Estimator {self.estimator!r} needs degree >= 1")
        if self.estimator == ML:
            if self.theta is None or len(self.theta) != n:
                raise DimensionError(
                    f"Estimator 'ml' needs theta with {n} elements")
        elif self.estimator == BAYES_NORMAL:
            if not isinstance(self.prior, NormalPrior) or \
                    self.prior.dimension != n:
                raise DimensionError(
                    f"Estimator 'bayes-normal' needs a normal prior of "
                    f"dimension {n}")
        elif self.estimator == BAYES_UNIFORM:
            if self.degree != 1:
                raise DomainError("Estimator 'bayes-uniform' needs degree 1")
            if not isinstance(self.prior, UniformPrior) or \
                    self.prior.dimension != 1:
                raise DimensionError(
                    "Estimator 'bayes-uniform' needs a one-dimensional "
                    "uniform prior")
            a, b = self.prior.scalar_bounds()
            if not a < b:
                raise DomainError(f"Uniform prior needs a < b, got "
                                  f"[{a}, {b}]")

    @property
    def model(self) -> HurstModel:
        return make_hurst_model(self.H)

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.uniform(self.T, self.N)

    @property
    def basis(self) -> DriftBasis:
        return DriftBasis.polynomial(self.degree, self.sigma)


@dataclass(frozen=True)
class ReportRow:
    """One statistic of a scenario.

    :raise DomainError: if se is negative.
    """

    scenario: str
    statistic: str
    value: float
    se: float
    n_reps: int

    def __post_init__(self):
        if self.se < 0:
            raise DomainError(
                f"Standard error of {self.statistic} must be >= 0, "
                f"got {self.se}")

    def as_row(self) -> Tuple:
        return (self.scenario, self.statistic, float(self.value),
                float(self.se), self.n_reps)


class _Replicator:
    """Simulate, transform and estimate one replication at a time.

    The sampler and the transform are shared read-only between threads.
    """
    def __init__(self, spec: ExperimentSpec):
        self._spec = spec
        self._model = spec.model
        self._grid = spec.grid
        self._basis = spec.basis
        self._sampler = FbmSampler(self._model, self._grid, spec.method)
        self._transform = MartingaleTransform(self._model, self._grid,
                                              spec.sigma)
        self._psi: Optional[PsiEvaluations] = None
        if spec.estimator != BRACKET:
            self._psi = psi_closed_poly(self._model, self._basis, self._grid)

    @property
    def psi(self) -> Optional[PsiEvaluations]:
        return self._psi

    def _observe(self, theta: np.ndarray,
                 rng: np.random.Generator) -> SamplePath:
        values = drift_values(theta, self._basis, self._grid.points)
        noise = self._sampler.sample_values(rng)
        return SamplePath(self._grid, values + self._spec.sigma * noise)

    def __call__(self, index: int) -> np.ndarray:
        """Return the replication's record.

        :raise ReplicationError
        """
        spec = self._spec
        rng = spec.base_seed.spawn(index).generator()
        try:
            if spec.estimator == ML:
                mp = self._transform(self._observe(np.array(spec.theta), rng))
                ret = mle_estimate(self._psi, mp).theta_hat[self._psi.indices]
            elif spec.estimator == BRACKET:
                theta = np.zeros(self._basis.dimension)
                mp = self._transform(self._observe(theta, rng))
                ret = np.array([mp.M[-1]])
            elif spec.estimator == BAYES_NORMAL:
                theta = spec.prior.sample(rng, 1)[0]
                mp = self._transform(self._observe(theta, rng))
                t = self._grid.horizon
                post = normal_posterior(
                    spec.prior, gram_matrix(self._psi, self._model, t),
                    score_vector(self._psi, mp, t),
                    fixed_components(self._psi, mp))
                ret = np.concatenate([post.mean - theta, [post.mse_trace]])
            else:
                theta0 = spec.theta[0] if spec.theta else 0.
                theta = np.array([theta0, spec.prior.sample(rng, 1)[0, 0]])
                mp = self._transform(self._observe(theta, rng))
                post = uniform_posterior_n1(spec.prior, mp, spec.sigma,
                                            self._grid.horizon)
                ret = np.array([post.estimate - theta[1], post.mse])
        except (FracDriftError, LinAlgError, FloatingPointError) as e:
            raise ReplicationError(
                f"Replication {index} of scenario {spec.scenario} failed: "
                f"{e}", index) from e
        return ret


def _replicate_all(replicator: _Replicator, n: int,
                   workers: int) -> Tuple[List, List[ReplicationError]]:
    def safe(index: int):
        try:
            return replicator(index), None
        except ReplicationError as e:
            return None, e

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            # map preserves the replication order
            outcomes = list(executor.map(safe, range(n)))
    else:
        outcomes = [safe(i) for i in range(n)]

    records, failures = [], []
    for record, error in outcomes:
        if error is None:
            records.append(record)
        else:
            logger.warning(str(error))
            failures.append(error)
    return records, failures


def run_mc(spec: ExperimentSpec, workers: int = 1) -> List[ReportRow]:
    """Run a Monte Carlo experiment.

    Replication r draws everything from the stream (base_seed, r), so the
    report does not depend on the number of workers. Failed replications
    are dropped from the statistics.

    :param int workers: number of threads.

    :raise ExperimentAbortedError: if more than
        config['MC_MAX_FAILURE_FRACTION'] of the replications fail.
    """
    if workers < 1:
        raise DomainError(f"Need at least 1 worker, got {workers}")

    replicator = _Replicator(spec)
    n = spec.replications
    logger.info("Scenario %s: %d replications of estimator %s on %d "
                "worker(s)", spec.scenario, n, spec.estimator, workers)
    records, failures = _replicate_all(replicator, n, workers)

    if len(failures) > config["MC_MAX_FAILURE_FRACTION"] * n:
        indices = [e.index for e in failures]
        raise ExperimentAbortedError(
            f"Scenario {spec.scenario}: {len(failures)} of {n} replications "
            f"failed, first at replication {indices[0]}",
            indices) from failures[0]

    data = np.array(records)
    if spec.estimator == ML:
        return _ml_report(spec, replicator.psi, data)
    if spec.estimator == BRACKET:
        return _bracket_report(spec, data)
    return _bayes_report(spec, data)


def _row(spec: ExperimentSpec, statistic: str, value: float, se: float,
         n_reps: int) -> ReportRow:
    return ReportRow(spec.scenario, statistic, float(value), float(se),
                     n_reps)


def _ml_report(spec: ExperimentSpec, psi: PsiEvaluations,
               data: np.ndarray) -> List[ReportRow]:
    n = data.shape[0]
    idx = psi.indices
    theta = np.array(spec.theta)[idx]
    rows = []
    for col, i in enumerate(idx):
        x = data[:, col]
        mean, se = mean_and_se(x)
        rows.append(_row(spec, f"mean[theta_{i}]", mean, se, n))
        rows.append(_row(spec, f"bias[theta_{i}]", mean - theta[col], se, n))
        var, var_se = variance_and_se(x)
        rows.append(_row(spec, f"variance[theta_{i}]", var, var_se, n))
        mse, mse_se = mean_and_se((x - theta[col]) ** 2)
        rows.append(_row(spec, f"mse[theta_{i}]", mse, mse_se, n))

    mse, mse_se = mean_and_se(np.sum((data - theta) ** 2, axis=1))
    rows.append(_row(spec, "mse_total", mse, mse_se, n))
    gram = gram_matrix(psi, spec.model, spec.T)
    fisher = np.trace(np.linalg.inv(gram.R))
    rows.append(_row(spec, "fisher_trace", fisher, 0., n))
    return rows


def _bracket_report(spec: ExperimentSpec,
                    data: np.ndarray) -> List[ReportRow]:
    n = data.shape[0]
    M = data[:, 0]
    mean, se = mean_and_se(M)
    var, var_se = variance_and_se(M)
    w = weight_w(spec.model, spec.T)
    return [
        _row(spec, "mean[M_T]", mean, se, n),
        _row(spec, "variance[M_T]", var, var_se, n),
        _row(spec, "w_T", w, 0., n),
    ]


def _bayes_report(spec: ExperimentSpec, data: np.ndarray) -> List[ReportRow]:
    n = data.shape[0]
    errors, risk = data[:, :-1], data[:, -1]
    rows = []
    offset = 1 if spec.estimator == BAYES_UNIFORM else 0
    for col in range(errors.shape[1]):
        i = col + offset
        mse, se = mean_and_se(errors[:, col] ** 2)
        rows.append(_row(spec, f"mse[theta_{i}]", mse, se, n))
    mse, se = mean_and_se(np.sum(errors ** 2, axis=1))
    rows.append(_row(spec, "mse_total", mse, se, n))
    value, se = mean_and_se(risk)
    rows.append(_row(spec, "posterior_variance", value, se, n))
    return rows


def write_report(rows: Iterable[ReportRow], path: str) -> None:
    """Write report rows as CSV with header
    'scenario,statistic,value,se,n_reps'."""
    write_csv(path, ["scenario", "statistic", "value", "se", "n_reps"],
              (r.as_row() for r in rows))


def report_value(rows: Sequence[ReportRow], statistic: str) -> ReportRow:
    """Return the row of a statistic.

    :raise KeyError
    """
    for row in rows:
        if row.statistic == statistic:
            return row
    raise KeyError(statistic)
