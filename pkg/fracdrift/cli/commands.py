"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import argparse
import logging
import math
import os.path as osp
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..basis import DriftBasis, PsiEvaluations, psi_closed_poly, psi_numeric
from ..core import HurstModel, TimeGrid
from ..estimation import (
    GramMatrix, NormalPrior, ScoreVector, UniformPrior, fixed_components,
    gram_matrix, mle_estimate, mle_trajectory, normal_cost_curve,
    normal_optimal_stop, normal_posterior, quadrature_posterior_oracle,
    score_vector, trajectory_table, uniform_posterior_n1,
    uniform_posterior_path, uniform_stop_dp
)
from ..exceptions import ConfigError, FracDriftError
from ..harness import (
    CostFigure, ExperimentSpec, reproduce_cost_figure, run_mc
)
from ..simulation import (
    RngSeed, SamplePath, read_sample_path, simulate_observation
)
from ..transform import MartingalePath, martingale_transform
from ..utility import format_float, write_csv, write_json
from .run_config import POLYNOMIAL, RunConfig

logger = logging.getLogger(__name__)

# stream of the observation path shared by every single-path command
OBSERVATION_STREAM = 0


class _Context:
    """Resolved inputs of a subcommand."""

    def __init__(self, args: argparse.Namespace, cfg: RunConfig):
        self.args = args
        self.cfg = cfg
        self.seed = cfg.seed if args.seed is None else args.seed
        self.model: HurstModel = cfg.model.model
        self.grid: TimeGrid = cfg.model.grid
        self.sigma = cfg.model.sigma
        self.basis: DriftBasis = cfg.basis.build(self.sigma)

    @property
    def has_observation(self) -> bool:
        return self.args.input is not None or self.cfg.theta is not None

    def observation(self) -> SamplePath:
        """The path read from --input, or simulated from the true
        parameters (drift-free without them)."""
        if self.args.input is not None:
            try:
                xi = read_sample_path(self.args.input)
            except (OSError, ValueError) as e:
                raise ConfigError(str(e), path="--input") from e
            logger.info("Read observation of %d points from %s", len(xi),
                        self.args.input)
            return xi

        theta = self.cfg.theta
        if theta is None:
            logger.info("No true parameters: simulating a drift-free path")
            theta = np.zeros(self.basis.dimension)
        elif len(theta) != self.basis.dimension:
            raise ConfigError(
                f"expected {self.basis.dimension} elements, got "
                f"{len(theta)}", path="truth.theta")
        return simulate_observation(
            theta, self.basis, self.model, self.grid,
            RngSeed(self.seed, OBSERVATION_STREAM), self.cfg.method)

    def martingale(self) -> MartingalePath:
        return martingale_transform(self.observation(), self.sigma,
                                    self.model)

    def psi(self, grid: TimeGrid) -> PsiEvaluations:
        if self.basis.kind == POLYNOMIAL:
            return psi_closed_poly(self.model, self.basis, grid)
        return psi_numeric(self.model, self.basis, grid)

    def normal_prior(self) -> NormalPrior:
        prior = self.cfg.require_prior(NormalPrior)
        if prior.dimension != self.basis.dimension:
            raise ConfigError(
                f"prior has dimension {prior.dimension}, the basis has "
                f"{self.basis.dimension}", path="prior.normal.m")
        return prior

    def uniform_prior(self) -> UniformPrior:
        self.cfg.require_polynomial(1)
        return self.cfg.require_prior(UniformPrior)

    def output(self, name: str) -> str:
        return osp.join(self.args.out, name)

    def write_table(self, name: str, header: Sequence[str], rows) -> str:
        """Write a table as CSV or, with --format json, as a JSON object
        of columns."""
        rows = list(rows)
        if self.args.format == "json":
            path = self.output(f"{name}.json")
            columns = list(zip(*rows)) if rows else [()] * len(header)
            write_json(path, {h: [_jsonable(v) for v in col]
                              for h, col in zip(header, columns)})
        else:
            path = self.output(f"{name}.csv")
            write_csv(path, header, rows)
        logger.info("Wrote %s", path)
        return path

    def write_summary(self, data: Dict, name: str = "summary.json") -> str:
        path = self.output(name)
        write_json(path, data)
        logger.info("Wrote %s", path)
        return path


def _jsonable(v):
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _floats(a) -> List[Optional[float]]:
    return [_jsonable(v) for v in np.asarray(a, dtype=np.float64).ravel()]


def _log_increments(xi: SamplePath, sigma: float, H: float) -> None:
    dt = np.diff(xi.t)
    if dt.size < 2:
        return
    z = np.diff(xi.values) / (sigma * dt ** H)
    logger.info("Standardized increments: mean %.4g, variance %.4g, "
                "skewness %.4g, excess kurtosis %.4g", np.mean(z),
                np.var(z, ddof=1), stats.skew(z), stats.kurtosis(z))


def cmd_simulate(ctx: _Context) -> int:
    xi = ctx.observation()
    _log_increments(xi, ctx.sigma, ctx.model.H)
    ctx.write_table("path", ("t", "value"), zip(xi.t, xi.values))
    return 0


def cmd_transform(ctx: _Context) -> int:
    mp = ctx.martingale()
    ctx.write_table("martingale", ("t", "M", "w", "m"),
                    zip(mp.grid.points, mp.M, mp.w, mp.m))
    return 0


def cmd_estimate_ml(ctx: _Context) -> int:
    mp = ctx.martingale()
    psi = ctx.psi(mp.grid)
    result = mle_estimate(psi, mp, rule=ctx.cfg.rule)
    header, rows = trajectory_table(
        mle_trajectory(psi, mp, rule=ctx.cfg.rule))
    summary = {
        "t": result.t,
        "theta_hat": _floats(result.theta_hat),
        "estimated": [bool(v) for v in result.estimated],
        "covariance": [_floats(row) for row in result.covariance],
        "condition": _jsonable(result.info.condition_estimate),
    }

    ctx.write_table("trajectory", header, rows)
    ctx.write_summary(summary)
    print("theta_hat = " + " ".join(format_float(v)
                                    for v in result.theta_hat))
    return 0


def cmd_estimate_bayes(ctx: _Context) -> int:
    if isinstance(ctx.cfg.prior, UniformPrior):
        prior = ctx.uniform_prior()
        mp = ctx.martingale()
        post = uniform_posterior_n1(prior, mp, ctx.sigma, mp.grid.horizon)
        estimate, variance = uniform_posterior_path(prior, mp, ctx.sigma)
        ctx.write_table("posterior", ("t", "estimate", "variance"),
                        zip(mp.grid.points, estimate, variance))
        summary = {"t": mp.grid.horizon, "theta_0": mp.xi0,
                   **{k: _jsonable(v) for k, v in post._asdict().items()}}
    else:
        prior = ctx.normal_prior()
        mp = ctx.martingale()
        psi = ctx.psi(mp.grid)
        t = mp.grid.horizon
        post = normal_posterior(prior, gram_matrix(psi, ctx.model, t),
                                score_vector(psi, mp, t, ctx.cfg.rule),
                                fixed_components(psi, mp))
        summary = post.to_dict()
    ctx.write_summary(summary)
    return 0


def _normal_stop(ctx: _Context) -> Tuple[NormalPrior, CostFigure]:
    prior = ctx.normal_prior()
    c = ctx.cfg.require_cost()
    if ctx.basis.kind == POLYNOMIAL:
        return prior, reproduce_cost_figure(
            ctx.model.H, ctx.basis.degree, c, prior, ctx.grid, ctx.sigma)

    curve = normal_cost_curve(prior, ctx.psi(ctx.grid), ctx.model, c)
    return prior, CostFigure(ctx.model.H, ctx.basis.degree, c, curve,
                             normal_optimal_stop(curve))


def _stop_summary(ctx: _Context, solution) -> Dict:
    return {
        "H": ctx.model.H,
        "c": ctx.cfg.c,
        "tau": _jsonable(solution.tau),
        "expected_cost": solution.expected_cost,
    }


def cmd_cost_curve(ctx: _Context) -> int:
    _, figure = _normal_stop(ctx)
    ctx.write_table("F_curve", ("t", "F"), figure.curve.rows())
    ctx.write_summary(figure.summary())
    return 0


def cmd_stop_normal(ctx: _Context) -> int:
    prior, figure = _normal_stop(ctx)
    solution = figure.solution
    summary = _stop_summary(ctx, solution)
    summary["unimodal"] = bool(solution.unimodal)

    if ctx.has_observation:
        mp = ctx.martingale()
        psi = ctx.psi(mp.grid)
        # the rule stops at the first grid time not before tau
        k = min(int(np.searchsorted(mp.grid.points, solution.tau)),
                mp.grid.n)
        t = float(mp.grid.points[k])
        if k == 0:
            gram = GramMatrix.empty(psi.indices, psi.dimension)
            score = ScoreVector.empty(psi.indices, psi.dimension)
        else:
            gram = gram_matrix(psi, ctx.model, t)
            score = score_vector(psi, mp, t, ctx.cfg.rule)
        post = normal_posterior(prior, gram, score,
                                fixed_components(psi, mp))
        summary["t_stop"] = t
        summary["posterior"] = post.to_dict()
    ctx.write_summary(summary)
    return 0


def cmd_stop_uniform(ctx: _Context) -> int:
    prior = ctx.uniform_prior()
    c = ctx.cfg.require_cost()
    solution = uniform_stop_dp(prior, ctx.model, ctx.sigma, c, ctx.grid,
                               ctx.cfg.lattice)
    summary = _stop_summary(ctx, solution)
    if ctx.has_observation:
        mp = ctx.martingale()
        t = solution.first_entry(mp.M)
        k = mp.grid.index(t)
        estimate, variance = uniform_posterior_path(prior, mp, ctx.sigma)
        summary.update({"t_stop": t, "estimate": float(estimate[k]),
                        "variance": float(variance[k])})

    if solution.policy is not None:
        ctx.write_table("policy", ("t", "M", "action"),
                        solution.policy_rows())
    ctx.write_summary(summary)
    return 0


def cmd_mc(ctx: _Context) -> int:
    cfg = ctx.cfg
    if cfg.mc is None:
        raise ConfigError("missing Monte Carlo section", path="mc")
    degree = cfg.require_polynomial()
    m = cfg.model
    try:
        spec = ExperimentSpec(cfg.mc.scenario, m.H, m.sigma, m.T, m.N, degree,
                              cfg.mc.estimator, cfg.mc.replications,
                              RngSeed(ctx.seed), theta=cfg.theta,
                              prior=cfg.prior, method=cfg.method)
    except FracDriftError as e:
        raise ConfigError(str(e), path="mc") from e

    rows = run_mc(spec, workers=ctx.args.workers)
    ctx.write_table("report", ("scenario", "statistic", "value", "se",
                               "n_reps"), (r.as_row() for r in rows))
    return 0


def _agree(a, b, rtol: float, atol: float) -> bool:
    return bool(np.allclose(a, b, rtol=rtol, atol=atol))


def _normal_oracle(ctx: _Context) -> Dict:
    prior = ctx.normal_prior()
    if prior.dimension > 2:
        raise ConfigError("the quadrature oracle supports dimension <= 2",
                          path="prior.normal.m")
    mp = ctx.martingale()
    psi = ctx.psi(mp.grid)
    t = mp.grid.horizon
    gram = gram_matrix(psi, ctx.model, t)
    score = score_vector(psi, mp, t, ctx.cfg.rule)
    closed = normal_posterior(prior, gram, score)
    oracle = quadrature_posterior_oracle(prior, gram, score)

    tol_mean, tol_cov = (1e-6, 1e-6) if prior.dimension == 1 else \
        (1e-4, 1e-3)
    agree = (_agree(closed.mean, oracle.mean, tol_mean, tol_mean)
             and _agree(closed.covariance, oracle.covariance, tol_cov,
                        tol_cov))
    return {"closed_form": closed.to_dict(), "oracle": oracle.to_dict(),
            "agree": agree}


def _uniform_oracle(ctx: _Context) -> Dict:
    prior = ctx.uniform_prior()
    mp = ctx.martingale()
    t = mp.grid.horizon
    w, M = float(mp.w[-1]), float(mp.M[-1])
    gram = GramMatrix(t, np.array([[w / ctx.sigma ** 2]]), np.array([0]), 1,
                      1.)
    score = ScoreVector(t, np.array([M / ctx.sigma]), np.array([0]), 1)
    closed = uniform_posterior_n1(prior, mp, ctx.sigma, t)
    oracle = quadrature_posterior_oracle(prior, gram, score)

    agree = (math.isclose(closed.estimate, oracle.mean[0], rel_tol=1e-6,
                          abs_tol=1e-8)
             and math.isclose(closed.mse, oracle.covariance[0, 0],
                              rel_tol=1e-6, abs_tol=1e-8))
    return {"closed_form": {"estimate": closed.estimate, "mse": closed.mse},
            "oracle": oracle.to_dict(), "agree": agree}


def cmd_oracle_check(ctx: _Context) -> int:
    if isinstance(ctx.cfg.prior, UniformPrior):
        name, result = "uniform", _uniform_oracle(ctx)
    else:
        name, result = "normal", _normal_oracle(ctx)
    ctx.write_summary({name: result, "agree": result["agree"]},
                      "oracle.json")
    if not result["agree"]:
        logger.error("Closed-form %s posterior disagrees with the "
                     "quadrature oracle", name)
        return 1
    logger.info("Closed-form %s posterior agrees with the quadrature "
                "oracle", name)
    return 0


COMMANDS: Dict[str, Tuple[str, Callable[[_Context], int]]] = {
    "simulate": ("Simulate an observation path.", cmd_simulate),
    "transform": ("Compute the fundamental martingale of an observation.",
                  cmd_transform),
    "estimate-ml": ("Maximum likelihood estimate of the drift parameters.",
                    cmd_estimate_ml),
    "estimate-bayes": ("Posterior of the drift parameters.",
                       cmd_estimate_bayes),
    "cost-curve": ("Cost of stopping at t under a normal prior.",
                   cmd_cost_curve),
    "stop-normal": ("Optimal stopping time under a normal prior.",
                    cmd_stop_normal),
    "stop-uniform": ("Optimal stopping policy under a uniform prior.",
                     cmd_stop_uniform),
    "mc": ("Run a Monte Carlo experiment.", cmd_mc),
    "oracle-check": ("Check the closed-form posterior against quadrature.",
                     cmd_oracle_check),
}


def run_command(args: argparse.Namespace, cfg: RunConfig) -> int:
    _, func = COMMANDS[args.command]
    return func(_Context(args, cfg))
