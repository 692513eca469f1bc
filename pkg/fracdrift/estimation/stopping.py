"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicSpline
from scipy.linalg import cho_factor, cho_solve
from scipy.special import logsumexp

from ..algorithm import golden_refine, sign_changes
from ..basis import PsiEvaluations, alpha_coeff
from ..config import config
from ..core import HurstModel, TimeGrid, weight_w
from ..exceptions import DimensionError, DomainError, GridError
from ..simulation import RngSeed
from ..utility import write_csv
from .bayes import NormalPrior, UniformPrior, _truncated_normal_moments
from .information import gram_series

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CostCurve:
    """Sampled cost F(t) = c t + tr((R(t) + Sigma^-1)^-1) of stopping at t.

    :ivar func: F as a function of continuous t, exact for polynomial
        bases and spline-interpolated otherwise.
    """

    t: np.ndarray
    F: np.ndarray
    c: float
    func: Callable[[float], float]

    def rows(self) -> Iterator[Tuple[float, float]]:
        return zip(self.t, self.F)


@dataclass(frozen=True, eq=False)
class StoppingSolution:
    """Optimal stopping rule and its Bayes risk.

    Deterministic rules carry tau and the cost curve. Lattice rules carry
    the stop/continue policy over (grid time, statistic M) and tau is set
    only if the rule stops at t = 0.
    """

    tau: Optional[float]
    expected_cost: float
    cost_curve: Optional[CostCurve] = None
    unimodal: Optional[bool] = None
    times: Optional[np.ndarray] = None
    statistic: Optional[np.ndarray] = None
    policy: Optional[np.ndarray] = None
    value: Optional[np.ndarray] = None

    def first_entry(self, M: np.ndarray) -> float:
        """Return the first grid time at which the path M enters the stop
        region.

        :param M: statistic path sampled on the policy grid.
        """
        if self.policy is None or self.tau == 0.:
            return float(self.tau)
        M = np.asarray(M, dtype=np.float64)
        if M.shape != self.times.shape:
            raise DimensionError(
                f"Path has {M.size} values, the policy grid has "
                f"{self.times.size} points")

        bins = np.clip(np.searchsorted(self.statistic, M), 1,
                       self.statistic.size - 1)
        left = self.statistic[bins - 1]
        right = self.statistic[bins]
        nearest = np.where(M - left <= right - M, bins - 1, bins)
        stop = self.policy[np.arange(M.size), nearest]
        # M_0 = 0 is not necessarily a lattice point
        stop[0] = self.tau == 0.
        stop[-1] = True
        return float(self.times[np.argmax(stop)])

    def policy_rows(self) -> Iterator[Tuple[float, float, str]]:
        for k, t in enumerate(self.times):
            for j, m in enumerate(self.statistic):
                yield t, m, "stop" if self.policy[k, j] else "continue"


def normal_cost_curve(prior: NormalPrior, psi: PsiEvaluations,
                      model: HurstModel, c: float,
                      grid: Optional[TimeGrid] = None) -> CostCurve:
    """Sample F(t) = c t + tr((R(t) + Sigma^-1)^-1) on the grid.

    R is embedded in the full dimension, so F(0) = tr(Sigma).

    :raise DomainError: if c < 0.
    :raise GridError: if grid differs from the grid of psi.
    """
    if c < 0:
        raise DomainError(f"Observation cost must be nonnegative, got {c}")
    if grid is not None and grid != psi.grid:
        raise GridError("Cost curve grid differs from the grid of psi")
    if prior.dimension != psi.dimension:
        raise DimensionError(
            f"Prior has dimension {prior.dimension}, basis has "
            f"{psi.dimension}")

    n = psi.dimension
    idx = psi.indices
    t = psi.grid.points
    inv_sigma = prior.precision
    eye = np.eye(n)

    def trace(R: np.ndarray) -> float:
        full = inv_sigma.copy()
        full[np.ix_(idx, idx)] += R
        return float(np.trace(cho_solve(cho_factor(full), eye)))

    series = gram_series(psi, model)
    F = np.array([c * tk + trace(R) for tk, R in zip(t, series)])

    if psi.closed_form:
        alpha = np.array([[alpha_coeff(model, i, j) for j in idx]
                          for i in idx]) / psi.sigma ** 2
        power = idx[:, None] + idx[None, :] - 2. * model.H

        def func(s: float) -> float:
            return c * s + trace(alpha * max(s, 0.) ** power)
    else:
        spline = CubicSpline(t, series, axis=0)

        def func(s: float) -> float:
            s = min(max(s, t[0]), t[-1])
            return c * s + trace(spline(s))

    return CostCurve(t, F, c, func)


def normal_optimal_stop(curve: CostCurve,
                        tol: float = 1e-6) -> StoppingSolution:
    """Minimize the cost curve: grid scan then golden-section refinement.

    The minimizer is deterministic. End points are admissible.
    """
    t, F = curve.t, curve.F
    k = int(np.argmin(F))
    unimodal = sign_changes(np.diff(F)) <= 1
    if not unimodal:
        logger.warning("Cost curve has more than one local minimum")

    tau, cost = float(t[k]), float(F[k])
    if 0 < k < t.size - 1:
        s = golden_refine(curve.func, t[k - 1], t[k], t[k + 1], tol)
        v = curve.func(s)
        if v <= cost:
            tau, cost = s, v
    return StoppingSolution(tau, cost, cost_curve=curve, unimodal=unimodal)


@dataclass(frozen=True)
class StatisticLattice:
    """Discretization of the backward induction.

    :ivar n_bins: number of lattice points of the statistic M.
    :ivar n_sd: half width of the lattice beyond the range of the mean of
        M_T, in units of sqrt(w_H(T)).
    :ivar hermite_nodes: Gauss-Hermite nodes of the increment of M.
    :ivar legendre_nodes: Gauss-Legendre nodes of theta on [a, b].
    """

    n_bins: int = config["DP_STATISTIC_BINS"]
    n_sd: float = config["DP_STATISTIC_SPAN"]
    hermite_nodes: int = config["DP_HERMITE_NODES"]
    legendre_nodes: int = config["DP_LEGENDRE_NODES"]

    def __post_init__(self):
        if self.n_bins < config["DP_MIN_BINS"]:
            raise DomainError(
                f"Lattice needs at least {config['DP_MIN_BINS']} statistic "
                f"bins, got {self.n_bins}")
        if self.hermite_nodes < config["DP_MIN_HERMITE_NODES"]:
            raise DomainError(
                f"Lattice needs at least {config['DP_MIN_HERMITE_NODES']} "
                f"Gauss-Hermite nodes, got {self.hermite_nodes}")
        if self.legendre_nodes < 1 or not self.n_sd > 0:
            raise DomainError(
                f"Lattice needs n_sd > 0 and at least one Gauss-Legendre "
                f"node, got n_sd = {self.n_sd}, {self.legendre_nodes} nodes")


def _posterior_variance(M: np.ndarray, w: float, sigma: float, a: float,
                        b: float) -> np.ndarray:
    if w == 0.:
        return np.full(M.shape, (b - a) ** 2 / 12.)
    _, var, log_c = _truncated_normal_moments(sigma * M / w, w / sigma ** 2,
                                              a, b)
    return np.where(np.isfinite(log_c), var, 0.)


def uniform_stop_dp(prior: UniformPrior, model: HurstModel, sigma: float,
                    c: float, grid: TimeGrid,
                    lattice: Optional[StatisticLattice] = None
                    ) -> StoppingSolution:
    """Optimal stopping of the uniform-prior problem by backward induction.

    The state is (t_k, M_k). Stopping costs the posterior variance
    gamma(t_k, M_k); continuing costs c (t_{k+1} - t_k) plus the expected
    value at t_{k+1}, where M_{k+1} - M_k given theta is
    N(theta dw / sigma, dw) and theta follows the posterior at (t_k, M_k).
    The expectation uses Gauss-Hermite nodes in the increment composed with
    Gauss-Legendre nodes in theta.

    :raise DomainError: if c <= 0 or sigma <= 0.
    """
    a, b = prior.scalar_bounds()
    if not c > 0:
        raise DomainError(f"Observation cost must be positive, got {c}")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if lattice is None:
        lattice = StatisticLattice()

    t = grid.points
    if a == b:
        policy = np.ones((t.size, 1), dtype=bool)
        return StoppingSolution(0., 0., times=t, statistic=np.zeros(1),
                                policy=policy, value=np.zeros((t.size, 1)))

    w = weight_w(model, t)
    w_T = w[-1]
    lo = min(0., a * w_T / sigma) - lattice.n_sd * np.sqrt(w_T)
    hi = max(0., b * w_T / sigma) + lattice.n_sd * np.sqrt(w_T)
    x = np.linspace(lo, hi, lattice.n_bins)

    gh_z, gh_w = hermegauss(lattice.hermite_nodes)
    gh_w = gh_w / gh_w.sum()
    gl_u, gl_w = leggauss(lattice.legendre_nodes)
    theta = 0.5 * (b - a) * gl_u + 0.5 * (a + b)
    log_gl = np.log(0.5 * (b - a) * gl_w)

    def expected_next(M: np.ndarray, k: int, v_next: np.ndarray):
        dw = w[k + 1] - w[k]
        log_p = (np.outer(M, theta) / sigma
                 - 0.5 * theta ** 2 * w[k] / sigma ** 2 + log_gl)
        p = np.exp(log_p - logsumexp(log_p, axis=1, keepdims=True))
        m_next = (M[:, None, None] + (theta * dw / sigma)[None, :, None]
                  + np.sqrt(dw) * gh_z[None, None, :])
        v = np.interp(m_next.ravel(), x, v_next).reshape(m_next.shape)
        return np.einsum("ij,ijk,k->i", p, v, gh_w)

    value = np.empty((t.size, x.size))
    policy = np.empty((t.size, x.size), dtype=bool)
    value[-1] = _posterior_variance(x, w[-1], sigma, a, b)
    policy[-1] = True
    for k in range(t.size - 2, -1, -1):
        stop = _posterior_variance(x, w[k], sigma, a, b)
        cont = c * (t[k + 1] - t[k]) + expected_next(x, k, value[k + 1])
        policy[k] = stop <= cont
        value[k] = np.where(policy[k], stop, cont)
        logger.debug("Backward induction at t = %g: stop on %d of %d "
                     "lattice points", t[k], policy[k].sum(), x.size)

    # the statistic starts at exactly 0
    stop0 = (b - a) ** 2 / 12.
    if t.size > 1:
        cont0 = float(c * (t[1] - t[0])
                      + expected_next(np.zeros(1), 0, value[1])[0])
    else:
        cont0 = np.inf
    if stop0 <= cont0:
        tau, cost = 0., stop0
    else:
        tau, cost = None, cont0
    logger.info("Uniform-prior stopping: expected cost %.6g, %s at t = 0",
                cost, "stop" if tau == 0. else "continue")

    return StoppingSolution(tau, float(cost), times=t, statistic=x,
                            policy=policy, value=value)


def fixed_time_risk(prior: UniformPrior, model: HurstModel, sigma: float,
                    c: float, grid: TimeGrid, n_paths: int,
                    seed: RngSeed) -> Tuple[np.ndarray, np.ndarray]:
    """Monte Carlo Bayes risk c t_k + E[gamma(t_k)] of every fixed time.

    theta is drawn from the prior and M_{t_k} given theta is sampled
    exactly from N(theta w_H(t_k) / sigma, w_H(t_k)).

    :return tuple: (risk, standard error), one entry per grid time.
    """
    a, b = prior.scalar_bounds()
    if n_paths < 2:
        raise DomainError(f"Need at least 2 paths, got {n_paths}")

    rng = seed.generator()
    theta = rng.uniform(a, b, size=n_paths)
    z = rng.standard_normal((n_paths, len(grid)))

    t = grid.points
    w = weight_w(model, t)
    risk = np.empty(t.size)
    se = np.empty(t.size)
    for k in range(t.size):
        M = theta * w[k] / sigma + np.sqrt(w[k]) * z[:, k]
        gamma = _posterior_variance(M, w[k], sigma, a, b)
        risk[k] = c * t[k] + gamma.mean()
        # the prior variance is not random
        se[k] = gamma.std(ddof=1) / np.sqrt(n_paths) if w[k] > 0. else 0.
    return risk, se


def write_cost_curve(path: str, curve: CostCurve) -> None:
    """Write a cost curve as CSV with header 't,F'."""
    write_csv(path, ["t", "F"], curve.rows())


def write_policy(path: str, solution: StoppingSolution) -> None:
    """Write a lattice policy as CSV with header 't,M,action'.

    :raise DomainError: if the solution carries no lattice policy.
    """
    if solution.policy is None:
        raise DomainError("Stopping solution has no lattice policy")
    write_csv(path, ["t", "M", "action"], solution.policy_rows())
