"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import simpson
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..basis import PsiEvaluations
from ..basis.drift_basis import POLYNOMIAL
from ..config import config
from ..core import log_std_normal_pdf
from ..exceptions import (
    DegeneratePosteriorError, DimensionError, DomainError
)
from ..transform.martingale import MartingalePath
from .information import GramMatrix, ScoreVector


class Prior(ABC):
    """Prior distribution of the drift parameter vector."""

    @property
    @abstractmethod
    def dimension(self) -> int:
        ...

    @abstractmethod
    def mean(self) -> np.ndarray:
        ...

    @abstractmethod
    def covariance(self) -> np.ndarray:
        ...

    @abstractmethod
    def log_density(self, x: np.ndarray) -> np.ndarray:
        """Unnormalized log density at the rows of x."""
        ...

    @abstractmethod
    def axes(self, n_points: int, width: float) -> List[np.ndarray]:
        """Per-component abscissae of a tensor grid covering the prior."""
        ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        ...


class NormalPrior(Prior):
    """Multivariate normal prior N(m, Sigma).

    :raise DimensionError, DomainError
    """
    def __init__(self, m, cov):
        m = np.array(m, dtype=np.float64, ndmin=1)
        cov = np.array(cov, dtype=np.float64, ndmin=2)
        if m.ndim != 1 or cov.shape != (m.size, m.size):
            raise DimensionError(
                f"Prior mean has shape {m.shape}, covariance {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=1e-12, atol=0.):
            raise DomainError("Prior covariance must be symmetric")
        try:
            self._chol = cho_factor(cov, lower=True)
        except LinAlgError:
            raise DomainError("Prior covariance must be positive definite")

        self._m = m
        self._cov = 0.5 * (cov + cov.T)
        self._precision = cho_solve(self._chol, np.eye(m.size))

    @classmethod
    def isotropic(cls, m, gamma2: float) -> "NormalPrior":
        m = np.array(m, dtype=np.float64, ndmin=1)
        return cls(m, gamma2 * np.eye(m.size))

    @property
    def dimension(self) -> int:
        return self._m.size

    @property
    def precision(self) -> np.ndarray:
        return self._precision

    def mean(self) -> np.ndarray:
        return self._m.copy()

    def covariance(self) -> np.ndarray:
        return self._cov.copy()

    def log_density(self, x: np.ndarray) -> np.ndarray:
        d = np.atleast_2d(x) - self._m
        return -0.5 * np.sum((d @ self._precision) * d, axis=1)

    def axes(self, n_points: int, width: float) -> List[np.ndarray]:
        sd = np.sqrt(np.diag(self._cov))
        return [np.linspace(mu - width * s, mu + width * s, n_points)
                for mu, s in zip(self._m, sd)]

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.multivariate_normal(self._m, self._cov, size=size,
                                       method="cholesky")


class UniformPrior(Prior):
    """Uniform prior on the box prod_i [a_i, b_i].

    a_i = b_i is accepted and pins the component.

    :raise DimensionError, DomainError
    """
    def __init__(self, a, b):
        a = np.array(a, dtype=np.float64, ndmin=1)
        b = np.array(b, dtype=np.float64, ndmin=1)
        if a.ndim != 1 or a.shape != b.shape:
            raise DimensionError(
                f"Box bounds have shapes {a.shape} and {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError("Box bounds must be finite")
        if np.any(a > b):
            raise DomainError("Box lower bounds must not exceed upper bounds")
        self._a = a
        self._b = b

    @property
    def dimension(self) -> int:
        return self._a.size

    @property
    def a(self) -> np.ndarray:
        return self._a.copy()

    @property
    def b(self) -> np.ndarray:
        return self._b.copy()

    def scalar_bounds(self) -> Tuple[float, float]:
        """(a, b) of a one-dimensional box.

        :raise DimensionError
        """
        if self.dimension != 1:
            raise DimensionError(
                f"Expected a one-dimensional box, got dimension "
                f"{self.dimension}")
        return float(self._a[0]), float(self._b[0])

    def mean(self) -> np.ndarray:
        return 0.5 * (self._a + self._b)

    def covariance(self) -> np.ndarray:
        return np.diag((self._b - self._a) ** 2 / 12.)

    def log_density(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        inside = np.all((x >= self._a) & (x <= self._b), axis=1)
        return np.where(inside, 0., -np.inf)

    def axes(self, n_points: int, width: float) -> List[np.ndarray]:
        return [np.linspace(lo, hi, n_points) if hi > lo else np.array([lo])
                for lo, hi in zip(self._a, self._b)]

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self._a, self._b, size=(size, self.dimension))


@dataclass(frozen=True, eq=False)
class PosteriorSummary:
    """First two posterior moments at time t."""

    t: float
    mean: np.ndarray
    covariance: np.ndarray
    mse_trace: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "mean": self.mean.tolist(),
            "cov": self.covariance.tolist(),
            "mse_trace": self.mse_trace,
        }


def _summary(t: float, mean: np.ndarray, cov: np.ndarray) -> PosteriorSummary:
    cov = 0.5 * (cov + cov.T)
    return PosteriorSummary(float(t), mean, cov, float(np.trace(cov)))


def fixed_components(psi: PsiEvaluations,
                     mp: MartingalePath) -> Dict[int, float]:
    """Components known exactly from the observation.

    The constant coefficient of a polynomial basis equals xi(0).
    """
    if psi.kind == POLYNOMIAL and not psi.identifiable[0]:
        return {0: mp.xi0}
    return {}


def normal_posterior(prior: NormalPrior, gram: GramMatrix,
                     score: ScoreVector,
                     fixed: Optional[Dict[int, float]] = None
                     ) -> PosteriorSummary:
    """Return the posterior of a normal prior.

    cov = (R + Sigma^-1)^-1 and mean = cov (psi^H + Sigma^-1 m), with R and
    psi^H embedded in the full dimension. Components in fixed are then
    conditioned on their known values.

    :raise DimensionError
    """
    n = prior.dimension
    if gram.dimension != n or score.dimension != n:
        raise DimensionError(
            f"Prior has dimension {n}, likelihood has {gram.dimension}")

    precision = gram.full() + prior.precision
    cov = cho_solve(cho_factor(precision), np.eye(n))
    mean = cov @ (score.full() + prior.precision @ prior.mean())

    if fixed:
        mean, cov = _condition(mean, cov, fixed)
    return _summary(gram.t, mean, cov)


def _condition(mean: np.ndarray, cov: np.ndarray,
               fixed: Dict[int, float]) -> Tuple[np.ndarray, np.ndarray]:
    n = mean.size
    known = np.array(sorted(fixed), dtype=int)
    if known.size and (known.min() < 0 or known.max() >= n):
        raise DimensionError(f"Fixed component out of range: {known}")
    free = np.setdiff1d(np.arange(n), known)
    x = np.array([fixed[i] for i in known])

    gain = cov[np.ix_(free, known)] @ np.linalg.inv(cov[np.ix_(known, known)])
    ret_mean = mean.copy()
    ret_mean[free] = mean[free] + gain @ (x - mean[known])
    ret_mean[known] = x
    ret_cov = np.zeros_like(cov)
    ret_cov[np.ix_(free, free)] = (cov[np.ix_(free, free)]
                                   - gain @ cov[np.ix_(known, free)])
    return ret_mean, ret_cov


def normal_posterior_n1(m: float, gamma2: float, M: float, w: float,
                        sigma: float) -> Tuple[float, float]:
    """Scalar normal posterior of theta_1 with psi_1 = 1 / sigma.

    :return tuple: (mean, variance) =
        ((M / sigma + m / gamma2) / (w / sigma^2 + 1 / gamma2),
         1 / (w / sigma^2 + 1 / gamma2)).
    """
    if gamma2 <= 0 or sigma <= 0:
        raise DomainError("gamma2 and sigma must be positive")
    precision = w / sigma ** 2 + 1. / gamma2
    return (M / sigma + m / gamma2) / precision, 1. / precision


def _truncated_normal_moments(mu, precision, a: float, b: float):
    """Mean, variance and log normalizer of N(mu, 1 / precision) on [a, b].

    In standard units the box is [alpha, beta] and x0 is its point nearest
    the mode. The density exp(-x0 y - y^2 / 2) of the offset y = x - x0 is
    integrated with Gauss-Legendre nodes over the part of the box where it
    exceeds exp(-TRUNCNORM_WINDOW), so every moment is a sum of positive
    terms even deep in a tail. The normalizer
    C = Phi(beta) - Phi(alpha) is -inf only for an empty box.
    """
    mu, precision = np.broadcast_arrays(
        np.asarray(mu, dtype=np.float64),
        np.asarray(precision, dtype=np.float64))
    root = np.sqrt(precision)
    alpha = (a - mu) * root
    beta = (b - mu) * root
    x0 = np.asarray(np.minimum(np.maximum(alpha, 0.), beta))

    g = config["TRUNCNORM_WINDOW"]
    s = np.sqrt(x0 * x0 + 2. * g)
    hi = np.minimum(beta - x0, 2. * g / (np.maximum(x0, 0.) + s))
    lo = np.maximum(alpha - x0, -2. * g / (np.maximum(-x0, 0.) + s))
    half = np.asarray(0.5 * (hi - lo))
    mid = np.asarray(0.5 * (hi + lo))

    u, wts = leggauss(config["TRUNCNORM_NODES"])
    y = mid[..., None] + half[..., None] * u
    f = wts * np.exp(-(x0[..., None] * y + 0.5 * y * y))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = half * f.sum(axis=-1)
        m1 = np.asarray(half * (f * y).sum(axis=-1) / z)
        var = half * (f * (y - m1[..., None]) ** 2).sum(axis=-1) / z
        log_c = np.log(z) + log_std_normal_pdf(x0)

    # mu + x0 / root is the point of [a, b] nearest mu
    mean = np.clip(mu, a, b) + m1 / root
    return mean, var / precision, log_c


class UniformPosteriorN1(NamedTuple):
    estimate: float
    mse: float
    Z: float
    log_Z: float


def uniform_posterior_n1(prior: UniformPrior, mp: MartingalePath,
                         sigma: float, t: float) -> UniformPosteriorN1:
    """Posterior of theta_1 under a uniform prior on [a, b].

    With precision P = w_H(t) / sigma^2 and location mu = sigma m_t the
    posterior is N(mu, 1 / P) truncated to [a, b]:

        estimate = mu + (Lambda(a) - Lambda(b)) / (P Z)
        Z = sqrt(2 pi / P) exp(P mu^2 / 2) C
        C = Phi((b - mu) sqrt(P)) - Phi((a - mu) sqrt(P))

    where Lambda(x) = exp(x M_t / sigma - x^2 w_H(t) / (2 sigma^2)). The
    estimate and the variance are evaluated as moments of the truncated
    normal and log Z from log C, which keeps them accurate when mu lies far
    outside [a, b].

    :raise DomainError: if a >= b, sigma <= 0 or t = 0.
    :raise DegeneratePosteriorError: if C vanishes numerically.
    """
    a, b = prior.scalar_bounds()
    if not a < b:
        raise DomainError(f"Uniform posterior needs a < b, got [{a}, {b}]")
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    k = mp.grid.index(t)
    w = mp.w[k]
    if not w > 0:
        raise DomainError("No information at t = 0")

    M = mp.M[k]
    precision = w / sigma ** 2
    mu = sigma * M / w

    mean, var, log_c = _truncated_normal_moments(mu, precision, a, b)
    log_c = float(log_c)
    if not np.isfinite(log_c):
        endpoint = "b" if mu > 0.5 * (a + b) else "a"
        raise DegeneratePosteriorError(
            f"Posterior mass on [{a}, {b}] vanishes numerically "
            f"(location {mu:.6g}, precision {precision:.6g})", endpoint)

    log_z = (0.5 * np.log(2. * np.pi / precision)
             + 0.5 * precision * mu * mu + log_c)
    with np.errstate(over="ignore"):
        z = float(np.exp(log_z))
    return UniformPosteriorN1(float(mean), float(var), z, float(log_z))


def uniform_posterior_path(prior: UniformPrior, mp: MartingalePath,
                           sigma: float) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform-prior estimate and posterior variance at every grid time.

    At t = 0 these are the prior moments. Times at which the posterior
    collapses numerically onto an end point report that end point with
    variance 0.
    """
    a, b = prior.scalar_bounds()
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")

    est = np.full(mp.M.shape, 0.5 * (a + b))
    var = np.full(mp.M.shape, (b - a) ** 2 / 12.)
    if a == b or mp.grid.n == 0:
        return est, var

    w = mp.w[1:]
    mu = sigma * mp.M[1:] / w
    mean, v, log_c = _truncated_normal_moments(mu, w / sigma ** 2, a, b)
    collapsed = ~np.isfinite(log_c)
    est[1:] = np.where(collapsed, np.clip(mu, a, b), mean)
    var[1:] = np.where(collapsed, 0., v)
    return est, var


def quadrature_posterior_oracle(prior: Prior, gram: GramMatrix,
                                score: ScoreVector,
                                n_points: Optional[int] = None,
                                width: Optional[float] = None
                                ) -> PosteriorSummary:
    """Posterior moments by brute-force tensor-grid quadrature.

    The prior density times exp(theta' psi^H - theta' R theta / 2) is
    integrated with Simpson's rule on a grid covering +/- width prior
    standard deviations (normal) or the box (uniform).

    :raise DimensionError: if the dimension exceeds 2.
    """
    n = prior.dimension
    if n > 2:
        raise DimensionError(
            f"Quadrature oracle supports dimension <= 2, got {n}")
    if gram.dimension != n or score.dimension != n:
        raise DimensionError(
            f"Prior has dimension {n}, likelihood has {gram.dimension}")
    if n_points is None:
        n_points = config["ORACLE_GRID_POINTS"]
    if width is None:
        width = config["ORACLE_PRIOR_WIDTH"]

    axes = prior.axes(n_points, width)
    mesh = np.meshgrid(*axes, indexing="ij")
    x = np.stack([g.ravel() for g in mesh], axis=1)

    xi = x[:, gram.indices]
    log_f = (prior.log_density(x) + xi @ score.psiH
             - 0.5 * np.sum((xi @ gram.R) * xi, axis=1))
    f = np.exp(log_f - np.max(log_f)).reshape(mesh[0].shape)

    def integrate(v):
        for axis in reversed(range(n)):
            if axes[axis].size == 1:
                v = np.take(v, 0, axis=axis)
            else:
                v = simpson(v, x=axes[axis], axis=axis)
        return float(v)

    z = integrate(f)
    mean = np.array([integrate(g * f) / z for g in mesh])
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            cov[i, j] = cov[j, i] = integrate(
                (mesh[i] - mean[i]) * (mesh[j] - mean[j]) * f) / z
    return _summary(gram.t, mean, cov)
