"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import logging
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np
from scipy.linalg.lapack import dpotrf

from ..config import config
from ..core import HurstModel, TimeGrid
from ..exceptions import (
    DimensionError, DomainError, FactorizationError, GridError
)
from .rng import RngSeed
from .sample_path import SamplePath

if TYPE_CHECKING:
    from ..basis import DriftBasis

logger = logging.getLogger(__name__)

METHODS = ("cholesky", "hosking")


def fbm_covariance(model: HurstModel, s, t):
    """Return E[B_s B_t] = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.

    :raise DomainError: if s or t is negative.
    """
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("fbm_covariance needs s, t >= 0")

    h2 = 2. * model.H
    ret = 0.5 * (s ** h2 + t ** h2 - np.abs(t - s) ** h2)
    return float(ret) if ret.ndim == 0 else ret


def _fgn_autocovariance(H: float, dt: float, n: int) -> np.ndarray:
    k = np.arange(n, dtype=np.float64)
    h2 = 2. * H
    return 0.5 * dt ** h2 * (np.abs(k + 1) ** h2 - 2. * k ** h2
                             + np.abs(k - 1) ** h2)


class FbmSampler:
    """Sampler of standard fractional Brownian motion on a fixed grid.

    The factorization is computed once, so repeated draws (e.g. the
    replications of a Monte Carlo experiment) only cost a matrix-vector
    product ('cholesky') or the prediction recursion ('hosking').

    :param HurstModel model: Hurst model.
    :param TimeGrid grid: time grid. 'hosking' needs a uniform grid.
    :param str method: 'cholesky' or 'hosking'.

    :raise GridError, DomainError, FactorizationError
    """
    def __init__(self, model: HurstModel, grid: TimeGrid,
                 method: str = "cholesky"):
        if method not in METHODS:
            raise DomainError(
                f"Unknown simulation method {method!r}, "
                f"expected one of {', '.join(METHODS)}")

        self._model = model
        self._grid = grid
        self._method = method

        self._chol: Optional[np.ndarray] = None
        self._phi: List[np.ndarray] = []
        self._scale: Optional[np.ndarray] = None

        if grid.n == 0:
            return

        if method == "cholesky":
            if grid.n > config["CHOLESKY_MAX_POINTS"]:
                raise GridError(
                    f"Cholesky sampling supports at most "
                    f"{config['CHOLESKY_MAX_POINTS']} points, got {grid.n}")
            self._chol = self._factorize()
        else:
            if not grid.is_uniform():
                raise GridError("Hosking sampling needs a uniform grid")
            self._levinson()

    @property
    def model(self) -> HurstModel:
        return self._model

    @property
    def grid(self) -> TimeGrid:
        return self._grid

    @property
    def method(self) -> str:
        return self._method

    def _factorize(self) -> np.ndarray:
        # B_0 = 0 is excluded, it would make the matrix singular
        t = self._grid.points[1:]
        cov = fbm_covariance(self._model, t[:, None], t[None, :])

        c, info = dpotrf(cov, lower=1, clean=1)
        if info == 0:
            return c
        if info < 0:
            raise ValueError(f"Illegal argument {-info} passed to dpotrf")

        jitter = config["CHOLESKY_JITTER"] * t[-1] ** (2. * self._model.H)
        logger.warning("Cholesky factorization failed at pivot %d, "
                       "retrying with diagonal jitter %.3g", info - 1, jitter)
        c, info = dpotrf(cov + jitter * np.eye(t.size), lower=1, clean=1)
        if info != 0:
            raise FactorizationError(
                f"FBM covariance is not numerically positive definite "
                f"(H = {self._model.H}, N = {t.size})", pivot=info - 1)
        return c

    def _levinson(self) -> None:
        """Durbin-Levinson recursion of the fractional Gaussian noise."""
        n = self._grid.n
        dt = self._grid.points[1] - self._grid.points[0]
        gamma = _fgn_autocovariance(self._model.H, dt, n)

        scale = np.empty(n)
        scale[0] = np.sqrt(gamma[0])
        phi = np.empty(0)
        v = gamma[0]
        for k in range(1, n):
            phi_kk = (gamma[k] - phi @ gamma[k - 1:0:-1]) / v
            phi = np.append(phi - phi_kk * phi[::-1], phi_kk)
            v *= 1. - phi_kk ** 2
            self._phi.append(phi)
            scale[k] = np.sqrt(v)
        self._scale = scale

    def sample_values(self, rng: np.random.Generator,
                      size: Optional[int] = None) -> np.ndarray:
        """Draw path values.

        :return numpy.ndarray: shape (N + 1,), or (size, N + 1) if size is
            given. Column 0 is B_0 = 0.
        """
        n = self._grid.n
        batch = 1 if size is None else size
        ret = np.zeros((batch, n + 1))
        if n > 0:
            z = rng.standard_normal((batch, n))
            if self._chol is not None:
                ret[:, 1:] = z @ self._chol.T
            else:
                x = np.empty((batch, n))
                x[:, 0] = self._scale[0] * z[:, 0]
                for k in range(1, n):
                    x[:, k] = (x[:, k - 1::-1] @ self._phi[k - 1]
                               + self._scale[k] * z[:, k])
                np.cumsum(x, axis=1, out=ret[:, 1:])
        return ret[0] if size is None else ret

    def sample(self, seed: RngSeed) -> SamplePath:
        """Draw a path from the stream identified by seed."""
        return SamplePath(self._grid, self.sample_values(seed.generator()))


def simulate_fbm(model: HurstModel, grid: TimeGrid, seed: RngSeed,
                 method: str = "cholesky") -> SamplePath:
    """Simulate a standard FBM path on a grid.

    The draw is exact in distribution: its covariance matrix is
    :func:`fbm_covariance` on the grid.
    """
    return FbmSampler(model, grid, method).sample(seed)


def drift_values(theta: Sequence[float], basis: "DriftBasis",
                 t: np.ndarray) -> np.ndarray:
    """Return sum_i theta_i phi_i(t).

    :raise DimensionError
    """
    theta = np.asarray(theta, dtype=np.float64).ravel()
    if theta.size != basis.dimension:
        raise DimensionError(
            f"theta has {theta.size} elements, the basis has dimension "
            f"{basis.dimension}")
    return theta @ basis.phi(t)


def simulate_observation(theta: Sequence[float], basis: "DriftBasis",
                         model: HurstModel, grid: TimeGrid, seed: RngSeed,
                         method: str = "cholesky", *,
                         sampler: Optional[FbmSampler] = None) -> SamplePath:
    """Simulate xi(t) = sum_i theta_i phi_i(t) + sigma B(t).

    The additive form agrees with the differential form
    d xi = a'(t) dt + sigma dB only for a constant sigma, so a basis with a
    time-dependent sigma is rejected.

    :param sampler: optional pre-built sampler on the same model and grid.

    :raise DimensionError, DomainError
    """
    if not basis.is_constant_sigma:
        raise DomainError(
            "simulate_observation needs a constant sigma; feed observations "
            "with a time-dependent sigma to the transform directly")

    ret = drift_values(theta, basis, grid.points)
    sigma = basis.constant_sigma
    if sigma != 0.:
        if sampler is None:
            sampler = FbmSampler(model, grid, method)
        elif sampler.grid != grid or sampler.model != model:
            raise GridError("Sampler was built for another model or grid")
        ret = ret + sigma * sampler.sample_values(seed.generator())
    return SamplePath(grid, ret)
