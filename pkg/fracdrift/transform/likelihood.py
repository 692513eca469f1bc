"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import trapezoid

from ..basis import PsiEvaluations
from ..config import config
from ..core import HurstModel, TimeGrid, frac_derivative, kernel_mass_matrix
from ..estimation.information import (
    gram_matrix, quadratic_log_likelihood, score_vector
)
from ..exceptions import DimensionError, DomainError, GridError
from .martingale import MartingalePath

Sampled = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


def log_likelihood(theta, psi: PsiEvaluations, mp: MartingalePath,
                   t: Optional[float] = None) -> float:
    """Return log Lambda_t(theta) = theta' psi^H_t - theta' R_H(t) theta / 2.

    :param theta: full-dimension parameter vector.
    :param float t: grid time, the horizon by default. The likelihood is 1
        at t = 0.

    :raise DimensionError, GridError
    """
    theta = np.asarray(theta, dtype=np.float64).ravel()
    if theta.size != psi.dimension:
        raise DimensionError(
            f"theta has {theta.size} elements, the basis has dimension "
            f"{psi.dimension}")
    if psi.grid != mp.grid:
        raise GridError("psi and martingale path live on different grids")

    if t is None:
        t = mp.grid.horizon
    if mp.grid.index(t) == 0:
        return 0.
    gram = gram_matrix(psi, psi.model, t)
    score = score_vector(psi, mp, t)
    return quadratic_log_likelihood(theta, gram, score)


def _midpoint_values(v: Sampled, grid: TimeGrid) -> np.ndarray:
    t = grid.points
    if callable(v):
        mid = 0.5 * (t[:-1] + t[1:])
        return np.broadcast_to(
            np.asarray(v(mid), dtype=np.float64), mid.shape)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 0:
        return np.full(grid.n, float(v))
    if v.shape != t.shape:
        raise DimensionError(
            f"Sampled function has shape {v.shape}, grid has {t.shape}")
    return 0.5 * (v[:-1] + v[1:])


def drift_q_function(model: HurstModel, grid: TimeGrid, drift_rate: Sampled,
                     diffusion: Sampled) -> np.ndarray:
    """Return Q_H(t) = d/dw int_0^t k_H(t, s) C(s) / D(s) ds on the grid.

    C is the rate of the drift perturbation and D the diffusion
    coefficient, each either sampled on the grid or a callable. With
    C = sum_i theta_i phi_i' and D = sigma, Q is sum_i theta_i psi_i.

    :raise GridError: if the grid is too coarse for the derivative.
    :raise DomainError: if D is not positive.
    """
    n_min = config["PSI_NUMERIC_MIN_POINTS"]
    if grid.n < n_min:
        raise GridError(
            f"drift_q_function needs at least {n_min} grid intervals, "
            f"got {grid.n}")

    d = _midpoint_values(diffusion, grid)
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        raise DomainError("The diffusion coefficient must be positive")
    g = _midpoint_values(drift_rate, grid) / d
    return frac_derivative(model, grid, kernel_mass_matrix(model, grid) @ g)


def girsanov_log_likelihood(q: np.ndarray, mp: MartingalePath,
                            t: Optional[float] = None) -> float:
    """Return int_0^t Q dM - int_0^t Q^2 dw / 2 for a general drift.

    Both integrals use the trapezoid rule, like the score and the numeric
    Gram matrix.

    :raise DimensionError, GridError
    """
    q = np.asarray(q, dtype=np.float64)
    if q.shape != mp.grid.points.shape:
        raise DimensionError(
            f"Q has shape {q.shape}, grid has {mp.grid.points.shape}")
    k = mp.grid.index(mp.grid.horizon if t is None else t)

    q = q[:k + 1]
    dM = np.diff(mp.M[:k + 1])
    stochastic = 0.5 * (q[:-1] + q[1:]) @ dM
    return float(stochastic - 0.5 * trapezoid(q * q, mp.w[:k + 1]))
