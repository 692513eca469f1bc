"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import poch

from ..config import config
from ..core import (
    HurstModel, TimeGrid, frac_derivative, kernel_mass_matrix
)
from ..exceptions import DomainError, GridError
from .drift_basis import DriftBasis

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PsiEvaluations:
    """Values psi_i(t_j) of the basis functions of the score.

    :ivar psi: array of shape (n + 1, N + 1).
    :ivar identifiable: False for indices whose psi_i vanishes on the grid.
    :ivar sigma: the constant sigma, None if sigma depends on time.
    :ivar closed_form: True if psi comes from the polynomial closed form,
        which also gives the Gram matrix in closed form.
    """

    grid: TimeGrid
    psi: np.ndarray
    identifiable: np.ndarray
    model: HurstModel
    sigma: Optional[float]
    closed_form: bool
    kind: str
    label: str

    @property
    def dimension(self) -> int:
        return self.psi.shape[0]

    @property
    def indices(self) -> np.ndarray:
        """Identifiable indices."""
        return np.flatnonzero(self.identifiable)


def beta_coeff(model: HurstModel, i: int) -> float:
    """Return beta_H(i), the coefficient of psi_i for phi_i(t) = t^i.

    beta_H(i) = i (1 - 2H + i) / (2 - 2H)
        * Gamma(3 - 2H) / Gamma(2 - 2H + i)
        * Gamma(1/2 - H + i) / Gamma(3/2 - H)

    :raise DomainError: if i < 0.
    """
    if i < 0:
        raise DomainError(f"Basis index must be >= 0, got {i}")
    if i == 0:
        return 0.

    H = model.H
    ratio = poch(1.5 - H, i - 1) / poch(3. - 2. * H, i - 1)
    return float(i * (1. - 2. * H + i) / (2. - 2. * H) * ratio)


def alpha_coeff(model: HurstModel, i: int, j: int) -> float:
    """Return alpha_H(i, j) = beta_i beta_j (2 - 2H) / (lambda_H (i + j - 2H)).

    sigma^-2 alpha_H(i, j) t^{i+j-2H} is the Gram matrix of the polynomial
    basis.
    """
    if i == 0 or j == 0:
        return 0.
    return (beta_coeff(model, i) * beta_coeff(model, j)
            * model.bracket_exponent
            / (model.lambda_ * (i + j - 2. * model.H)))


def _require_positive(sigma: np.ndarray) -> None:
    if np.any(sigma <= 0) or not np.all(np.isfinite(sigma)):
        raise DomainError("sigma must be positive and finite on the grid")


def psi_closed_poly(model: HurstModel, basis: DriftBasis,
                    grid: TimeGrid) -> PsiEvaluations:
    """Evaluate psi_i(t) = beta_H(i) / sigma * t^{i-1} for a polynomial basis.

    Row 0 vanishes (the constant basis function carries no information
    after the transform) and is marked not identifiable.

    :raise DomainError: for a non-polynomial basis or a time-dependent
        sigma.
    """
    if not basis.is_polynomial:
        raise DomainError(
            f"Closed-form psi needs a polynomial basis, got {basis.kind}")
    sigma = basis.constant_sigma
    _require_positive(np.asarray(sigma))

    t = grid.points
    n = basis.dimension
    ret = np.zeros((n, t.size))
    for i in range(1, n):
        ret[i] = beta_coeff(model, i) / sigma * t ** (i - 1)
    identifiable = np.arange(n) > 0
    ret.flags.writeable = False

    return PsiEvaluations(grid, ret, identifiable, model, sigma, True,
                          basis.kind, basis.label)


def identifiable_mask(psi: np.ndarray) -> np.ndarray:
    """Mark rows whose largest |psi_i| is not negligible."""
    peak = np.max(np.abs(psi), axis=1) if psi.shape[1] else np.zeros(
        psi.shape[0])
    scale = peak.max(initial=0.)
    return peak > config["IDENTIFIABILITY_TOL"] * scale


def psi_numeric(model: HurstModel, basis: DriftBasis,
                grid: TimeGrid) -> PsiEvaluations:
    """Evaluate psi_i = d/dw int_0^t k_H(t, s) phi_i'(s) / sigma(s) ds.

    The inner integral uses the exact kernel mass of every grid interval
    with phi_i' / sigma taken at the interval midpoint. The derivative with
    respect to w_H is :func:`frac_derivative`; expect reduced accuracy at
    the first few grid points.

    :raise GridError: if the grid has fewer than
        config['PSI_NUMERIC_MIN_POINTS'] intervals.
    :raise DomainError: if sigma is not positive on the grid.
    """
    n_min = config["PSI_NUMERIC_MIN_POINTS"]
    if grid.n < n_min:
        raise GridError(
            f"psi_numeric needs at least {n_min} grid intervals, "
            f"got {grid.n}")

    t = grid.points
    mid = 0.5 * (t[:-1] + t[1:])
    sigma = basis.sigma_at(mid)
    _require_positive(sigma)

    integrand = basis.dphi(mid) / sigma
    inner = kernel_mass_matrix(model, grid) @ integrand.T

    ret = np.stack([frac_derivative(model, grid, col) for col in inner.T])
    identifiable = identifiable_mask(ret)
    ret.flags.writeable = False
    masked = np.flatnonzero(~identifiable)
    if masked.size:
        logger.info("Basis %s: psi vanishes for indices %s, excluded from "
                    "the likelihood", basis.label, masked.tolist())

    sigma_const = basis.sigma if basis.is_constant_sigma else None
    return PsiEvaluations(grid, ret, identifiable, model, sigma_const, False,
                          basis.kind, basis.label)
