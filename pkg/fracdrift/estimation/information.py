"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..algorithm import symmetric_condition
from ..basis import PsiEvaluations, alpha_coeff
from ..core import HurstModel, weight_w
from ..exceptions import (
    DimensionError, DomainError, GridError, IllConditionedError
)

if TYPE_CHECKING:
    from ..transform import MartingalePath

GRAM_METHODS = ("auto", "closed", "numeric")
SCORE_RULES = ("trapezoid", "left")


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Gram matrix R_H(t) restricted to the identifiable indices.

    :ivar indices: identifiable indices into the full basis.
    :ivar dimension: dimension n + 1 of the full basis.
    """

    t: float
    R: np.ndarray
    indices: np.ndarray
    dimension: int
    condition_estimate: float

    @classmethod
    def empty(cls, indices: Sequence[int], dimension: int) -> "GramMatrix":
        """The zero matrix of the prior-only state at t = 0."""
        indices = np.asarray(indices, dtype=int)
        return cls(0., np.zeros((indices.size, indices.size)), indices,
                   dimension, float("inf"))

    def full(self) -> np.ndarray:
        """Embed R into the (n + 1) x (n + 1) matrix with zero rows for the
        non-identifiable indices."""
        ret = np.zeros((self.dimension, self.dimension))
        ret[np.ix_(self.indices, self.indices)] = self.R
        return ret


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Score psi^H_t restricted to the identifiable indices."""

    t: float
    psiH: np.ndarray
    indices: np.ndarray
    dimension: int

    @classmethod
    def empty(cls, indices: Sequence[int], dimension: int) -> "ScoreVector":
        indices = np.asarray(indices, dtype=int)
        return cls(0., np.zeros(indices.size), indices, dimension)

    def full(self) -> np.ndarray:
        ret = np.zeros(self.dimension)
        ret[self.indices] = self.psiH
        return ret


def _check_model(psi: PsiEvaluations, model: HurstModel) -> None:
    if psi.model != model:
        raise DomainError(
            f"psi was evaluated for H = {psi.model.H}, got H = {model.H}")


def _indices_or_raise(psi: PsiEvaluations) -> np.ndarray:
    idx = psi.indices
    if idx.size == 0:
        raise IllConditionedError(
            f"Basis {psi.label} has no identifiable function",
            basis=psi.label)
    return idx


def gram_series(psi: PsiEvaluations, model: HurstModel,
                method: str = "auto") -> np.ndarray:
    """Return R_H(t_k) at every grid time, shape (N + 1, d, d).

    d is the number of identifiable indices; R_H(0) = 0.

    :param str method: 'closed' uses sigma^-2 alpha_H(i, j) t^{i+j-2H} and
        needs closed-form psi; 'numeric' integrates psi_i psi_j against
        w_H with the trapezoid rule; 'auto' picks 'closed' when available.
    """
    if method not in GRAM_METHODS:
        raise DomainError(f"Unknown Gram method {method!r}")
    _check_model(psi, model)
    idx = _indices_or_raise(psi)
    t = psi.grid.points

    if method == "closed" and not psi.closed_form:
        raise DomainError("Closed-form Gram matrix needs closed-form psi")

    if psi.closed_form and method != "numeric":
        alpha = np.array([[alpha_coeff(model, i, j) for j in idx]
                          for i in idx])
        power = idx[:, None] + idx[None, :] - 2. * model.H
        return (alpha / psi.sigma ** 2)[None] * t[:, None, None] ** power

    p = psi.psi[idx]
    integrand = p[:, None, :] * p[None, :, :]
    ret = cumulative_trapezoid(integrand, weight_w(model, t), axis=-1,
                               initial=0.)
    ret = np.moveaxis(ret, -1, 0)
    return 0.5 * (ret + np.swapaxes(ret, 1, 2))


def gram_matrix(psi: PsiEvaluations, model: HurstModel, t: float,
                method: str = "auto") -> GramMatrix:
    """Return the Gram matrix R_H(t) = int_0^t psi_i psi_j dw_H.

    :raise GridError: if t is not a grid point.
    :raise DomainError: at t = 0, where there is no information.
    :raise IllConditionedError: if R is not positive definite.
    """
    k = psi.grid.index(t)
    if k == 0:
        raise DomainError("The Gram matrix vanishes at t = 0")

    R = gram_series(_truncate(psi, k), model, method)[-1]
    return _make_gram(psi, R, psi.grid.points[k])


def _truncate(psi: PsiEvaluations, k: int) -> PsiEvaluations:
    return PsiEvaluations(psi.grid.head(k), psi.psi[:, :k + 1],
                          psi.identifiable, psi.model, psi.sigma,
                          psi.closed_form, psi.kind, psi.label)


def _make_gram(psi: PsiEvaluations, R: np.ndarray, t: float) -> GramMatrix:
    cond = symmetric_condition(R)
    if not np.isfinite(cond):
        raise IllConditionedError(
            f"Gram matrix of basis {psi.label} at t = {t} is not positive "
            f"definite", basis=psi.label)
    return GramMatrix(float(t), R, psi.indices, psi.dimension, cond)


def score_series(psi: PsiEvaluations, mp: "MartingalePath",
                 rule: str = "trapezoid") -> np.ndarray:
    """Return psi^H at every grid time, shape (N + 1, d)."""
    if rule not in SCORE_RULES:
        raise DomainError(f"Unknown score rule {rule!r}")
    if psi.grid != mp.grid:
        raise GridError("psi and martingale path live on different grids")
    idx = _indices_or_raise(psi)

    p = psi.psi[idx]
    if rule == "trapezoid":
        p = 0.5 * (p[:, :-1] + p[:, 1:])
    else:
        p = p[:, :-1]
    ret = np.zeros((len(psi.grid), idx.size))
    np.cumsum((p * np.diff(mp.M)).T, axis=0, out=ret[1:])
    return ret


def score_vector(psi: PsiEvaluations, mp: "MartingalePath", t: float,
                 rule: str = "trapezoid") -> ScoreVector:
    """Return the score psi^H_t = int_0^t psi_i dM.

    The default rule averages psi_i over the end points of every interval;
    rule='left' takes the left end point.

    :raise GridError: on mismatched grids or if t is not a grid point.
    """
    k = mp.grid.index(t)
    ret = score_series(psi, mp, rule)[k]
    return ScoreVector(float(mp.grid.points[k]), ret, psi.indices,
                       psi.dimension)


def quadratic_log_likelihood(theta, gram: GramMatrix,
                             score: ScoreVector) -> float:
    """Return theta' psi^H - theta' R theta / 2.

    :param theta: full-dimension parameter vector; non-identifiable
        components do not enter.

    :raise DimensionError
    """
    theta = np.asarray(theta, dtype=np.float64).ravel()
    if theta.size != gram.dimension or score.dimension != gram.dimension:
        raise DimensionError(
            f"theta has {theta.size} elements, expected {gram.dimension}")
    if not np.array_equal(gram.indices, score.indices):
        raise DimensionError("Gram matrix and score index sets differ")

    x = theta[gram.indices]
    return float(x @ score.psiH - 0.5 * x @ gram.R @ x)
