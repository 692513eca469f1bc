"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..algorithm import symmetric_condition
from ..basis import PsiEvaluations
from ..basis.drift_basis import POLYNOMIAL
from ..config import config
from ..exceptions import DomainError, IllConditionedError
from ..transform.martingale import MartingalePath
from ..utility import write_csv
from .information import (
    GramMatrix, ScoreVector, gram_matrix, gram_series, score_series,
    score_vector
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """Point estimate of the full drift parameter vector.

    Non-identifiable components are NaN unless they are recovered
    otherwise: the constant coefficient of a polynomial basis equals the
    observation at t = 0.

    :ivar estimated: True for components estimated from the likelihood.
    """

    theta_hat: np.ndarray
    t: float
    info: GramMatrix
    score: ScoreVector
    method: str
    estimated: np.ndarray

    @property
    def covariance(self) -> np.ndarray:
        """Inverse Fisher information R^-1, embedded in the full dimension.

        Rows of components recovered exactly from xi(0) are 0 and rows of
        non-estimated components are NaN.
        """
        n = self.info.dimension
        ret = np.zeros((n, n))
        missing = np.isnan(self.theta_hat)
        ret[missing, :] = np.nan
        ret[:, missing] = np.nan
        idx = self.info.indices
        ret[np.ix_(idx, idx)] = cho_solve(cho_factor(self.info.R),
                                          np.eye(idx.size))
        return ret


def _solve(gram: GramMatrix, score: ScoreVector,
           label: str) -> np.ndarray:
    limit = config["CONDITION_LIMIT"]
    if gram.condition_estimate > limit:
        raise IllConditionedError(
            f"Gram matrix of basis {label} at t = {gram.t} has condition "
            f"number {gram.condition_estimate:.3g} > {limit:.3g}",
            condition=gram.condition_estimate, basis=label)
    x = cho_solve(cho_factor(gram.R), score.psiH)
    logger.debug("Solved normal equations of basis %s at t = %g, "
                 "condition number %.3g", label, gram.t,
                 gram.condition_estimate)
    return x


def _embed(x: np.ndarray, psi: PsiEvaluations, mp: MartingalePath):
    theta = np.full(psi.dimension, np.nan)
    theta[psi.indices] = x
    if psi.kind == POLYNOMIAL and not psi.identifiable[0]:
        theta[0] = mp.xi0
    return theta


def mle_estimate(psi: PsiEvaluations, mp: MartingalePath,
                 t: Optional[float] = None, *, rule: str = "trapezoid"
                 ) -> EstimationResult:
    """Return the maximum likelihood estimate R_H(t)^-1 psi^H_t.

    :param float t: grid time, the horizon by default.
    :param str rule: quadrature rule of the score, see
        :func:`score_vector`.

    :raise DomainError: at t = 0.
    :raise IllConditionedError: if the condition number of R_H(t) exceeds
        config['CONDITION_LIMIT'].
    """
    if t is None:
        t = mp.grid.horizon
    if mp.grid.index(t) == 0:
        raise DomainError("No information at t = 0")

    gram = gram_matrix(psi, psi.model, t)
    score = score_vector(psi, mp, t, rule)
    x = _solve(gram, score, psi.label)
    theta = _embed(x, psi, mp)
    return EstimationResult(theta, gram.t, gram, score, "ml",
                            psi.identifiable.copy())


def mle_trajectory(psi: PsiEvaluations, mp: MartingalePath, *,
                   rule: str = "trapezoid") -> List[EstimationResult]:
    """Return the estimates at every positive grid time.

    Times at which the Gram matrix is singular or its condition number
    exceeds config['CONDITION_LIMIT'] give a result whose estimated
    components are NaN. Only the components recovered from xi(0) are kept
    there.
    """
    R_all = gram_series(psi, psi.model)
    s_all = score_series(psi, mp, rule)
    t = mp.grid.points
    limit = config["CONDITION_LIMIT"]

    ret = []
    skipped = 0
    for k in range(1, t.size):
        R = R_all[k]
        cond = symmetric_condition(R)
        gram = GramMatrix(float(t[k]), R, psi.indices, psi.dimension, cond)
        score = ScoreVector(float(t[k]), s_all[k], psi.indices,
                            psi.dimension)
        if not cond <= limit:
            skipped += 1
            x = np.full(psi.indices.size, np.nan)
        else:
            x = cho_solve(cho_factor(R), score.psiH)
        ret.append(EstimationResult(_embed(x, psi, mp), gram.t, gram, score,
                                    "ml", psi.identifiable.copy()))
    if skipped:
        logger.warning("Gram matrix of basis %s is ill-conditioned at %d of "
                       "%d grid times; their estimates are NaN", psi.label,
                       skipped, t.size - 1)
    return ret


def trajectory_table(results: Sequence[EstimationResult]
                     ) -> Tuple[List[str], List[list]]:
    """Return the header 't,theta_0,...,theta_n,cond' and the rows."""
    if not results:
        raise DomainError("No estimates to write")
    n = results[0].theta_hat.size
    header = ["t"] + [f"theta_{i}" for i in range(n)] + ["cond"]
    rows = [[r.t, *r.theta_hat, r.info.condition_estimate] for r in results]
    return header, rows


def write_trajectory(path: str, results: Sequence[EstimationResult]) -> None:
    """Write estimates as CSV."""
    write_csv(path, *trajectory_table(results))
