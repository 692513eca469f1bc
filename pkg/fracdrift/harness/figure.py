"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..basis import DriftBasis, psi_closed_poly
from ..core import TimeGrid, make_hurst_model
from ..estimation import (
    CostCurve, NormalPrior, StoppingSolution, normal_cost_curve,
    normal_optimal_stop
)
from ..exceptions import DimensionError

logger = logging.getLogger(__name__)

# with T = 1 the minimizer of the default configuration sits at T
FIGURE_HORIZON = 30.
FIGURE_INTERVALS = 300


@dataclass(frozen=True, eq=False)
class CostFigure:
    """Cost curve F(t) and its minimizer."""

    H: float
    n: int
    c: float
    curve: CostCurve
    solution: StoppingSolution

    @property
    def interior_minimum(self) -> bool:
        """True if the minimizer lies strictly inside (0, T)."""
        return bool(0. < self.solution.tau < self.curve.t[-1])

    def summary(self) -> dict:
        return {
            "H": self.H,
            "n": self.n,
            "c": self.c,
            "tau": self.solution.tau,
            "expected_cost": self.solution.expected_cost,
            "unimodal": bool(self.solution.unimodal),
            "interior_minimum": self.interior_minimum,
        }


def reproduce_cost_figure(H: float = 0.2, n: int = 2, c: float = 0.02,
                          prior: Optional[NormalPrior] = None,
                          grid: Optional[TimeGrid] = None,
                          sigma: float = 1.) -> CostFigure:
    """Sample the cost of stopping at t for a polynomial drift of degree n
    and locate its minimizer.

    :param prior: normal prior of dimension n + 1, N(0, I) by default.
    :param grid: uniform grid on [0, 30] with 300 intervals by default.

    :raise DimensionError
    """
    model = make_hurst_model(H)
    if grid is None:
        grid = TimeGrid.uniform(FIGURE_HORIZON, FIGURE_INTERVALS)
    if prior is None:
        prior = NormalPrior.isotropic(np.zeros(n + 1), 1.)
    if prior.dimension != n + 1:
        raise DimensionError(
            f"Prior has dimension {prior.dimension}, expected {n + 1}")

    psi = psi_closed_poly(model, DriftBasis.polynomial(n, sigma), grid)
    curve = normal_cost_curve(prior, psi, model, c)
    solution = normal_optimal_stop(curve)

    ret = CostFigure(H, n, c, curve, solution)
    if not (ret.interior_minimum and solution.unimodal):
        logger.warning("Cost curve for H = %g, n = %d, c = %g has no "
                       "unique interior minimum", H, n, c)
    logger.info("Cost curve for H = %g, n = %d, c = %g: minimum %.6g at "
                "t = %.6g", H, n, c, solution.expected_cost, solution.tau)
    return ret
