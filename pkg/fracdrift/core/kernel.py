"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import numpy as np
from scipy.special import beta, betainc

from ..exceptions import DimensionError, DomainError
from .grid import TimeGrid
from .hurst import HurstModel


def kernel_k(model: HurstModel, t: float, s):
    """Evaluate k_H(t, s) = s^{1/2-H} (t-s)^{1/2-H} / kappa_H.

    :param float t: upper time.
    :param s: scalar or array of times in the open interval (0, t).

    :raise DomainError
    """
    s = np.asarray(s, dtype=np.float64)
    if np.any(s <= 0) or np.any(s >= t):
        raise DomainError(f"kernel_k needs 0 < s < t = {t}")

    p = model.exponent
    ret = s ** p * (t - s) ** p / model.kappa
    return float(ret) if ret.ndim == 0 else ret


def _mass_scale(model: HurstModel, t: float) -> float:
    q = model.shape
    return t ** model.bracket_exponent * beta(q, q) / model.kappa


def kernel_mass(model: HurstModel, t: float, a, b):
    """Return the integral of k_H(t, s) over s in [a, b].

    The substitution s = t u turns the integral into an incomplete beta
    function with both shape parameters equal to 3/2 - H, so the endpoint
    singularities never enter a quadrature.

    :param float t: upper time, t > 0.
    :param a: lower limit(s), 0 <= a <= b.
    :param b: upper limit(s), b <= t.

    :raise DomainError
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not t > 0:
        raise DomainError(f"kernel_mass needs t > 0, got {t}")
    if np.any(a < 0) or np.any(b < a) or np.any(b > t):
        raise DomainError(f"kernel_mass needs 0 <= a <= b <= t = {t}")

    q = model.shape
    ret = _mass_scale(model, t) * (betainc(q, q, b / t) - betainc(q, q, a / t))
    return float(ret) if ret.ndim == 0 else ret


def kernel_mass_matrix(model: HurstModel, grid: TimeGrid) -> np.ndarray:
    """Return the matrix of kernel masses over the grid intervals.

    Element [k, j] is the integral of k_H(t_k, s) over [t_j, t_{j+1}] for
    j < k and 0 otherwise. The shape is (N + 1, N).
    """
    pts = grid.points
    n = grid.n
    q = model.shape
    ret = np.zeros((n + 1, n))
    for k in range(1, n + 1):
        cdf = betainc(q, q, pts[:k + 1] / pts[k])
        ret[k, :k] = _mass_scale(model, pts[k]) * np.diff(cdf)
    return ret


def weight_w(model: HurstModel, t):
    """Return the bracket w_H(t) = t^{2-2H} / lambda_H.

    :raise DomainError: if t < 0.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise DomainError("weight_w needs t >= 0")
    ret = t ** model.bracket_exponent / model.lambda_
    return float(ret) if ret.ndim == 0 else ret


def frac_derivative(model: HurstModel, grid: TimeGrid,
                    f: np.ndarray) -> np.ndarray:
    """Differentiate a sampled function with respect to w_H.

    df/dw = lambda_H / (2 - 2H) t^{2H-1} df/dt, with df/dt from central
    differences at interior points and one-sided differences at the ends.
    The prefactor is singular or vanishes at t = 0, so the value there is
    extrapolated linearly from the first two interior points. It never
    enters a dw-integral.

    :raise GridError: if the grid has fewer than 2 points.
    :raise DimensionError: if f is not sampled on the grid.
    """
    grid.require(2)
    f = np.asarray(f, dtype=np.float64)
    if f.shape != grid.points.shape:
        raise DimensionError(
            f"Sampled function has shape {f.shape}, grid has "
            f"{grid.points.shape}")

    t = grid.points
    edge_order = 2 if t.size >= 3 else 1
    dfdt = np.gradient(f, t, edge_order=edge_order)

    ret = np.empty_like(f)
    factor = model.lambda_ / model.bracket_exponent
    ret[1:] = factor * t[1:] ** (2. * model.H - 1.) * dfdt[1:]
    if t.size >= 3:
        slope = (ret[2] - ret[1]) / (t[2] - t[1])
        ret[0] = ret[1] - slope * (t[1] - t[0])
    else:
        ret[0] = ret[1]
    return ret
