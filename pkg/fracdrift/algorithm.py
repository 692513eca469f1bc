"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import golden


def symmetric_condition(a: np.ndarray) -> float:
    """Return the 2-norm condition number of a symmetric matrix.

    Returns inf if the matrix has a non-positive eigenvalue.
    """
    ev = np.linalg.eigvalsh(a)
    if ev.size == 0 or ev[0] <= 0:
        return float("inf")
    return float(ev[-1] / ev[0])


def golden_refine(func: Callable[[float], float],
                  lo: float, mid: float, hi: float, xtol: float) -> float:
    """Refine the minimizer of a function bracketed by (lo, mid, hi).

    The bracket must satisfy func(mid) <= min(func(lo), func(hi)). The
    returned abscissa is within xtol of the local minimizer.
    """
    if hi - lo <= xtol:
        return mid
    fm = func(mid)
    if not (fm < func(lo) and fm < func(hi)):
        # flat bracket
        return mid
    # scipy's tolerance is relative to the abscissa
    rtol = xtol / max(2. * abs(mid), np.finfo(np.float64).tiny)
    return float(golden(func, brack=(lo, mid, hi), tol=rtol))


def sign_changes(x: np.ndarray) -> int:
    """Count the sign changes in a sequence, ignoring exact zeros."""
    s = np.sign(np.asarray(x, dtype=np.float64))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def mean_and_se(x: np.ndarray) -> Tuple[float, float]:
    """Return the sample mean and its standard error.

    The standard error of a single observation is reported as 0.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n == 0:
        raise ValueError("Empty sample")
    if n == 1:
        return float(x[0]), 0.
    return float(np.mean(x)), float(np.std(x, ddof=1) / np.sqrt(n))


def variance_and_se(x: np.ndarray) -> Tuple[float, float]:
    """Return the unbiased sample variance and its standard error.

    The standard error uses the fourth central moment,
    sqrt((m4 - s^4 (n-3)/(n-1)) / n).
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 2:
        return 0., 0.
    var = float(np.var(x, ddof=1))
    m4 = float(np.mean((x - np.mean(x)) ** 4))
    se2 = (m4 - var ** 2 * (n - 3) / (n - 1)) / n
    return var, float(np.sqrt(max(se2, 0.)))
