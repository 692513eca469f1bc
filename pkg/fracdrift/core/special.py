"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import numpy as np
from scipy.special import ndtr


_LOG_SQRT_2PI = 0.5 * np.log(2. * np.pi)


def std_normal_cdf(x):
    """Standard normal distribution function Phi(x)."""
    ret = ndtr(np.asarray(x, dtype=np.float64))
    return float(ret) if ret.ndim == 0 else ret


def log_std_normal_pdf(x):
    """log phi(x)."""
    x = np.asarray(x, dtype=np.float64)
    ret = -0.5 * x * x - _LOG_SQRT_2PI
    return float(ret) if ret.ndim == 0 else ret
