"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from dataclasses import dataclass

from scipy.special import gamma

from ..exceptions import DomainError


@dataclass(frozen=True)
class HurstModel:
    """Hurst index and the constants of the fundamental martingale.

    kappa = 2H Gamma(3/2 - H) Gamma(1/2 + H) normalizes the kernel k_H and
    lambda_ = 2H Gamma(3 - 2H) Gamma(1/2 + H) / Gamma(3/2 - H) normalizes
    the bracket w_H. Both are 1 for Brownian motion (H = 1/2).
    """

    H: float
    kappa: float
    lambda_: float

    @property
    def exponent(self) -> float:
        """Exponent 1/2 - H of the kernel."""
        return 0.5 - self.H

    @property
    def shape(self) -> float:
        """Shape parameter 3/2 - H of the kernel's beta integrals."""
        return 1.5 - self.H

    @property
    def bracket_exponent(self) -> float:
        """Exponent 2 - 2H of w_H."""
        return 2. - 2. * self.H


def make_hurst_model(H: float) -> HurstModel:
    """Create a :class:`HurstModel`.

    :param float H: Hurst index in (0, 1).

    :raise DomainError
    """
    H = float(H)
    if not 0. < H < 1.:
        raise DomainError(f"Hurst index must be in (0, 1), got {H}")

    if H == 0.5:
        # every gamma argument equals 1 or 2
        return HurstModel(H, 1., 1.)

    kappa = 2. * H * gamma(1.5 - H) * gamma(0.5 + H)
    lambda_ = 2. * H * gamma(3. - 2. * H) * gamma(0.5 + H) / gamma(1.5 - H)
    return HurstModel(H, float(kappa), float(lambda_))
