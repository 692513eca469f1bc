"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ..core import HurstModel, TimeGrid, kernel_mass_matrix, weight_w
from ..exceptions import DimensionError, DomainError, GridError
from ..simulation import SamplePath
from ..utility import write_csv

Sigma = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True, eq=False)
class MartingalePath:
    """Fundamental martingale of an observation and its bracket.

    :ivar M: M_t = int_0^t k_H(t, s) / sigma(s) d xi_s on the grid.
    :ivar w: bracket w_H(t).
    :ivar m: innovation ratio M / w with m[0] = 0.
    :ivar xi0: observation at t = 0, which equals the constant drift
        coefficient for polynomial bases.
    """

    grid: TimeGrid
    M: np.ndarray
    w: np.ndarray
    m: np.ndarray
    xi0: float = 0.

    def __post_init__(self):
        for name in ("M", "w", "m"):
            v = np.array(getattr(self, name), dtype=np.float64).ravel()
            if v.shape != self.grid.points.shape:
                raise DimensionError(
                    f"{name} has {v.size} values but the grid has "
                    f"{len(self.grid)} points")
            v.flags.writeable = False
            object.__setattr__(self, name, v)


def innovation_ratio(mp: MartingalePath) -> np.ndarray:
    """Return m_t = M_t / w_H(t), with m_0 = 0 by convention."""
    ret = np.zeros_like(mp.M)
    ret[1:] = mp.M[1:] / mp.w[1:]
    return ret


class MartingaleTransform:
    """Linear map from an observation path to its fundamental martingale.

    M[k] = sum_j W[k, j] (xi[j + 1] - xi[j]) where W[k, j] is the kernel
    k_H(t_k, .) averaged exactly over [t_j, t_{j+1}] and divided by sigma at
    the interval midpoint. W is computed once per (model, grid, sigma).

    :raise DomainError: if sigma is not positive on the grid.
    """
    def __init__(self, model: HurstModel, grid: TimeGrid, sigma: Sigma):
        self._model = model
        self._grid = grid

        t = grid.points
        mid = 0.5 * (t[:-1] + t[1:])
        if callable(sigma):
            s = np.broadcast_to(
                np.asarray(sigma(mid), dtype=np.float64), mid.shape)
        else:
            s = np.full(mid.shape, float(sigma))
        if np.any(~np.isfinite(s)) or np.any(s <= 0):
            raise DomainError("sigma must be positive and finite on the grid")

        self._weights = kernel_mass_matrix(model, grid) / (np.diff(t) * s)
        self._w = weight_w(model, t)

    @property
    def model(self) -> HurstModel:
        return self._model

    @property
    def grid(self) -> TimeGrid:
        return self._grid

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def apply_values(self, values: np.ndarray) -> np.ndarray:
        """Transform path values of shape (..., N + 1) into M."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape[-1] != len(self._grid):
            raise DimensionError(
                f"Path has {values.shape[-1]} values but the grid has "
                f"{len(self._grid)} points")
        return np.diff(values, axis=-1) @ self._weights.T

    def __call__(self, xi: SamplePath) -> MartingalePath:
        """Transform an observation path.

        :raise GridError: if the path lives on another grid.
        """
        if xi.grid != self._grid:
            raise GridError("Observation and transform grids differ")

        M = self.apply_values(xi.values)
        ret = np.zeros_like(M)
        ret[1:] = M[1:] / self._w[1:]
        return MartingalePath(self._grid, M, self._w, ret,
                              float(xi.values[0]))


def martingale_transform(xi: SamplePath, sigma: Sigma,
                         model: HurstModel) -> MartingalePath:
    """Compute the fundamental martingale of an observation path.

    :param SamplePath xi: observation.
    :param sigma: positive constant or callable sigma(t).
    :param HurstModel model: Hurst model.
    """
    return MartingaleTransform(model, xi.grid, sigma)(xi)


def write_martingale_path(path: str, mp: MartingalePath) -> None:
    """Write a martingale path as CSV with header 't,M,w,m'."""
    write_csv(path, ("t", "M", "w", "m"),
              zip(mp.grid.points, mp.M, mp.w, mp.m))
