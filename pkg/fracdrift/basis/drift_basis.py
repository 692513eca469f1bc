"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..core import TimeGrid
from ..exceptions import DimensionError, DomainError, GridError
from ..utility import read_csv_columns

Sigma = Union[float, Callable[[np.ndarray], np.ndarray]]

POLYNOMIAL = "polynomial"
TABULATED = "tabulated"


class DriftBasis:
    """Drift basis functions phi_0, ..., phi_n and the noise scale sigma.

    Use :meth:`polynomial` for phi_i(t) = t^i and :meth:`tabulated` for
    derivatives phi_i' sampled on a grid. The tabulated phi_i are the
    cumulative integrals of phi_i' with phi_i(0) = 0.
    """
    def __init__(self, kind: str, degree: int, sigma: Sigma, *,
                 table_grid: Optional[TimeGrid] = None,
                 dphi_table: Optional[np.ndarray] = None,
                 label: str = ""):
        if kind not in (POLYNOMIAL, TABULATED):
            raise DomainError(f"Unknown basis kind {kind!r}")
        if degree < 0:
            raise DomainError(f"Basis degree must be >= 0, got {degree}")
        if not callable(sigma):
            sigma = float(sigma)
            if not np.isfinite(sigma) or sigma < 0:
                raise DomainError(
                    f"sigma must be finite and nonnegative, got {sigma}")

        self._kind = kind
        self._degree = int(degree)
        self._sigma = sigma
        self._table_grid = table_grid
        self._dphi_table = dphi_table
        self._phi_table = None
        if kind == TABULATED:
            self._phi_table = cumulative_trapezoid(
                dphi_table, table_grid.points, axis=1, initial=0.)
        self._label = label or (f"poly{degree}" if kind == POLYNOMIAL
                                else f"table{degree}")

    @classmethod
    def polynomial(cls, degree: int, sigma: Sigma = 1.) -> "DriftBasis":
        """Basis phi_i(t) = t^i, i = 0, ..., degree."""
        return cls(POLYNOMIAL, degree, sigma)

    @classmethod
    def tabulated(cls, grid: TimeGrid, dphi, sigma: Sigma = 1., *,
                  label: str = "") -> "DriftBasis":
        """Basis given by derivatives phi_i' sampled on a grid.

        :param TimeGrid grid: table grid.
        :param dphi: array of shape (n + 1, len(grid)).

        :raise DimensionError, DomainError
        """
        dphi = np.array(dphi, dtype=np.float64, ndmin=2)
        if dphi.ndim != 2 or dphi.shape[1] != len(grid):
            raise DimensionError(
                f"Tabulated derivatives have shape {dphi.shape}, expected "
                f"(n + 1, {len(grid)})")
        if not np.all(np.isfinite(dphi)):
            raise DomainError("Tabulated derivatives must be finite")
        grid.require(2)
        dphi.flags.writeable = False
        return cls(TABULATED, dphi.shape[0] - 1, sigma,
                   table_grid=grid, dphi_table=dphi, label=label)

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def dimension(self) -> int:
        return self._degree + 1

    @property
    def label(self) -> str:
        return self._label

    @property
    def sigma(self) -> Sigma:
        return self._sigma

    @property
    def is_polynomial(self) -> bool:
        return self._kind == POLYNOMIAL

    @property
    def is_constant_sigma(self) -> bool:
        return not callable(self._sigma)

    @property
    def constant_sigma(self) -> float:
        """The constant sigma.

        :raise DomainError: if sigma depends on time.
        """
        if callable(self._sigma):
            raise DomainError(f"Basis {self._label} has a time-dependent "
                              f"sigma")
        return self._sigma

    def sigma_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if callable(self._sigma):
            v = np.asarray(self._sigma(t), dtype=np.float64)
            return np.broadcast_to(v, t.shape).copy()
        return np.full(t.shape, self._sigma)

    def _check_table_range(self, t: np.ndarray) -> None:
        if t.size and (t.min() < 0 or t.max() > self._table_grid.horizon):
            raise GridError(
                f"Basis {self._label} is tabulated on "
                f"[0, {self._table_grid.horizon}]")

    def phi(self, t) -> np.ndarray:
        """Return phi_i(t) with shape (n + 1, len(t))."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self._kind == POLYNOMIAL:
            return t[None, :] ** np.arange(self.dimension)[:, None]

        self._check_table_range(t)
        pts = self._table_grid.points
        return np.stack([np.interp(t, pts, row) for row in self._phi_table])

    def dphi(self, t) -> np.ndarray:
        """Return phi_i'(t) with shape (n + 1, len(t))."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self._kind == POLYNOMIAL:
            i = np.arange(self.dimension)[:, None]
            # 0 * t^-1 is 0, not nan
            ret = np.zeros((self.dimension, t.size))
            ret[1:] = i[1:] * t[None, :] ** (i[1:] - 1)
            return ret

        self._check_table_range(t)
        pts = self._table_grid.points
        return np.stack([np.interp(t, pts, row) for row in self._dphi_table])

    def __repr__(self):
        sigma = "callable" if callable(self._sigma) else repr(self._sigma)
        return (f"{self.__class__.__name__}(kind={self._kind!r}, "
                f"degree={self._degree}, sigma={sigma})")


def load_tabulated_basis(path: str, sigma: Sigma = 1.) -> DriftBasis:
    """Read a basis from a CSV file with header 't,dphi_0,...,dphi_n'.

    :raise ValueError: on a malformed file.
    """
    header, data = read_csv_columns(path)
    expected = ["t"] + [f"dphi_{i}" for i in range(len(header) - 1)]
    if len(header) < 2 or header != expected:
        raise ValueError(
            f"{path}: expected header t,dphi_0,...,dphi_n, "
            f"got {','.join(header)}")
    return DriftBasis.tabulated(TimeGrid(data[:, 0]), data[:, 1:].T, sigma,
                                label=path)
