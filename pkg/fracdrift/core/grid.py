"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from dataclasses import dataclass

import numpy as np

from ..exceptions import GridError


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Discretization t_0 = 0 < t_1 < ... < t_N = T of [0, T].

    The degenerate grid {0} (N = 0) is accepted; operations which need
    intervals check the size themselves.
    """

    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64).ravel()
        if points.size == 0:
            raise GridError("Time grid is empty")
        if points[0] != 0.:
            raise GridError(
                f"Time grid must start at 0, got {points[0]!r}")
        if not np.all(np.isfinite(points)):
            raise GridError("Time grid contains non-finite points")
        if np.any(np.diff(points) <= 0):
            raise GridError("Time grid must be strictly increasing")
        points.flags.writeable = False
        object.__setattr__(self, "points", points)

    @classmethod
    def uniform(cls, horizon: float, n: int) -> "TimeGrid":
        """Uniform grid with n intervals on [0, horizon]."""
        if n < 1:
            raise GridError(f"A uniform grid needs n >= 1 intervals, got {n}")
        if not horizon > 0:
            raise GridError(f"Horizon must be positive, got {horizon}")
        points = np.linspace(0., horizon, n + 1)
        return cls(points)

    @property
    def n(self) -> int:
        """Number of intervals."""
        return self.points.size - 1

    @property
    def horizon(self) -> float:
        return float(self.points[-1])

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        if self.n < 1:
            return True
        dt = np.diff(self.points)
        return bool(np.allclose(dt, dt[0], rtol=rtol, atol=0.))

    def index(self, t: float) -> int:
        """Return the index of the grid point t.

        :raise GridError: if t is not a grid point.
        """
        i = int(np.searchsorted(self.points, t))
        for j in (i - 1, i):
            if 0 <= j < self.points.size and np.isclose(
                    self.points[j], t, rtol=1e-12, atol=1e-14):
                return j
        raise GridError(f"{t!r} is not a grid point")

    def head(self, k: int) -> "TimeGrid":
        """Return the sub-grid t_0, ..., t_k."""
        return TimeGrid(self.points[:k + 1])

    def require(self, n_min: int) -> None:
        """Raise if the grid has fewer than n_min points."""
        if self.points.size < n_min:
            raise GridError(
                f"Operation needs at least {n_min} grid points, "
                f"got {self.points.size}")
