"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
from dataclasses import dataclass

import numpy as np

from ..core import TimeGrid
from ..exceptions import DimensionError
from ..utility import read_csv_columns, write_csv


@dataclass(frozen=True, eq=False)
class SamplePath:
    """Values of a process on a time grid."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.shape != self.grid.points.shape:
            raise DimensionError(
                f"Path has {values.size} values but the grid has "
                f"{len(self.grid)} points")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def t(self) -> np.ndarray:
        return self.grid.points

    def __len__(self):
        return self.values.size

    def at(self, t: float) -> float:
        """Value at the grid point t."""
        return float(self.values[self.grid.index(t)])


def write_sample_path(path: str, sp: SamplePath) -> None:
    """Write a path as CSV with header 't,value'."""
    write_csv(path, ("t", "value"), zip(sp.t, sp.values))


def read_sample_path(path: str) -> SamplePath:
    """Read a path written by :func:`write_sample_path`.

    :raise ValueError: on a malformed file or an invalid time column.
    """
    _, data = read_csv_columns(path, expected=("t", "value"))
    return SamplePath(TimeGrid(data[:, 0]), data[:, 1])
