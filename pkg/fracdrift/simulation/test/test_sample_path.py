import pytest

import numpy as np

from fracdrift.core import TimeGrid
from fracdrift.exceptions import DimensionError
from fracdrift.simulation import (
    SamplePath, read_sample_path, write_sample_path
)


def test_sample_path():
    grid = TimeGrid.uniform(1., 4)
    sp = SamplePath(grid, [0., 1., 2., 3., 4.])
    assert len(sp) == 5
    assert sp.at(0.75) == 3.
    np.testing.assert_array_equal(sp.t, grid.points)
    with pytest.raises(ValueError):
        sp.values[0] = 1.

    with pytest.raises(DimensionError):
        SamplePath(grid, [0., 1.])


def test_csv_io(tmp_path):
    grid = TimeGrid([0., 0.1, 1. / 3., 0.35])
    sp = SamplePath(grid, [0., np.pi, -1e-300, 2. / 3.])
    fp = str(tmp_path / "sub" / "path.csv")
    write_sample_path(fp, sp)

    with open(fp) as f:
        lines = f.read().splitlines()
    assert lines[0] == "t,value"
    assert lines[2] == "0.10000000000000001,3.1415926535897931"

    ret = read_sample_path(fp)
    assert ret.grid == grid
    np.testing.assert_array_equal(ret.values, sp.values)

    bad = tmp_path / "bad.csv"
    bad.write_text("time,value\n0,0\n")
    with pytest.raises(ValueError, match="expected header"):
        read_sample_path(str(bad))

    bad.write_text("t,value\n0.5,0\n1,0\n")
    with pytest.raises(ValueError, match="start at 0"):
        read_sample_path(str(bad))
