"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import csv
import io
import json
import os
import os.path as osp
import tempfile
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import config


def parse_seed(text) -> int:
    """Parse a string into an unsigned 64-bit seed.

    :param str text: the input string, decimal or 0x-prefixed hexadecimal.

    :return int: the seed.

    :raise ValueError

    Examples:

    parse_seed("42") == 42
    parse_seed("0xff") == 255
    """
    try:
        v = int(str(text).strip(), 0)
    except Exception as e:
        raise ValueError(f"Invalid seed: {text!r}") from e

    if v < 0 or v >= 2 ** 64:
        raise ValueError(f"Seed must be an unsigned 64-bit integer: {v}")
    return v


def format_float(v: float) -> str:
    """Format a float with enough digits to round-trip."""
    return format(float(v), config["CSV_FLOAT_FORMAT"])


def atomic_write(path: str, text: str) -> None:
    """Write text to a file atomically.

    The text is written to a temporary file in the target directory which
    then replaces the target, so a partial file is never left behind.
    """
    dirname = osp.dirname(osp.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dirname, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fp:
            fp.write(text)
        os.replace(tmp, path)
    except BaseException:
        if osp.exists(tmp):
            os.remove(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Render rows as CSV text.

    Floats (including numpy floating types) are formatted with
    :func:`format_float`; everything else with str().
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v)
                         if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def write_csv(path: str, header: Sequence[str],
              rows: Iterable[Sequence]) -> None:
    atomic_write(path, csv_text(header, rows))


def write_json(path: str, data) -> None:
    atomic_write(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def read_csv_columns(path: str,
                     expected: Optional[Sequence[str]] = None
                     ) -> Tuple[List[str], np.ndarray]:
    """Read a numeric CSV file with a header line.

    :param str path: file path.
    :param expected: if given, the header must match it exactly.

    :return tuple: (header, 2D array with one column per header field).

    :raise ValueError
    """
    with open(path, newline="") as fp:
        reader = csv.reader(fp)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file")

        if expected is not None and header != list(expected):
            raise ValueError(
                f"{path}: expected header {','.join(expected)}, "
                f"got {','.join(header)}")

        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field")

    data = np.array(rows, dtype=np.float64).reshape(-1, len(header))
    return header, data
