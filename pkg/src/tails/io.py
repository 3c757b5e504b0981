"""CSV sample files and atomic output."""

from __future__ import annotations

import csv
import os
import tempfile

import numpy as np


def read_columns(path, ncols):
    """Read a numeric CSV with ``ncols`` columns.

    Lines starting with ``#`` are comments.  A single non-numeric first row
    is treated as a column header and skipped.
    """
    rows = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(csv.reader(fh), 1):
            if not line or line[0].lstrip().startswith("#"):
                continue
            try:
                vals = [float(x) for x in line]
            except ValueError:
                if not rows and lineno <= 2:
                    continue
                raise ValueError(f"{path}:{lineno}: non-numeric value in {line!r}")
            if len(vals) != ncols:
                raise ValueError(f"{path}:{lineno}: expected {ncols} columns, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    arr = np.array(rows)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{path}: non-finite values")
    return arr


def format_csv(columns, header_comment=None):
    """CSV text from equal-length columns; floats use shortest round-trip repr."""
    lines = []
    if header_comment:
        lines.append(f"# {header_comment}")
    for row in zip(*columns):
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tails-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
