"""Matrix file JSON format shared by the CLI and tests.

Schema: {"rows": R, "cols": C, "data": [[entry, ...], ...]} where each entry
is a number, a string "p/q" (exact rational), or a two-element array
[re, im] (complex).  Mixing rational strings and complex pairs in one file
is an error.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .exact import RationalMatrix, format_rational, parse_rational

__all__ = ["MatrixParseError", "parse_matrix", "serialize_matrix", "load_matrix", "dump_matrix"]


class MatrixParseError(ValueError):
    pass


def parse_matrix(obj):
    """Parse a matrix-file dict into a RationalMatrix or complex ndarray.

    Returns a RationalMatrix when every entry is exact (int or "p/q"
    string), otherwise a numpy array.
    """
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except (KeyError, TypeError) as e:
        raise MatrixParseError(f"missing field: {e}") from e
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise MatrixParseError("rows/cols must be positive integers")
    if len(data) != rows or any(len(r) != cols for r in data):
        raise MatrixParseError("data grid does not match rows x cols")

    has_rational = any(isinstance(x, str) for row in data for x in row)
    has_complex = any(isinstance(x, list) for row in data for x in row)
    has_float = any(
        isinstance(x, float) and not float(x).is_integer()
        for row in data for x in row
    )
    if has_rational and has_complex:
        raise MatrixParseError("mixed rational and complex entries")

    if has_rational or not (has_complex or has_float):
        try:
            return RationalMatrix(
                [[parse_rational(x) for x in row] for row in data]
            )
        except (ValueError, ZeroDivisionError) as e:
            raise MatrixParseError(f"bad rational entry: {e}") from e

    def entry(x):
        if isinstance(x, list):
            if len(x) != 2:
                raise MatrixParseError(f"complex entry must be [re, im]: {x!r}")
            return complex(x[0], x[1])
        if isinstance(x, (int, float)):
            return complex(x)
        raise MatrixParseError(f"bad entry: {x!r}")

    m = np.array([[entry(x) for x in row] for row in data], dtype=complex)
    if not np.all(np.isfinite(m)):
        raise MatrixParseError("entries must be finite")
    return m


def serialize_matrix(m) -> dict:
    """Inverse of parse_matrix; entry convention follows the value type."""
    if isinstance(m, RationalMatrix):
        data = [[format_rational(x) for x in row] for row in m.data]
        return {"rows": m.rows, "cols": m.cols, "data": data}
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    if np.iscomplexobj(m) and np.any(m.imag != 0):
        data = [[[float(x.real), float(x.imag)] for x in row] for row in m]
    else:
        data = [[float(x.real if np.iscomplexobj(m) else x) for x in row] for row in m]
    return {"rows": m.shape[0], "cols": m.shape[1], "data": data}


def load_matrix(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise MatrixParseError(f"cannot read matrix file {path}: {e}") from e
    return parse_matrix(obj)


def dump_matrix(m, path) -> None:
    with open(path, "w") as fh:
        json.dump(serialize_matrix(m), fh)
        fh.write("\n")
