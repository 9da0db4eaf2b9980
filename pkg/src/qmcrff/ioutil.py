"""CSV helpers shared by the point-set types and the CLI."""

import numpy as np


class DataError(ValueError):
    """Malformed or missing input data (CLI exit code 3)."""


class NumericalError(RuntimeError):
    """Numerical failure such as a factorization breakdown (CLI exit code 4)."""


def write_matrix_csv(path, matrix):
    """One row per line, full double precision (%.17g), no header."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w") as fh:
        for row in matrix:
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def read_matrix_csv(path, skip_header=False):
    """Parse a numeric CSV; errors name the offending 1-based line."""
    rows = []
    arity = None
    try:
        fh = open(path)
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if skip_header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if arity is None:
                arity = len(fields)
            elif len(fields) != arity:
                raise DataError(
                    f"{path}: line {lineno} has {len(fields)} fields, expected {arity}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)
