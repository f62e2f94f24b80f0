"""
Matrix and record file utilities

Matrices are stored as UTF-8 CSV: a first record `rows,cols`, then `rows`
records of `cols` values written with 17 significant digits so a write/read
cycle is lossless. Vectors are n x 1 matrices.
"""

from __future__ import annotations

import io
import json
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from .errors import InvalidInputError


FLOAT_FORMAT = "%.17g"


def format_matrix_csv(matrix: npt.ArrayLike) -> str:
    """Render a 2-D array (or a 1-D vector as a column) in the repo CSV format"""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise InvalidInputError(f"expected a 1-D or 2-D array, got {m.ndim}-D")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix has non-finite entries")

    rows, cols = m.shape
    buf = io.StringIO()
    buf.write(f"{rows},{cols}\n")
    if rows and cols:
        np.savetxt(buf, m, fmt=FLOAT_FORMAT, delimiter=",")
    return buf.getvalue()


def parse_matrix_csv(text: str, source: str = "<string>") -> npt.NDArray[np.float64]:
    """Parse the repo CSV format into a float64 matrix"""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise InvalidInputError(f"{source}: empty matrix file")

    try:
        rows_str, cols_str = lines[0].split(",")
        rows, cols = int(rows_str), int(cols_str)
    except ValueError as e:
        raise InvalidInputError(f"{source}:1: bad header {lines[0]!r}, expected 'rows,cols'") from e
    if rows < 0 or cols < 0:
        raise InvalidInputError(f"{source}:1: negative dimensions {rows}x{cols}")

    if rows == 0 or cols == 0:
        return np.zeros((rows, cols))
    body = lines[1:]
    if len(body) != rows:
        raise InvalidInputError(f"{source}: expected {rows} records, found {len(body)}")

    m = np.empty((rows, cols))
    for lineno, line in enumerate(body, start=2):
        fields = line.split(",")
        if len(fields) != cols:
            raise InvalidInputError(f"{source}:{lineno}: expected {cols} values, found {len(fields)}")
        try:
            m[lineno - 2] = [float(x) for x in fields]
        except ValueError as e:
            raise InvalidInputError(f"{source}:{lineno}: {e}") from e

    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{source}: matrix has non-finite entries")
    return m


def parse_vector_csv(text: str, source: str = "<string>") -> npt.NDArray[np.float64]:
    """Parse an n x 1 (or 1 x n) matrix into a flat vector"""
    m = parse_matrix_csv(text, source)
    if m.shape[1] != 1 and m.shape[0] != 1:
        raise InvalidInputError(f"{source}: expected a vector, got {m.shape[0]}x{m.shape[1]}")
    return m.reshape(-1)


def write_text(path: Path, content: str) -> None:
    """
    Create file with content

    Args:
        path: File path
        content: Content
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    # Add newline at end if not present
    if content and not content.endswith("\n"):
        content = content + "\n"
    path.write_text(content, encoding="utf-8")


def write_matrix(path: Path, matrix: npt.ArrayLike) -> None:
    """Write a matrix file"""
    write_text(path, format_matrix_csv(matrix))


def read_matrix(path: Path) -> npt.NDArray[np.float64]:
    """Read a matrix file"""
    if not path.exists():
        raise InvalidInputError(f"matrix file not found: {path}")
    return parse_matrix_csv(path.read_text(encoding="utf-8"), source=str(path))


def read_vector(path: Path) -> npt.NDArray[np.float64]:
    """Read a vector file"""
    if not path.exists():
        raise InvalidInputError(f"vector file not found: {path}")
    return parse_vector_csv(path.read_text(encoding="utf-8"), source=str(path))


def dumps_json(data: Any) -> str:
    """Deterministic single-line JSON (insertion order, no NaN)"""
    return json.dumps(data, separators=(", ", ": "), allow_nan=False)


def write_json(path: Path, data: Any) -> None:
    """Write a JSON document"""
    write_text(path, json.dumps(data, indent=2, allow_nan=False))


def read_json(path: Path) -> Any:
    """Read a JSON document"""
    if not path.exists():
        raise InvalidInputError(f"JSON file not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path}: {e}") from e
