"""Reading and writing graph, matrix and vertex-weight files.

Formats (all indices 0-based):

* edge list — ``i j [w]`` per line, whitespace separated; ``#`` comments and
  blank lines are skipped; a missing weight means 1.0.
* matrix CSV — ``n`` comma-separated rows of ``n`` reals, no header.
* weights — one real per line.
"""
from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

import numpy as np

from ._errors import GraphFormatError, GraphValidationError
from ._types import Graph, VertexWeights

logger = logging.getLogger(__name__)

FORMATS = ("edge-list", "matrix-csv")


def infer_format(path: str | Path) -> str:
    return "matrix-csv" if Path(path).suffix.lower() == ".csv" else "edge-list"


def _data_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def _parse_float(token: str, path: Path, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise GraphFormatError(f"not a number: {token!r}", str(path), lineno) from None
    if not math.isfinite(value):
        raise GraphFormatError(f"non-finite value {token!r}", str(path), lineno)
    return value


def _parse_index(token: str, path: Path, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"not a vertex index: {token!r}", str(path), lineno) from None
    if value < 0:
        raise GraphFormatError(f"negative vertex index {value}", str(path), lineno)
    return value


def _read_edge_list(path: Path, n: int | None) -> Graph:
    edges: dict[tuple[int, int], float] = {}
    top = -1
    for lineno, line in _data_lines(path):
        fields = line.split()
        if len(fields) not in (2, 3):
            raise GraphFormatError(
                f"expected 'i j [w]', got {len(fields)} fields", str(path), lineno)
        i = _parse_index(fields[0], path, lineno)
        j = _parse_index(fields[1], path, lineno)
        w = _parse_float(fields[2], path, lineno) if len(fields) == 3 else 1.0
        if i == j:
            raise GraphFormatError(f"self-loop on vertex {i}", str(path), lineno)
        if w < 0:
            raise GraphFormatError(f"negative weight {w} on edge ({i}, {j})", str(path), lineno)
        key = (min(i, j), max(i, j))
        if key in edges:
            raise GraphFormatError(f"duplicate edge ({i}, {j})", str(path), lineno)
        edges[key] = w
        top = max(top, i, j)
    size = top + 1 if n is None else n
    if size < 1:
        raise GraphFormatError("edge list has no edges; pass the vertex count", str(path))
    if top >= size:
        raise GraphValidationError(f"{path}: vertex {top} out of range for n={size}")
    return Graph.from_edges(size, ((i, j, w) for (i, j), w in edges.items()))


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a square matrix CSV (any real entries) with line-numbered errors."""
    path = Path(path)
    rows: list[list[float]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            rows.append([_parse_float(cell.strip(), path, lineno) for cell in row])
            if len(rows[-1]) != len(rows[0]):
                raise GraphFormatError(
                    f"row has {len(rows[-1])} entries, expected {len(rows[0])}",
                    str(path), lineno)
    if not rows:
        raise GraphFormatError("empty matrix file", str(path))
    if len(rows) != len(rows[0]):
        raise GraphFormatError(f"matrix is {len(rows)}x{len(rows[0])}, not square", str(path))
    return np.array(rows, dtype=float)


def load_graph(path: str | Path, format: str | None = None,
               n: int | None = None) -> Graph:
    """Load a Graph from an edge list or a matrix CSV.

    ``format`` defaults to :func:`infer_format` (``.csv`` means matrix CSV).
    ``n`` fixes the vertex count of an edge list (isolated trailing vertices).
    """
    path = Path(path)
    fmt = format or infer_format(path)
    if fmt not in FORMATS:
        raise ValueError(f"unknown graph format {fmt!r} (expected one of {FORMATS})")
    if fmt == "edge-list":
        g = _read_edge_list(path, n)
    else:
        m = load_matrix(path)
        if not np.array_equal(m, m.T):
            i, j = np.argwhere(m != m.T)[0]
            raise GraphValidationError(f"{path}: asymmetric matrix at ({i}, {j})")
        g = Graph(m)
    logger.info("loaded %s from %s", g, path)
    return g


def save_graph(g: Graph, path: str | Path, format: str | None = None) -> Path:
    path = Path(path)
    fmt = format or infer_format(path)
    if fmt == "edge-list":
        lines = [f"# n={g.n}"] + [f"{i} {j} {w!r}" for i, j, w in g.edges()]
    elif fmt == "matrix-csv":
        lines = [",".join(repr(float(x)) for x in row) for row in g.adj]
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_weights(path: str | Path, n: int | None = None) -> VertexWeights:
    path = Path(path)
    values = []
    for lineno, line in _data_lines(path):
        value = _parse_float(line, path, lineno)
        if value < 0:
            raise GraphFormatError(f"negative vertex weight {value}", str(path), lineno)
        values.append(value)
    w = VertexWeights(np.array(values, dtype=float))
    if n is not None:
        w.check(n)
    return w
