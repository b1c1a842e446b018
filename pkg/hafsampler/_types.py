"""Core domain types: sampler kinds, graphs, vertex weights and subsets."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

import numpy as np

from ._errors import GraphValidationError


class SamplerKind(Enum):
    GBS = "gbs"
    QI = "qi"
    UNIFORM = "uniform"
    IPS = "ips"

    @classmethod
    def parse(cls, value: SamplerKind | str) -> SamplerKind:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown sampler kind {value!r} (expected one of {names})") from None

    @property
    def needs_even_k(self) -> bool:
        return self in (SamplerKind.GBS, SamplerKind.QI, SamplerKind.IPS)


class Subset(tuple):
    """Sorted tuple of distinct, nonnegative vertex indices."""

    def __new__(cls, vertices: Iterable[Any] = ()):
        vals = sorted(int(v) for v in vertices)
        if vals and vals[0] < 0:
            raise GraphValidationError(f"negative vertex index {vals[0]}")
        for a, b in zip(vals, vals[1:]):
            if a == b:
                raise GraphValidationError(f"duplicate vertex {a} in subset")
        return super().__new__(cls, vals)

    def __repr__(self) -> str:
        return f"Subset({list(self)})"

    def check(self, n: int) -> Subset:
        """Raise unless every index is below ``n``; returns self."""
        if self and self[-1] >= n:
            raise GraphValidationError(
                f"vertex {self[-1]} out of range for graph with {n} vertices")
        return self

    def to_string(self) -> str:
        """Semicolon-joined form used in CSV files."""
        return ";".join(str(v) for v in self)

    @classmethod
    def from_string(cls, text: str) -> Subset:
        text = text.strip()
        return cls(int(t) for t in text.split(";")) if text else cls()


def as_subset(s: Subset | Iterable[int], n: int | None = None) -> Subset:
    sub = s if isinstance(s, Subset) else Subset(s)
    if n is not None:
        sub.check(n)
    return sub


def _frozen_array(values: Any, ndim: int, what: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=float, copy=True)
    except (TypeError, ValueError) as exc:
        raise GraphValidationError(f"{what} must be numeric: {exc}") from None
    if arr.ndim != ndim:
        raise GraphValidationError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GraphValidationError(f"{what} has non-finite entries")
    if np.any(arr < 0):
        raise GraphValidationError(f"{what} has negative entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph as a symmetric nonnegative adjacency matrix.

    The stored diagonal is always zero. Instances are immutable (the matrix
    is flagged read-only) and safe to share between workers.
    """

    adj: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.adj, 2, "adjacency matrix")
        n, m = arr.shape
        if n != m or n == 0:
            raise GraphValidationError(
                f"adjacency matrix must be square and nonempty, got {arr.shape}")
        if np.any(np.diag(arr) != 0):
            i = int(np.flatnonzero(np.diag(arr))[0])
            raise GraphValidationError(f"self-loop on vertex {i}")
        if not np.array_equal(arr, arr.T):
            i, j = np.argwhere(arr != arr.T)[0]
            raise GraphValidationError(f"asymmetric entry at ({i}, {j})")
        object.__setattr__(self, "adj", arr)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def num_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adj, 1)))

    def edges(self) -> list[tuple[int, int, float]]:
        """Positive-weight pairs ``(i, j, w)`` with ``i < j`` in row-major order."""
        iu, ju = np.nonzero(np.triu(self.adj, 1))
        return [(int(i), int(j), float(self.adj[i, j])) for i, j in zip(iu, ju)]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> Graph:
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples; duplicates are an error."""
        adj = np.zeros((n, n))
        seen: set[tuple[int, int]] = set()
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            w = float(edge[2]) if len(edge) > 2 else 1.0
            if i == j:
                raise GraphValidationError(f"self-loop on vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphValidationError(f"edge ({i}, {j}) out of range for {n} vertices")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphValidationError(f"duplicate edge ({i}, {j})")
            seen.add(key)
            if w < 0:
                raise GraphValidationError(f"negative weight on edge ({i}, {j})")
            adj[i, j] = adj[j, i] = w
        return cls(adj)

    def to_networkx(self):
        import networkx as nx

        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_weighted_edges_from(self.edges())
        return G

    @classmethod
    def from_networkx(cls, G, weight: str = "weight") -> Graph:
        import networkx as nx

        nodes = sorted(G.nodes)
        adj = nx.to_numpy_array(G, nodelist=nodes, weight=weight, dtype=float)
        np.fill_diagonal(adj, 0.0)
        return cls(adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True, eq=False)
class VertexWeights:
    """Nonnegative per-vertex weights ``w``."""

    w: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "w", _frozen_array(self.w, 1, "vertex weights"))

    def __len__(self) -> int:
        return len(self.w)

    def __getitem__(self, i):
        return self.w[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexWeights):
            return NotImplemented
        return np.array_equal(self.w, other.w)

    def __hash__(self) -> int:
        return hash(self.w.tobytes())

    def check(self, n: int) -> VertexWeights:
        if len(self.w) != n:
            raise GraphValidationError(
                f"weight vector has length {len(self.w)}, graph has {n} vertices")
        return self
