"""Exact distributions over the k-subsets of a graph.

A :class:`DistributionTable` lists every ``k``-subset in lexicographic order
with its unnormalized weight and probability. Subsets without a perfect
matching stay in the table with probability zero, so tables of different
kinds for the same ``(graph, k)`` line up row by row.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .._config import get_setting
from .._errors import BudgetExceededError, EmptySectorError, OddSectorError
from .._hafnian import HafnianCache, matching_count
from .._parallel import ordered_map
from .._rng import as_generator
from .._types import Graph, SamplerKind, Subset, as_subset
from ._base import Sampler

logger = logging.getLogger(__name__)

# subsets per enumeration task; fixed so results never depend on --threads
_ENUM_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """Normalized law over all ``k``-subsets for one sampler kind.

    ``Z`` is the normalization constant: ``Z_Q = sum haf^2`` for gbs,
    ``Z_C = sum haf`` for qi, ``C(n, k)`` for uniform and the collision-free
    sector mass for ips.
    """

    n: int
    k: int
    kind: SamplerKind
    subsets: np.ndarray  # (m, k) int, lexicographic rows
    weights: np.ndarray  # (m,)
    probs: np.ndarray    # (m,)
    Z: float

    def __len__(self) -> int:
        return len(self.probs)

    @classmethod
    def from_weights(cls, n: int, k: int, kind: SamplerKind | str,
                     subsets: np.ndarray, weights: np.ndarray) -> DistributionTable:
        kind = SamplerKind.parse(kind)
        weights = np.asarray(weights, dtype=float)
        subsets = np.asarray(subsets, dtype=np.int64).reshape(len(weights), k)
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError("table weights must be finite and nonnegative")
        Z = float(np.sum(weights))
        if Z <= 0:
            raise EmptySectorError(f"no {k}-subset carries any {kind.value} weight")
        probs = weights / Z
        for arr in (subsets, weights, probs):
            arr.setflags(write=False)
        return cls(n=n, k=k, kind=kind, subsets=subsets, weights=weights, probs=probs, Z=Z)

    @classmethod
    def from_entries(cls, n: int, kind: SamplerKind | str,
                     entries: Iterable[tuple[Iterable[int], float]]) -> DistributionTable:
        """Build from ``(subset, weight)`` pairs; rows are sorted lexicographically."""
        rows = sorted((as_subset(s, n), float(w)) for s, w in entries)
        if not rows:
            raise EmptySectorError("a distribution table needs at least one entry")
        k = len(rows[0][0])
        if any(len(s) != k for s, _ in rows):
            raise ValueError("all table subsets must have the same size")
        if len({s for s, _ in rows}) != len(rows):
            raise ValueError("table subsets must be distinct")
        return cls.from_weights(n, k, kind, np.array([s for s, _ in rows]).reshape(len(rows), k),
                                np.array([w for _, w in rows]))

    @cached_property
    def cumprob(self) -> np.ndarray:
        return np.cumsum(self.probs)

    @cached_property
    def _last_positive(self) -> int:
        return int(np.flatnonzero(self.probs)[-1])

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(v) for v in row): i for i, row in enumerate(self.subsets)}

    @property
    def entries(self) -> list[tuple[Subset, float]]:
        return [(Subset(row), float(p)) for row, p in zip(self.subsets, self.probs)]

    def probability(self, s: Subset | Iterable[int]) -> float:
        """Probability of one subset; 0 for subsets of another size."""
        sub = as_subset(s, self.n)
        row = self._index.get(tuple(sub))
        return 0.0 if row is None else float(self.probs[row])

    def mass(self, predicate: Callable[[Subset], bool]) -> float:
        """Total probability of the subsets for which ``predicate`` holds."""
        keep = np.array([bool(predicate(Subset(row))) for row in self.subsets])
        return float(np.sum(self.probs[keep])) if keep.size else 0.0

    def argmax(self) -> tuple[Subset, float]:
        """Most likely subset; the lexicographically first on ties."""
        row = int(np.argmax(self.probs))
        return Subset(self.subsets[row]), float(self.probs[row])

    def pick(self, u: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.cumprob, u, side="right")
        return np.minimum(idx, self._last_positive)

    def to_rows(self) -> list[tuple[str, float, float]]:
        """``(vertices, weight, probability)`` CSV rows."""
        return [(Subset(row).to_string(), float(w), float(p))
                for row, w, p in zip(self.subsets, self.weights, self.probs)]


def enumeration_cost(n: int, k: int) -> int:
    """Hafnian products needed to tabulate all ``k``-subsets: ``C(n, k) (k-1)!!``."""
    return math.comb(n, k) * max(matching_count(k), 1)


def _subset_array(n: int, k: int) -> np.ndarray:
    dtype = np.int16 if n < (1 << 15) else np.int64
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(n), k)),
                       dtype=dtype, count=math.comb(n, k) * k)
    return flat.reshape(-1, k)


def _chunk_hafnians(task: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    adj, subsets = task
    haf = HafnianCache(adj)
    return np.fromiter((haf(row.tolist()) for row in subsets), dtype=float, count=len(subsets))


def subset_hafnians(g: Graph, subsets: np.ndarray, threads: int | None = None) -> np.ndarray:
    """Hafnians of ``A_s`` for every row of ``subsets``, computed in fixed chunks."""
    tasks = [(g.adj, subsets[start:start + _ENUM_CHUNK])
             for start in range(0, len(subsets), _ENUM_CHUNK)]
    parts = ordered_map(_chunk_hafnians, tasks, get_setting("threads", threads))
    return np.concatenate(parts) if parts else np.empty(0)


def _check_sector(g: Graph, k: int, kind: SamplerKind, max_enum: int | None) -> None:
    if k < 1:
        raise ValueError(f"subset size must be positive, got {k}")
    if kind.needs_even_k and k % 2:
        raise OddSectorError(f"{kind.value} tables need an even subset size, got {k}")
    if k > g.n:
        raise EmptySectorError(f"no {k}-subsets of {g.n} vertices")
    budget = get_setting("max_enum", max_enum)
    cost = math.comb(g.n, k) if kind is SamplerKind.UNIFORM else enumeration_cost(g.n, k)
    if cost > budget:
        raise BudgetExceededError(
            f"{kind.value} table for n={g.n}, k={k} needs {cost:.3g} products "
            f"(budget {budget:.3g})")
    if kind is not SamplerKind.UNIFORM and k > get_setting("hafnian_cap"):
        raise BudgetExceededError(f"subset size {k} exceeds the hafnian cap")


def exact_distribution(g: Graph, k: int, kind: SamplerKind | str,
                       max_enum: int | None = None,
                       threads: int | None = None) -> DistributionTable:
    """Tabulate all ``k``-subsets with weight ``haf^2`` (gbs), ``haf`` (qi) or 1 (uniform)."""
    kind = SamplerKind.parse(kind)
    if kind is SamplerKind.IPS:
        from ._ips import ips_sector_table

        return ips_sector_table(g, k, max_enum=max_enum)
    _check_sector(g, k, kind, max_enum)
    subsets = _subset_array(g.n, k)
    logger.info("enumerating %d %d-subsets for the %s table", len(subsets), k, kind.value)
    if kind is SamplerKind.UNIFORM:
        weights = np.ones(len(subsets))
    else:
        haf = subset_hafnians(g, subsets, threads)
        weights = haf * haf if kind is SamplerKind.GBS else haf
    return DistributionTable.from_weights(g.n, k, kind, subsets, weights)


def sample_from_table(t: DistributionTable, rng) -> Subset:
    """Inverse-CDF draw of one subset; zero-probability rows are never returned."""
    rng = as_generator(rng)
    return Subset(t.subsets[int(t.pick(rng.random()))])


def pc_from_pq(t: DistributionTable) -> DistributionTable:
    """Turn a gbs table into the qi table: ``p_C = sqrt(p_Q) / sum sqrt(p_Q)``."""
    if t.kind is not SamplerKind.GBS:
        raise ValueError(f"pc_from_pq needs a gbs table, got {t.kind.value}")
    return DistributionTable.from_weights(t.n, t.k, SamplerKind.QI, t.subsets,
                                          np.sqrt(t.weights))


@dataclass(frozen=True)
class ProbabilityRatioReport:
    """Probabilities of the most likely gbs outcome under the three laws."""

    argmax: Subset
    p_q: float
    p_c: float
    p_u: float

    @property
    def ratio_uniform(self) -> float:
        return self.p_q / self.p_u

    @property
    def ratio_qi(self) -> float:
        return self.p_q / self.p_c

    def to_dict(self) -> dict:
        return {
            "argmax": self.argmax.to_string(),
            "p_q": self.p_q,
            "p_c": self.p_c,
            "p_u": self.p_u,
            "ratio_uniform": self.ratio_uniform,
            "ratio_qi": self.ratio_qi,
        }


def max_probability_ratios(g: Graph, k: int, max_enum: int | None = None,
                           threads: int | None = None) -> ProbabilityRatioReport:
    gbs = exact_distribution(g, k, SamplerKind.GBS, max_enum=max_enum, threads=threads)
    qi = pc_from_pq(gbs)
    best, p_q = gbs.argmax()
    report = ProbabilityRatioReport(argmax=best, p_q=p_q, p_c=qi.probability(best),
                                    p_u=1.0 / math.comb(g.n, k))
    logger.info("argmax %s: p_Q/p_U=%.4g p_Q/p_C=%.4g",
                best, report.ratio_uniform, report.ratio_qi)
    return report


class TableSampler(Sampler):
    """Draws from a precomputed :class:`DistributionTable`."""

    def __init__(self, table: DistributionTable, g: Graph | None = None):
        self.kind = table.kind
        self.table = table
        if g is not None:
            super().__init__(g, table.k)
        else:
            self._graph = None
            self._k = table.k

    def draw(self, rng) -> Subset:
        return sample_from_table(self.table, rng)

    def draw_many(self, count: int, rng) -> np.ndarray:
        return self.table.subsets[self.table.pick(rng.random(count))].astype(np.int64)

    def __repr__(self) -> str:
        return f"TableSampler(kind={self.kind.value}, k={self._k}, rows={len(self.table)})"


class GBSSampler(TableSampler):
    """Exact sector-restricted GBS: weights ``haf(A_T)^2`` over ``k``-subsets."""

    def __init__(self, g: Graph, k: int, max_enum: int | None = None,
                 threads: int | None = None):
        super().__init__(exact_distribution(g, k, SamplerKind.GBS, max_enum, threads), g)
