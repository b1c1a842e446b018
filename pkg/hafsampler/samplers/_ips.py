"""Independent-pairs (IPS) photon statistics.

Every unordered mode pair ``(j, k)`` emits a Poisson(``A_jk``) number of
photon pairs, one photon of each pair landing on ``j`` and one on ``k``.
Outcomes are occupancy vectors, collisions included. Restricted to
collision-free outcomes of a fixed total ``2N`` the law is proportional to
``haf(A_T)``, the same as the qi sampler.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.stats import poisson

from .._config import get_setting
from .._errors import BudgetExceededError, EmptySectorError, GraphValidationError, OddSectorError
from .._rng import as_generator
from .._types import Graph, SamplerKind, Subset
from ._base import Sampler
from ._table import DistributionTable, _subset_array

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OccupancyVector:
    """Photon numbers per mode."""

    counts: np.ndarray

    def __post_init__(self):
        arr = np.array(self.counts, dtype=np.int64, copy=True)
        if arr.ndim != 1:
            raise GraphValidationError(f"occupancy must be a vector, got shape {arr.shape}")
        if np.any(arr < 0):
            raise GraphValidationError("occupancy counts must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(np.sum(self.counts))

    @property
    def collision_free(self) -> bool:
        return bool(np.all(self.counts <= 1))

    def to_subset(self) -> Subset:
        if not self.collision_free:
            raise ValueError("occupancy has collisions and is not a vertex subset")
        return Subset(np.flatnonzero(self.counts))

    def to_string(self) -> str:
        return ";".join(str(int(c)) for c in self.counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OccupancyVector):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    def __hash__(self) -> int:
        return hash(self.counts.tobytes())


def _pairs(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    iu, ju = np.triu_indices(g.n, 1)
    return iu, ju, g.adj[iu, ju]


def _incidence(n: int, iu: np.ndarray, ju: np.ndarray) -> np.ndarray:
    inc = np.zeros((len(iu), n), dtype=np.int64)
    rows = np.arange(len(iu))
    inc[rows, iu] = 1
    inc[rows, ju] = 1
    return inc


def ips_sample(g: Graph, rng) -> OccupancyVector:
    """Poisson(``A_jk``) pairs on every mode pair, summed into an occupancy vector."""
    rng = as_generator(rng)
    iu, ju, lam = _pairs(g)
    m = rng.poisson(lam)
    counts = np.zeros(g.n, dtype=np.int64)
    np.add.at(counts, iu, m)
    np.add.at(counts, ju, m)
    return OccupancyVector(counts)


def _configurations(num_edges: int, pairs: int, max_enum: int | None) -> np.ndarray:
    """All pair-count vectors over ``num_edges`` edges summing to ``pairs``."""
    count = math.comb(num_edges + pairs - 1, pairs)
    budget = get_setting("max_enum", max_enum)
    if count > budget:
        raise BudgetExceededError(
            f"{count:.3g} pair configurations exceed the enumeration budget {budget:.3g}")
    configs = np.zeros((count, num_edges), dtype=np.int64)
    multisets = itertools.combinations_with_replacement(range(num_edges), pairs)
    for row, multiset in enumerate(multisets):
        np.add.at(configs[row], list(multiset), 1)
    return configs


def _config_probabilities(configs: np.ndarray, lam: np.ndarray, rest: float) -> np.ndarray:
    """Poisson product law of each configuration; ``rest`` is the mean left off ``lam``."""
    return np.prod(poisson.pmf(configs, lam), axis=1) * math.exp(-rest)


def ips_sector_table(g: Graph, k: int, max_enum: int | None = None) -> DistributionTable:
    """IPS law restricted to collision-free outcomes with ``k`` photons, renormalized."""
    if k % 2:
        raise OddSectorError(f"ips outcomes have an even photon total, got {k}")
    if k < 2:
        raise ValueError(f"subset size must be at least 2, got {k}")
    if k > g.n:
        raise EmptySectorError(f"no {k}-subsets of {g.n} vertices")
    iu, ju, lam = _pairs(g)
    live = lam > 0
    if not np.any(live):
        raise EmptySectorError("graph has no edges; every ips outcome is empty")
    iu, ju, lam = iu[live], ju[live], lam[live]
    configs = _configurations(len(lam), k // 2, max_enum)
    probs = _config_probabilities(configs, lam, 0.0)
    occupancy = configs @ _incidence(g.n, iu, ju)
    free = np.all(occupancy <= 1, axis=1)
    mass: dict[tuple[int, ...], float] = {}
    for row, p in zip(occupancy[free], probs[free]):
        key = tuple(int(v) for v in np.flatnonzero(row))
        mass[key] = mass.get(key, 0.0) + float(p)
    logger.info("ips sector k=%d: %d configurations, %d collision-free occupancies",
                k, len(configs), len(mass))
    subsets = _subset_array(g.n, k)
    weights = np.array([mass.get(tuple(int(v) for v in row), 0.0) for row in subsets])
    return DistributionTable.from_weights(g.n, k, SamplerKind.IPS, subsets, weights)


def ips_occupancy_probability(g: Graph, counts: OccupancyVector | Iterable[int],
                              max_enum: int | None = None) -> float:
    """Unnormalized ``Q(n)``: total Poisson mass of configurations producing ``counts``."""
    occ = counts if isinstance(counts, OccupancyVector) else OccupancyVector(counts)
    if occ.n != g.n:
        raise GraphValidationError(f"occupancy has {occ.n} modes, graph has {g.n}")
    iu, ju, lam = _pairs(g)
    total = float(np.sum(lam))
    if occ.total % 2:
        return 0.0
    if occ.total == 0:
        return math.exp(-total)
    # only edges inside the occupied modes can contribute
    inside = (lam > 0) & (occ.counts[iu] > 0) & (occ.counts[ju] > 0)
    if not np.any(inside):
        return 0.0
    iu, ju, sub_lam = iu[inside], ju[inside], lam[inside]
    configs = _configurations(len(sub_lam), occ.total // 2, max_enum)
    match = np.all(configs @ _incidence(g.n, iu, ju) == occ.counts, axis=1)
    if not np.any(match):
        return 0.0
    probs = _config_probabilities(configs[match], sub_lam, total - float(np.sum(sub_lam)))
    return float(np.sum(probs))


class IPSSampler(Sampler):
    """Raw IPS occupancies; ``sample`` rows have one column per mode."""

    kind = SamplerKind.IPS

    def __init__(self, g: Graph, k: int | None = None):
        super().__init__(g, k or 0)
        iu, ju, lam = _pairs(g)
        self._lam = lam
        self._incidence = _incidence(g.n, iu, ju)

    @property
    def width(self) -> int:
        return self._graph.n

    def draw(self, rng) -> OccupancyVector:
        return ips_sample(self._graph, rng)

    def draw_many(self, count: int, rng) -> np.ndarray:
        return rng.poisson(self._lam, size=(count, len(self._lam))) @ self._incidence
