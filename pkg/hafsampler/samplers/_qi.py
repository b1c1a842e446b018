"""The quantum-inspired sampler: i.i.d. edge draws with rejection of collisions.

Each attempt picks ``N`` circuits (edges) independently with probability
``q_(i,j) = A_ij / S`` and emits both endpoints of each. An attempt whose
``2N`` endpoints are all distinct is accepted; the accepted vertex set ``T``
then has probability ``N! haf(A_T) / S^N`` per attempt, so conditional on
acceptance the law is ``haf(A_T) / Z_C``.
"""
from __future__ import annotations

import logging

import numpy as np

from .._config import get_setting
from .._encoding import EdgeModel, build_edge_model
from .._errors import EmptySectorError, OddSectorError, RejectionLimitError
from .._graph import has_matching_sector
from .._rng import as_generator
from .._types import Graph, SamplerKind, Subset, as_subset
from ._base import Sampler
from ._table import exact_distribution

logger = logging.getLogger(__name__)

_MIN_BATCH = 256
_MAX_BATCH = 1 << 16


def _attempts(model: EdgeModel, pairs: int, size: int, rng: np.random.Generator,
              route_photons: bool) -> tuple[np.ndarray, np.ndarray]:
    """``size`` raw attempts: sorted modes ``(size, 2N)`` and an accept mask."""
    ends = model.endpoints[model.pick(rng.random((size, pairs)))]
    if route_photons:
        # each of the two photons of a circuit lands on i or j with probability 1/2
        side = rng.integers(0, 2, size=(size, pairs, 2))
        ends = np.take_along_axis(ends, side, axis=2)
    modes = np.sort(ends.reshape(size, 2 * pairs), axis=1)
    ok = np.all(np.diff(modes, axis=1) > 0, axis=1)
    return modes, ok


def qi_sample_many(model: EdgeModel, pairs: int, count: int, rng,
                   max_attempts: int | None = None,
                   route_photons: bool = False) -> tuple[np.ndarray, int]:
    """``count`` accepted outcomes and the number of attempts spent.

    The attempt budget is ``max_attempts`` per requested sample.
    """
    if pairs < 1:
        raise ValueError(f"pairs must be positive, got {pairs}")
    if 2 * pairs > model.n:
        raise EmptySectorError(f"cannot place {2 * pairs} distinct vertices in {model.n}")
    rng = as_generator(rng)
    budget = get_setting("max_attempts", max_attempts) * count
    accepted: list[np.ndarray] = []
    have = 0
    spent = 0
    while have < count:
        if spent >= budget:
            raise RejectionLimitError(spent, have, count)
        need = count - have
        size = int(min(max(_MIN_BATCH, 2 * need), _MAX_BATCH, budget - spent))
        modes, ok = _attempts(model, pairs, size, rng, route_photons)
        hits = np.flatnonzero(ok)
        if len(hits) >= need:
            accepted.append(modes[hits[:need]])
            spent += int(hits[need - 1]) + 1
            have = count
        else:
            accepted.append(modes[hits])
            spent += size
            have += len(hits)
    out = np.concatenate(accepted) if accepted else np.empty((0, 2 * pairs), dtype=np.int64)
    return out.astype(np.int64), spent


def qi_sample(model: EdgeModel, pairs: int, max_attempts: int | None, rng,
              route_photons: bool = False) -> Subset:
    """One collision-free ``2N``-subset with probability proportional to its hafnian."""
    rows, _ = qi_sample_many(model, pairs, 1, rng, max_attempts, route_photons)
    return Subset(rows[0])


def acceptance_rate(g: Graph, pairs: int, max_enum: int | None = None,
                    threads: int | None = None) -> float:
    """Exact per-attempt acceptance probability ``N! Z_C / S^N`` (photon routing off)."""
    if pairs < 1:
        raise ValueError(f"pairs must be positive, got {pairs}")
    model = build_edge_model(g)
    try:
        table = exact_distribution(g, 2 * pairs, SamplerKind.QI,
                                   max_enum=max_enum, threads=threads)
    except EmptySectorError:
        return 0.0
    # N! / S^N as a running product stays finite for large N
    scale = 1.0
    for t in range(1, pairs + 1):
        scale *= t / model.total_weight
    return float(table.Z * scale)


def estimate_hafnian(model: EdgeModel, s, draws: int, rng) -> float:
    """Unbiased estimate of ``haf(A_s)`` from ``draws`` raw (unrejected) attempts."""
    sub = as_subset(s, model.n)
    if len(sub) % 2:
        raise OddSectorError(f"hafnian estimate needs an even subset, got size {len(sub)}")
    if not sub:
        return 1.0
    if draws < 1:
        raise ValueError(f"draws must be positive, got {draws}")
    rng = as_generator(rng)
    pairs = len(sub) // 2
    target = np.asarray(sub, dtype=np.int64)
    hits = 0
    for start in range(0, draws, _MAX_BATCH):
        size = min(_MAX_BATCH, draws - start)
        modes, ok = _attempts(model, pairs, size, rng, route_photons=False)
        hits += int(np.count_nonzero(ok & np.all(modes == target, axis=1)))
    scale = 1.0
    for t in range(1, pairs + 1):
        scale *= model.total_weight / t
    logger.debug("hafnian estimate for %s: %d hits in %d draws", sub, hits, draws)
    return hits / draws * scale


class QISampler(Sampler):
    """Rejection sampler with law ``haf(A_T) / Z_C`` over ``k``-subsets."""

    kind = SamplerKind.QI

    def __init__(self, g: Graph, k: int, max_attempts: int | None = None,
                 route_photons: bool = False):
        if k % 2:
            raise OddSectorError(f"the qi sampler needs an even subset size, got {k}")
        if k < 2:
            raise ValueError(f"subset size must be at least 2, got {k}")
        if not has_matching_sector(g, k):
            raise EmptySectorError(f"no {k}-subset of {g!r} has a perfect matching")
        super().__init__(g, k)
        self.model = build_edge_model(g)
        self.max_attempts = get_setting("max_attempts", max_attempts)
        self.route_photons = route_photons

    def draw(self, rng) -> Subset:
        return qi_sample(self.model, self._k // 2, self.max_attempts, rng, self.route_photons)

    def draw_many(self, count: int, rng) -> np.ndarray:
        rows, spent = qi_sample_many(self.model, self._k // 2, count, rng,
                                     self.max_attempts, self.route_photons)
        if count:
            logger.debug("qi chunk: %d accepted in %d attempts", count, spent)
        return rows

    @property
    def expected_acceptance(self) -> float:
        """Exact acceptance rate, including the ``2^-N`` routing factor when enabled."""
        rate = acceptance_rate(self._graph, self._k // 2)
        return rate * 0.5 ** (self._k // 2) if self.route_photons else rate
