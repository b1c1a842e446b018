"""Clique heuristics (shrink, expand, perturb) and an exact branch-and-bound oracle."""
from __future__ import annotations

import logging
import math
from typing import Iterable, Iterator

import numpy as np

from ._config import get_setting
from ._errors import BudgetExceededError, GraphValidationError
from ._graph import clique_weight, is_clique
from ._rng import as_generator
from ._types import Graph, Subset, VertexWeights, as_subset

logger = logging.getLogger(__name__)


def _pick(candidates: np.ndarray, rng: np.random.Generator) -> int:
    if len(candidates) == 1:
        return int(candidates[0])
    return int(candidates[rng.integers(len(candidates))])


def shrink_to_clique(g: Graph, w: VertexWeights, s: Subset | Iterable[int], rng) -> Subset:
    """Drop vertices until ``s`` is a clique.

    Each step removes a vertex with the most missing edges inside the current
    set; ties go to the lowest weight, then to a uniform random choice.
    """
    w.check(g.n)
    current = np.asarray(as_subset(s, g.n), dtype=np.intp)
    rng = as_generator(rng)
    while len(current) > 1:
        linked = g.adj[np.ix_(current, current)] > 0
        missing = (len(current) - 1) - linked.sum(axis=1)
        worst = missing.max()
        if worst == 0:
            break
        cand = np.flatnonzero(missing == worst)
        cw = w.w[current[cand]]
        cand = cand[cw == cw.min()]
        current = np.delete(current, _pick(cand, rng))
    return Subset(current)


def expand_clique(g: Graph, w: VertexWeights, c: Subset | Iterable[int], rng) -> Subset:
    """Greedily add the heaviest common neighbour (ties at random) until maximal."""
    w.check(g.n)
    clique = as_subset(c, g.n)
    if not is_clique(g, clique):
        raise GraphValidationError(f"{clique} is not a clique")
    rng = as_generator(rng)
    members = list(clique)
    common = np.ones(g.n, dtype=bool)
    common[members] = False
    for v in members:
        common &= g.adj[v] > 0
    while np.any(common):
        cand = np.flatnonzero(common)
        cw = w.w[cand]
        v = _pick(cand[cw == cw.max()], rng)
        members.append(v)
        common &= g.adj[v] > 0
        common[v] = False
    return Subset(members)


def clique_local_search_trace(g: Graph, w: VertexWeights, s: Subset | Iterable[int],
                              iterations: int, rng) -> Iterator[tuple[Subset, float]]:
    """Best ``(clique, weight)`` after the initial shrink/expand and after each iteration.

    One iteration removes a uniformly random vertex from the current clique
    (when it has more than one) and expands again. Yields ``iterations + 1``
    values; the best weight never decreases.
    """
    if iterations < 0:
        raise ValueError(f"iterations must be nonnegative, got {iterations}")
    rng = as_generator(rng)
    current = expand_clique(g, w, shrink_to_clique(g, w, s, rng), rng)
    best, best_w = current, clique_weight(w, current)
    yield best, best_w
    for _ in range(iterations):
        if len(current) > 1:
            drop = int(rng.integers(len(current)))
            current = Subset(v for i, v in enumerate(current) if i != drop)
        current = expand_clique(g, w, current, rng)
        weight = clique_weight(w, current)
        if weight > best_w:
            best, best_w = current, weight
        yield best, best_w


def clique_local_search(g: Graph, w: VertexWeights, s: Subset | Iterable[int],
                        iterations: int, rng) -> tuple[Subset, float]:
    result = None
    for result in clique_local_search_trace(g, w, s, iterations, rng):
        pass
    return result


def _tol(x: float) -> float:
    return 1e-12 * max(1.0, abs(x))


def exhaustive_max_weight_clique(g: Graph, w: VertexWeights,
                                 cap: int | None = None) -> tuple[Subset, float]:
    """Exact maximum-weight clique by Bron-Kerbosch with pivoting and a weight bound.

    Ties are broken over all nonempty cliques, maximal or not, by the
    lexicographic order of their sorted vertex tuples. A zero-weight vertex
    therefore joins the result only when it makes the tuple smaller.
    """
    w.check(g.n)
    cap = get_setting("clique_cap", cap)
    if g.n > cap:
        raise BudgetExceededError(
            f"exhaustive clique search is limited to n <= {cap}, got n={g.n}")
    n = g.n
    weights = w.w.tolist()
    nbrs = [0] * n
    for i, j, _ in g.edges():
        nbrs[i] |= 1 << j
        nbrs[j] |= 1 << i

    def bits(mask: int) -> Iterator[int]:
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def mask_weight(mask: int) -> float:
        return math.fsum(weights[v] for v in bits(mask))

    def heaviest(mask: int) -> float:
        """Weight of the heaviest clique inside ``mask``; 0.0 when ``mask`` is empty."""
        best = 0.0

        def search(r_weight: float, p: int, x: int) -> None:
            nonlocal best
            if not p:
                best = max(best, r_weight)
                return
            if r_weight + mask_weight(p) <= best:
                return
            pivot = max(bits(p | x), key=lambda u: (nbrs[u] & p).bit_count())
            for v in list(bits(p & ~nbrs[pivot])):
                bit = 1 << v
                search(r_weight + weights[v], p & nbrs[v], x & nbrs[v])
                p &= ~bit
                x |= bit

        search(0.0, mask, 0)
        return best

    optimum = heaviest((1 << n) - 1)
    floor = optimum - _tol(optimum)

    # Lexicographically smallest optimal clique: stop as soon as the prefix is
    # optimal, otherwise extend it by the smallest vertex that can still reach
    # the optimum using only larger common neighbours.
    members: list[int] = []
    members_w = 0.0
    cand = (1 << n) - 1
    while not members or members_w < floor:
        for v in bits(cand):
            later = cand & nbrs[v] & ~((1 << (v + 1)) - 1)
            if members_w + weights[v] + heaviest(later) >= floor:
                members.append(v)
                members_w += weights[v]
                cand = later
                break
        else:  # pragma: no cover - unreachable while heaviest() is exact
            raise RuntimeError("no clique reaches the computed optimum")
    best = Subset(members)
    weight = clique_weight(w, best)
    logger.debug("max-weight clique %s with weight %g", best, weight)
    return best, weight
