"""Graph utilities: random graphs, density, cliques and vertex weighting."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from ._errors import GraphValidationError
from ._rng import as_generator, derive_rng, derive_seed
from ._types import Graph, Subset, VertexWeights, as_subset


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) random graph with unit weights, reproducible for a fixed seed.

    Each unordered pair ``i < j`` is drawn once, in row-major order, from the
    generator seeded by ``seed``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = as_generator(seed)
    iu, ju = np.triu_indices(n, 1)
    present = rng.random(len(iu)) < p
    adj = np.zeros((n, n))
    adj[iu[present], ju[present]] = 1.0
    adj[ju[present], iu[present]] = 1.0
    return Graph(adj)


def planted_clique(n: int, p_bg: float, size: int, seed: int
                   ) -> tuple[Graph, VertexWeights]:
    """Background G(n, p_bg) plus a clique on the ``size`` heaviest vertices.

    Weights are U(0, 1) from their own stream, so changing ``p_bg`` never
    changes the weights.
    """
    if not 1 <= size <= n:
        raise ValueError(f"planted clique size must lie in [1, {n}], got {size}")
    background = erdos_renyi(n, p_bg, derive_seed(seed, "background"))
    w = derive_rng(seed, "weights").random(n)
    top = np.sort(np.argsort(-w, kind="stable")[:size])
    adj = background.adj.copy()
    adj[np.ix_(top, top)] = 1.0
    np.fill_diagonal(adj, 0.0)
    return Graph(adj), VertexWeights(w)


def _sub(g: Graph, s: Iterable[int]) -> tuple[Subset, np.ndarray]:
    sub = as_subset(s, g.n)
    idx = np.asarray(sub, dtype=np.intp)
    return sub, g.adj[np.ix_(idx, idx)]


def density(g: Graph, s: Subset | Iterable[int]) -> float:
    """Fraction of the C(|s|, 2) pairs in ``s`` joined by a positive-weight edge."""
    sub, block = _sub(g, s)
    k = len(sub)
    if k < 2:
        raise GraphValidationError(f"density needs at least 2 vertices, got {k}")
    present = np.count_nonzero(np.triu(block, 1) > 0)
    return present / math.comb(k, 2)


def is_clique(g: Graph, s: Subset | Iterable[int]) -> bool:
    sub, block = _sub(g, s)
    k = len(sub)
    if k < 2:
        return True
    return int(np.count_nonzero(np.triu(block, 1) > 0)) == math.comb(k, 2)


def clique_weight(w: VertexWeights, s: Subset | Iterable[int]) -> float:
    sub = as_subset(s, len(w))
    if not sub:
        return 0.0
    return float(np.sum(w.w[np.asarray(sub, dtype=np.intp)]))


def apply_vertex_weights(g: Graph, w: VertexWeights, alpha: float = 1.0) -> Graph:
    """Return the weighted graph ``Omega A Omega`` with ``Omega_ii = 1 + alpha * w_i``.

    Off-diagonal entries become ``(1 + alpha w_i) A_ij (1 + alpha w_j)``; the
    diagonal stays zero.
    """
    w.check(g.n)
    if alpha < 0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a finite nonnegative number, got {alpha}")
    if alpha == 0:
        return g
    omega = 1.0 + alpha * w.w
    # (om_i * om_j) * A_ij keeps the product exactly symmetric
    return Graph(np.outer(omega, omega) * g.adj)


def induced_subgraph(g: Graph, s: Subset | Iterable[int]) -> Graph:
    sub, block = _sub(g, s)
    if not sub:
        raise GraphValidationError("induced subgraph of an empty subset")
    return Graph(block)


def max_matching_size(g: Graph) -> int:
    """Size of a maximum-cardinality matching on the positive-weight edges."""
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from((i, j) for i, j, _ in g.edges())
    return len(nx.max_weight_matching(G, maxcardinality=True))


def has_matching_sector(g: Graph, k: int) -> bool:
    """True when some ``k``-subset admits a perfect matching (``k`` even)."""
    if k % 2:
        return False
    if k == 0:
        return True
    if k > g.n:
        return False
    return max_matching_size(g) >= k // 2
