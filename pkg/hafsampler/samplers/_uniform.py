"""Uniform sampler over the k-subsets of the vertex set."""
from __future__ import annotations

import numpy as np

from .._errors import EmptySectorError
from .._rng import as_generator
from .._types import Graph, SamplerKind, Subset
from ._base import Sampler


def _check_size(n: int, k: int) -> None:
    if k < 1:
        raise ValueError(f"subset size must be positive, got {k}")
    if k > n:
        raise EmptySectorError(f"no {k}-subsets of {n} vertices")


def uniform_sample(n: int, k: int, rng) -> Subset:
    """One subset drawn uniformly from all ``C(n, k)``."""
    _check_size(n, k)
    rng = as_generator(rng)
    return Subset(rng.choice(n, size=k, replace=False))


class UniformSampler(Sampler):
    kind = SamplerKind.UNIFORM

    def __init__(self, g: Graph, k: int):
        _check_size(g.n, k)
        super().__init__(g, k)

    def draw(self, rng) -> Subset:
        return uniform_sample(self._graph.n, self._k, rng)

    def draw_many(self, count: int, rng) -> np.ndarray:
        # prefix of a uniform random permutation is a uniform k-subset
        keys = rng.random((count, self._graph.n))
        picks = np.argsort(keys, axis=1, kind="stable")[:, :self._k]
        return np.sort(picks, axis=1).astype(np.int64)
