"""Base class for the subset samplers."""
from __future__ import annotations

import abc
import logging

import numpy as np

from .._config import get_setting
from .._parallel import ordered_map
from .._rng import derive_rng, root_seed
from .._types import Graph, SamplerKind, Subset

logger = logging.getLogger(__name__)


def _run_chunk(task: tuple[Sampler, int, int, int]) -> np.ndarray:
    sampler, root, index, size = task
    return sampler.draw_many(size, derive_rng(root, "chunk", index))


class Sampler(abc.ABC):
    """Abstract base for a sampler over fixed-size outcomes of one graph.

    Subclasses implement :meth:`draw`; :meth:`sample` splits a request into
    fixed-size chunks, each driven by its own derived stream, so the result
    is the same for any worker count.
    """

    kind: SamplerKind

    def __init__(self, g: Graph, k: int):
        self._graph = g
        self._k = int(k)

    @property
    def graph(self) -> Graph:
        return self._graph

    @property
    def k(self) -> int:
        return self._k

    @property
    def width(self) -> int:
        """Number of columns in :meth:`sample` output."""
        return self._k

    @abc.abstractmethod
    def draw(self, rng: np.random.Generator) -> Subset:
        """Draw one outcome."""

    def draw_many(self, count: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty((count, self.width), dtype=np.int64)
        for row in range(count):
            out[row] = self.draw(rng)
        return out

    def sample(self, count: int, rng, threads: int | None = None,
               chunk_size: int | None = None) -> np.ndarray:
        """``count`` outcomes as an integer array of shape ``(count, width)``."""
        if count < 0:
            raise ValueError(f"count must be nonnegative, got {count}")
        root = root_seed(rng)
        size = get_setting("chunk_size", chunk_size)
        tasks = [(self, root, index, min(size, count - start))
                 for index, start in enumerate(range(0, count, size))]
        if not tasks:
            return np.empty((0, self.width), dtype=np.int64)
        logger.debug("%s: %d samples in %d chunks", self.kind.value, count, len(tasks))
        parts = ordered_map(_run_chunk, tasks, get_setting("threads", threads))
        return np.concatenate(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self._graph.n}, k={self._k})"
