"""Experiment harnesses: densest-k-subgraph statistics and clique search success rates.

Both harnesses derive every random stream from ``cfg.seed`` by name (graph
index, sampler, run index) and split work into fixed cells, so results are
identical for any worker count.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._clique import clique_local_search_trace, exhaustive_max_weight_clique
from ._config import get_setting
from ._errors import BudgetExceededError, EmptySectorError, GraphValidationError
from ._graph import apply_vertex_weights, erdos_renyi, planted_clique
from ._io import load_graph, load_weights
from ._parallel import ordered_map
from ._rng import derive_rng, derive_seed
from ._types import Graph, SamplerKind, Subset, VertexWeights
from .samplers import UniformSampler, create_sampler, enumeration_cost
from .samplers._base import Sampler

logger = logging.getLogger(__name__)

ITERATION_UNIT = "perturb-expand"
PLANTED_PREFIX = "planted:"
_EXPERIMENT_KINDS = (SamplerKind.GBS, SamplerKind.QI, SamplerKind.UNIFORM)
# clique search runs per worker task
_RUN_BLOCK = 64


def _parse_kinds(samplers) -> tuple[SamplerKind, ...]:
    kinds = tuple(dict.fromkeys(SamplerKind.parse(s) for s in samplers))
    if not kinds:
        raise ValueError("at least one sampler is required")
    for kind in kinds:
        if kind not in _EXPERIMENT_KINDS:
            raise ValueError(f"sampler {kind.value!r} does not produce vertex subsets")
    return kinds


def _plan_kinds(kinds: tuple[SamplerKind, ...], n: int, k: int, max_enum: int,
                strict: bool) -> tuple[tuple[SamplerKind, ...], tuple[SamplerKind, ...]]:
    """Split ``kinds`` into (run, skipped) according to the gbs enumeration budget."""
    if SamplerKind.GBS not in kinds:
        return kinds, ()
    cost = enumeration_cost(n, k)
    if cost <= max_enum:
        return kinds, ()
    message = (f"gbs table for n={n}, k={k} needs {cost:.3g} hafnian products "
               f"(budget {max_enum:.3g})")
    if strict:
        raise BudgetExceededError(message)
    logger.warning("%s; skipping the gbs sampler", message)
    return tuple(kd for kd in kinds if kd is not SamplerKind.GBS), (SamplerKind.GBS,)


def _sampler_or_uniform(kind: SamplerKind, g: Graph, k: int,
                        max_enum: int) -> tuple[Sampler, bool]:
    options: dict[str, Any] = {}
    if kind is SamplerKind.GBS:
        options = {"max_enum": max_enum, "threads": 1}
    try:
        return create_sampler(kind, g, k, **options), False
    except EmptySectorError as exc:
        if kind is SamplerKind.UNIFORM:
            raise
        logger.warning("%s sampler: %s; falling back to uniform", kind.value, exc)
        return UniformSampler(g, k), True


def _densities(g: Graph, rows: np.ndarray) -> np.ndarray:
    """Density of every row of a ``(count, k)`` subset array."""
    k = rows.shape[1]
    linked = g.adj[rows[:, :, None], rows[:, None, :]] > 0
    edges = np.count_nonzero(linked, axis=(1, 2)) // 2
    return edges / math.comb(k, 2)


# ---------------------------------------------------------------------------
# Densest k-subgraph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensestConfig:
    """Erdős–Rényi densest-k experiment grid."""

    n: int
    p: float
    k: int
    graphs: int
    samples_per_graph: int
    samplers: tuple[SamplerKind, ...]
    seed: int
    max_enum: int = field(default_factory=lambda: get_setting("max_enum"))
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "samplers", _parse_kinds(self.samplers))
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.graphs < 1 or self.samples_per_graph < 1:
            raise ValueError("graph and sample counts must be at least 1")
        if not 2 <= self.k <= self.n:
            raise ValueError(f"k must lie in [2, n={self.n}], got {self.k}")
        if self.k % 2 and any(kd.needs_even_k for kd in self.samplers):
            raise ValueError(f"k={self.k} is odd; gbs and qi need an even k")

    def to_dict(self) -> dict:
        return {
            "n": self.n, "p": self.p, "k": self.k, "graphs": self.graphs,
            "samples_per_graph": self.samples_per_graph,
            "samplers": [kd.value for kd in self.samplers],
            "seed": self.seed, "max_enum": self.max_enum, "strict": self.strict,
        }

    @classmethod
    def from_dict(cls, data: dict) -> DensestConfig:
        return cls(**{**data, "samplers": tuple(data["samplers"])})


@dataclass(frozen=True, eq=False)
class DensityStats:
    mean: float
    std: float
    stderr: float
    count: int
    best: float
    max_curve: np.ndarray  # mean over graphs of the running max, m = 1..S
    fallback_graphs: int


@dataclass(frozen=True)
class DensestResult:
    config: DensestConfig
    stats: dict[SamplerKind, DensityStats]
    skipped: tuple[SamplerKind, ...] = ()

    COLUMNS = ["sampler", "metric", "num_samples", "value"]

    def rows(self) -> list[tuple]:
        out = []
        for kind, st in self.stats.items():
            out += [
                (kind.value, "mean_density", st.count, st.mean),
                (kind.value, "std", st.count, st.std),
                (kind.value, "stderr", st.count, st.stderr),
                (kind.value, "best_density", st.count, st.best),
                (kind.value, "fallback_graphs", st.count, st.fallback_graphs),
            ]
            out += [(kind.value, "max_density", m, float(v))
                    for m, v in enumerate(st.max_curve, start=1)]
        return out


def _densest_cell(task: tuple[DensestConfig, tuple[SamplerKind, ...], int]) -> dict:
    cfg, kinds, index = task
    g = erdos_renyi(cfg.n, cfg.p, derive_seed(cfg.seed, "graph", index))
    out = {}
    for kind in kinds:
        sampler, fell_back = _sampler_or_uniform(kind, g, cfg.k, cfg.max_enum)
        rows = sampler.sample(cfg.samples_per_graph,
                              derive_seed(cfg.seed, "samples", kind.value, index), threads=1)
        out[kind] = (_densities(g, rows), fell_back)
    return out


def densest_experiment(cfg: DensestConfig, threads: int | None = None) -> DensestResult:
    """Density statistics of sampled ``k``-subsets over ``cfg.graphs`` random graphs."""
    kinds, skipped = _plan_kinds(cfg.samplers, cfg.n, cfg.k, cfg.max_enum, cfg.strict)
    logger.info("densest: %d graphs x %d samples, samplers %s",
                cfg.graphs, cfg.samples_per_graph, ",".join(kd.value for kd in kinds))
    cells = ordered_map(_densest_cell, [(cfg, kinds, i) for i in range(cfg.graphs)],
                        get_setting("threads", threads))
    stats = {}
    for kind in kinds:
        dens = np.stack([cell[kind][0] for cell in cells])
        fallbacks = sum(cell[kind][1] for cell in cells)
        flat = dens.ravel()
        std = float(np.std(flat, ddof=1)) if flat.size > 1 else 0.0
        stats[kind] = DensityStats(
            mean=float(np.mean(flat)),
            std=std,
            stderr=std / math.sqrt(flat.size),
            count=int(flat.size),
            best=float(np.max(flat)),
            max_curve=np.mean(np.maximum.accumulate(dens, axis=1), axis=0),
            fallback_graphs=int(fallbacks),
        )
        logger.info("densest %s: mean density %.4f (stderr %.4f)",
                    kind.value, stats[kind].mean, stats[kind].stderr)
    return DensestResult(config=cfg, stats=stats, skipped=skipped)


# ---------------------------------------------------------------------------
# Maximum-weight clique
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CliqueConfig:
    """Clique search experiment.

    ``graph`` is a graph file path or ``planted:n,p,size``; ``weights`` is a
    weight file path (ignored for planted instances, all ones when absent).
    """

    graph: str
    samples: int
    iterations: tuple[int, ...]
    seed: int
    samplers: tuple[SamplerKind, ...]
    weights: str | None = None
    alpha: float = 1.0
    k: int | None = None
    max_enum: int = field(default_factory=lambda: get_setting("max_enum"))
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "samplers", _parse_kinds(self.samplers))
        object.__setattr__(self, "iterations", tuple(int(t) for t in self.iterations))
        if not self.iterations or min(self.iterations) < 0:
            raise ValueError("iteration counts must be nonnegative and nonempty")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")

    def to_dict(self) -> dict:
        return {
            "graph": self.graph, "weights": self.weights, "alpha": self.alpha,
            "samples": self.samples, "iterations": list(self.iterations),
            "seed": self.seed, "samplers": [kd.value for kd in self.samplers],
            "k": self.k, "max_enum": self.max_enum, "strict": self.strict,
        }

    @classmethod
    def from_dict(cls, data: dict) -> CliqueConfig:
        return cls(**{**data, "samplers": tuple(data["samplers"]),
                      "iterations": tuple(data["iterations"])})


def planted_source(n: int, p: float, size: int) -> str:
    return f"{PLANTED_PREFIX}{n},{p!r},{size}"


def resolve_clique_instance(cfg: CliqueConfig) -> tuple[Graph, VertexWeights]:
    """Load or generate the graph and vertex weights named by ``cfg``."""
    if cfg.graph.startswith(PLANTED_PREFIX):
        try:
            n, p, size = cfg.graph[len(PLANTED_PREFIX):].split(",")
            return planted_clique(int(n), float(p), int(size), derive_seed(cfg.seed, "planted"))
        except ValueError as exc:
            raise GraphValidationError(f"bad planted instance {cfg.graph!r}: {exc}") from None
    g = load_graph(cfg.graph)
    if cfg.weights is None:
        return g, VertexWeights(np.ones(g.n))
    return g, load_weights(cfg.weights, g.n)


def seed_size(clique_size: int, n: int) -> int:
    """Even sample size nearest the optimum clique size, within ``[2, n]``."""
    if clique_size % 2 == 0 and clique_size >= 2:
        return clique_size
    if clique_size + 1 <= n:
        return clique_size + 1
    return max(2, clique_size - 1)


@dataclass(frozen=True)
class CliqueResult:
    config: CliqueConfig
    optimum: tuple[Subset, float]
    sample_size: int
    # per sampler: successes per requested T, raw optimum hits, fell back to uniform
    successes: dict[SamplerKind, tuple[int, ...]]
    raw_hits: dict[SamplerKind, int]
    fallback: dict[SamplerKind, bool]
    skipped: tuple[SamplerKind, ...] = ()

    COLUMNS = ["sampler", "iterations", "runs", "successes", "success_rate", "raw_hits"]

    def success_rate(self, kind: SamplerKind | str, iterations: int) -> float:
        kind = SamplerKind.parse(kind)
        col = self.config.iterations.index(iterations)
        return self.successes[kind][col] / self.config.samples

    def rows(self) -> list[tuple]:
        runs = self.config.samples
        return [(kind.value, t, runs, hits, hits / runs, self.raw_hits[kind])
                for kind, counts in self.successes.items()
                for t, hits in zip(self.config.iterations, counts)]

    def metadata(self) -> dict[str, str]:
        opt, weight = self.optimum
        return {
            "iteration_unit": ITERATION_UNIT,
            "optimum": f"{opt.to_string()} weight={weight!r}",
            "sample_size": str(self.sample_size),
        }


def _clique_block(task: tuple) -> np.ndarray:
    g, w, seeds, iterations, seed, kind, offset = task
    horizon = max(iterations)
    out = np.empty((len(seeds), len(iterations)))
    for r, row in enumerate(seeds):
        rng = derive_rng(seed, "search", kind, offset + r)
        trace = [best_w for _, best_w in
                 clique_local_search_trace(g, w, row.tolist(), horizon, rng)]
        out[r] = [trace[t] for t in iterations]
    return out


def clique_experiment(cfg: CliqueConfig, g: Graph, w: VertexWeights,
                      optimum: tuple[Subset, float] | None = None,
                      threads: int | None = None) -> CliqueResult:
    """Success rate of sampler-seeded local search at each iteration budget.

    qi and gbs sample from ``Omega A Omega`` (``Omega = 1 + alpha w``); the
    search itself always runs on ``g`` with weights ``w``.
    """
    w.check(g.n)
    threads = get_setting("threads", threads)
    if optimum is None:
        try:
            optimum = exhaustive_max_weight_clique(g, w)
        except BudgetExceededError as exc:
            raise BudgetExceededError(f"optimum not supplied and {exc}") from exc
    opt_set, opt_w = Subset(optimum[0]), float(optimum[1])
    k = cfg.k or seed_size(len(opt_set), g.n)
    kinds, skipped = _plan_kinds(cfg.samplers, g.n, k, cfg.max_enum, cfg.strict)
    weighted = apply_vertex_weights(g, w, cfg.alpha)
    target = np.asarray(opt_set, dtype=np.int64)
    successes, raw_hits, fallback = {}, {}, {}
    for kind in kinds:
        source = g if kind is SamplerKind.UNIFORM else weighted
        sampler, fallback[kind] = _sampler_or_uniform(kind, source, k, cfg.max_enum)
        seeds = sampler.sample(cfg.samples, derive_seed(cfg.seed, "seeds", kind.value),
                               threads=threads)
        raw_hits[kind] = (int(np.count_nonzero(np.all(seeds == target, axis=1)))
                          if seeds.shape[1] == len(target) else 0)
        tasks = [(g, w, seeds[start:start + _RUN_BLOCK], cfg.iterations, cfg.seed,
                  kind.value, start) for start in range(0, cfg.samples, _RUN_BLOCK)]
        best = np.concatenate(ordered_map(_clique_block, tasks, threads))
        hit = np.isclose(best, opt_w, rtol=1e-9, atol=1e-12)
        successes[kind] = tuple(int(c) for c in np.count_nonzero(hit, axis=0))
        logger.info("clique %s: success %s of %d runs, %d raw hits",
                    kind.value, successes[kind], cfg.samples, raw_hits[kind])
    return CliqueResult(config=cfg, optimum=(opt_set, opt_w), sample_size=k,
                        successes=successes, raw_hits=raw_hits, fallback=fallback,
                        skipped=skipped)
