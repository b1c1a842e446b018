"""Tests for the clique heuristics, the exact clique oracle and both experiment harnesses.

Run:  python -m pytest tests/test_heuristics.py -v
"""
from __future__ import annotations

import itertools
import math
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from scipy.stats import fisher_exact

# Ensure hafsampler is importable
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from hafsampler._clique import (clique_local_search, clique_local_search_trace, expand_clique,
                                exhaustive_max_weight_clique, shrink_to_clique)
from hafsampler._errors import BudgetExceededError, GraphValidationError
from hafsampler._experiments import (ITERATION_UNIT, CliqueConfig, DensestConfig,
                                     clique_experiment, densest_experiment,
                                     planted_source, resolve_clique_instance, seed_size)
from hafsampler._graph import erdos_renyi, is_clique
from hafsampler._types import Graph, SamplerKind, VertexWeights


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph(np.ones((n, n)) - np.eye(n))


# triangle 0-1-2 with a pendant heavy vertex 3 on vertex 1
PENDANT = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (1, 3)])
PENDANT_W = VertexWeights([1.0, 1.0, 1.0, 5.0])


def brute_force_clique(g: Graph, w: VertexWeights) -> float:
    best = 0.0
    for size in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), size):
            if is_clique(g, s):
                best = max(best, float(np.sum(w.w[list(s)])))
    return best


def brute_force_lex_clique(g: Graph, w: VertexWeights) -> tuple[tuple[int, ...], float]:
    """Heaviest nonempty clique, ties to the smallest sorted vertex tuple."""
    cliques = [s for size in range(1, g.n + 1)
               for s in itertools.combinations(range(g.n), size) if is_clique(g, s)]
    top = max(float(np.sum(w.w[list(s)])) for s in cliques)
    best = min(s for s in cliques if float(np.sum(w.w[list(s)])) == top)
    return best, top


def small_densest(**overrides) -> DensestConfig:
    cfg = dict(n=8, p=0.5, k=4, graphs=4, samples_per_graph=30,
               samplers=("gbs", "qi", "uniform"), seed=5)
    cfg.update(overrides)
    return DensestConfig(**cfg)


# ---------------------------------------------------------------------------
# Shrink and expand
# ---------------------------------------------------------------------------

class TestShrink:
    def test_drops_lightest_on_tie(self):
        path = Graph.from_edges(3, [(0, 1), (1, 2)])
        w = VertexWeights([1.0, 5.0, 2.0])
        assert shrink_to_clique(path, w, [0, 1, 2], 0) == (1, 2)

    def test_drops_most_missing(self):
        # vertex 3 misses three edges inside {0, 1, 2, 3, 4}
        g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 4), (1, 4), (2, 4), (3, 4)])
        w = VertexWeights([1.0, 1.0, 1.0, 9.0, 1.0])
        assert shrink_to_clique(g, w, range(5), 0) == (0, 1, 2, 4)

    def test_clique_untouched(self):
        assert shrink_to_clique(complete(4), VertexWeights(np.ones(4)), [0, 2, 3], 1) == (0, 2, 3)

    def test_always_clique(self):
        rng = np.random.default_rng(4)
        for seed in range(30):
            g = erdos_renyi(12, 0.4, seed)
            w = VertexWeights(rng.random(12))
            s = rng.choice(12, size=6, replace=False)
            out = shrink_to_clique(g, w, s, rng)
            assert is_clique(g, out) and set(out) <= set(s.tolist())
            assert len(out) >= 1


class TestExpand:
    def test_heaviest_neighbour(self):
        assert expand_clique(PENDANT, PENDANT_W, [1], 0) == (1, 3)

    def test_fills_triangle(self):
        assert expand_clique(PENDANT, PENDANT_W, [0], 0) == (0, 1, 2)

    def test_maximal(self):
        rng = np.random.default_rng(9)
        for seed in range(30):
            g = erdos_renyi(12, 0.5, seed)
            w = VertexWeights(rng.random(12))
            out = expand_clique(g, w, [int(rng.integers(12))], rng)
            assert is_clique(g, out)
            outside = [v for v in range(12) if v not in out]
            assert not any(is_clique(g, [*out, v]) for v in outside)

    def test_requires_clique(self):
        with pytest.raises(GraphValidationError):
            expand_clique(PENDANT, PENDANT_W, [0, 3], 0)


class TestLocalSearch:
    def test_trace_length_and_monotone(self):
        g = erdos_renyi(15, 0.5, 2)
        w = VertexWeights(np.random.default_rng(2).random(15))
        trace = list(clique_local_search_trace(g, w, [0, 1, 2, 3, 4, 5], 12, 7))
        assert len(trace) == 13
        weights = [bw for _, bw in trace]
        assert weights == sorted(weights)
        for best, bw in trace:
            assert is_clique(g, best)
            assert bw == pytest.approx(float(np.sum(w.w[list(best)])))

    def test_matches_trace_end(self):
        g = erdos_renyi(15, 0.5, 2)
        w = VertexWeights(np.ones(15))
        last = list(clique_local_search_trace(g, w, [0, 1, 2, 3], 5, 3))[-1]
        assert clique_local_search(g, w, [0, 1, 2, 3], 5, 3) == last

    def test_complete_graph(self):
        best, weight = clique_local_search(complete(5), VertexWeights(np.ones(5)), [0, 3], 0, 1)
        assert best == (0, 1, 2, 3, 4) and weight == 5.0

    def test_negative_iterations(self):
        with pytest.raises(ValueError):
            clique_local_search(complete(3), VertexWeights(np.ones(3)), [0], -1, 0)


# ---------------------------------------------------------------------------
# Exact oracle
# ---------------------------------------------------------------------------

class TestExhaustiveClique:
    def test_brute_force(self):
        rng = np.random.default_rng(31)
        for seed in range(40):
            n = int(rng.integers(3, 11))
            g = erdos_renyi(n, float(rng.uniform(0.2, 0.8)), seed)
            w = VertexWeights(rng.random(n))
            best, weight = exhaustive_max_weight_clique(g, w)
            assert is_clique(g, best)
            assert weight == pytest.approx(brute_force_clique(g, w), rel=1e-12)

    def test_networkx_maximal_cliques(self):
        rng = np.random.default_rng(5)
        for seed in range(20):
            g = erdos_renyi(14, 0.5, 200 + seed)
            w = VertexWeights(rng.random(14))
            expected = max(float(np.sum(w.w[c])) for c in nx.find_cliques(g.to_networkx()))
            assert exhaustive_max_weight_clique(g, w)[1] == pytest.approx(expected, rel=1e-12)

    def test_unit_weights_is_clique_number(self):
        g = erdos_renyi(16, 0.5, 9)
        size = max(len(c) for c in nx.find_cliques(g.to_networkx()))
        assert exhaustive_max_weight_clique(g, VertexWeights(np.ones(16)))[1] == size

    def test_lexicographic_tie(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1)])
        assert exhaustive_max_weight_clique(g, VertexWeights(np.ones(4))) == ((0, 1), 2.0)

    def test_edgeless(self):
        w = VertexWeights([0.3, 0.9, 0.1])
        assert exhaustive_max_weight_clique(Graph(np.zeros((3, 3))), w) == ((1,), 0.9)

    @pytest.mark.parametrize("weights, expected", [
        ((1.0, 2.0), ((0, 1), 3.0)),
        ((1.0, 1.0), ((0, 1), 2.0)),
        ((5.0, 0.0), ((0,), 5.0)),
        ((0.0, 5.0), ((0, 1), 5.0)),
        ((0.0, 0.0), ((0,), 0.0)),
    ])
    def test_single_edge(self, weights, expected):
        g = Graph.from_edges(2, [(0, 1)])
        assert exhaustive_max_weight_clique(g, VertexWeights(weights)) == expected

    def test_zero_weight_vertex_joins_only_when_smaller(self):
        g = Graph.from_edges(3, [(0, 2), (1, 2)])
        assert exhaustive_max_weight_clique(g, VertexWeights([0.0, 0.0, 1.0])) == ((0, 2), 1.0)
        g = Graph.from_edges(3, [(0, 1)])
        assert exhaustive_max_weight_clique(g, VertexWeights([1.0, 0.0, 0.0])) == ((0,), 1.0)

    def test_lexicographic_over_all_cliques(self):
        rng = np.random.default_rng(17)
        for seed in range(40):
            n = int(rng.integers(2, 9))
            g = erdos_renyi(n, float(rng.uniform(0.2, 0.9)), 500 + seed)
            w = VertexWeights(rng.integers(0, 3, n).astype(float))
            assert exhaustive_max_weight_clique(g, w) == brute_force_lex_clique(g, w)


    def test_cap(self):
        with pytest.raises(BudgetExceededError):
            exhaustive_max_weight_clique(complete(31), VertexWeights(np.ones(31)))
        with pytest.raises(BudgetExceededError):
            exhaustive_max_weight_clique(complete(4), VertexWeights(np.ones(4)), cap=3)


# ---------------------------------------------------------------------------
# Densest k-subgraph harness
# ---------------------------------------------------------------------------

class TestDensestConfig:
    def test_odd_k(self):
        with pytest.raises(ValueError, match="odd"):
            small_densest(k=3)

    def test_uniform_odd_ok(self):
        assert small_densest(k=3, samplers=("uniform",)).k == 3

    def test_ips_rejected(self):
        with pytest.raises(ValueError):
            small_densest(samplers=("ips",))

    def test_dict_roundtrip(self):
        cfg = small_densest()
        assert DensestConfig.from_dict(cfg.to_dict()) == cfg


class TestDensestExperiment:
    def test_empty_graphs(self):
        result = densest_experiment(small_densest(p=0.0, graphs=3))
        for kind in (SamplerKind.GBS, SamplerKind.QI, SamplerKind.UNIFORM):
            assert result.stats[kind].mean == 0.0
            assert result.stats[kind].best == 0.0
        assert result.stats[SamplerKind.QI].fallback_graphs == 3
        assert result.stats[SamplerKind.GBS].fallback_graphs == 3
        assert result.stats[SamplerKind.UNIFORM].fallback_graphs == 0

    def test_complete_graphs(self):
        result = densest_experiment(small_densest(p=1.0))
        for st in result.stats.values():
            assert st.mean == 1.0 and st.std == 0.0
            assert st.count == 4 * 30

    def test_max_curve(self):
        st = densest_experiment(small_densest()).stats[SamplerKind.UNIFORM]
        assert len(st.max_curve) == 30
        assert np.all(np.diff(st.max_curve) >= 0)
        assert st.max_curve[-1] <= st.best

    def test_rows(self):
        rows = densest_experiment(small_densest(samplers=("uniform",))).rows()
        assert rows[0] == ("uniform", "mean_density", 120, rows[0][3])
        assert [r[1] for r in rows].count("max_density") == 30

    def test_deterministic(self):
        a = densest_experiment(small_densest())
        b = densest_experiment(small_densest())
        assert a.rows() == b.rows()

    def test_threads(self):
        a = densest_experiment(small_densest(), threads=1)
        b = densest_experiment(small_densest(), threads=2)
        assert a.rows() == b.rows()

    def test_budget_skip(self):
        result = densest_experiment(small_densest(n=20, k=8, max_enum=1000))
        assert result.skipped == (SamplerKind.GBS,)
        assert SamplerKind.GBS not in result.stats

    def test_budget_strict(self):
        with pytest.raises(BudgetExceededError):
            densest_experiment(small_densest(n=20, k=8, max_enum=1000, strict=True))

    @pytest.mark.slow
    def test_hafnian_samplers_find_denser_subgraphs(self):
        cfg = small_densest(n=20, p=0.3, k=8, graphs=100, samples_per_graph=100, seed=11)
        result = densest_experiment(cfg, threads=4)
        uniform = result.stats[SamplerKind.UNIFORM]
        for kind in (SamplerKind.GBS, SamplerKind.QI):
            st = result.stats[kind]
            gap = 3 * math.hypot(st.stderr, uniform.stderr)
            assert st.mean > uniform.mean + gap

    @pytest.mark.slow
    def test_complete_graphs_coincide_at_scale(self):
        result = densest_experiment(small_densest(n=20, p=1.0, k=8, graphs=3,
                                                  samples_per_graph=100))
        assert {st.mean for st in result.stats.values()} == {1.0}


# ---------------------------------------------------------------------------
# Clique search harness
# ---------------------------------------------------------------------------

class TestCliqueHelpers:
    def test_seed_size(self):
        assert seed_size(6, 30) == 6
        assert seed_size(5, 30) == 6
        assert seed_size(5, 5) == 4
        assert seed_size(1, 4) == 2

    def test_planted_instance(self):
        cfg = CliqueConfig(graph=planted_source(20, 0.2, 5), samples=1, iterations=(0,),
                           seed=3, samplers=("uniform",))
        g, w = resolve_clique_instance(cfg)
        assert g.n == 20
        top = np.argsort(-w.w)[:5]
        assert is_clique(g, top)
        g2, w2 = resolve_clique_instance(cfg)
        assert g2 == g and w2 == w

    def test_bad_planted(self):
        cfg = CliqueConfig(graph="planted:20,x", samples=1, iterations=(0,), seed=3,
                           samplers=("uniform",))
        with pytest.raises(GraphValidationError):
            resolve_clique_instance(cfg)

    def test_graph_file_unit_weights(self, tmp_path):
        path = tmp_path / "tri.edges"
        path.write_text("0 1\n1 2\n0 2\n")
        cfg = CliqueConfig(graph=str(path), samples=1, iterations=(0,), seed=0,
                           samplers=("uniform",))
        g, w = resolve_clique_instance(cfg)
        assert g == complete(3) and list(w.w) == [1.0, 1.0, 1.0]

    def test_config_roundtrip(self):
        cfg = CliqueConfig(graph="planted:20,0.2,5", samples=4, iterations=(0, 2),
                           seed=1, samplers=("qi", "uniform"), alpha=0.5)
        assert CliqueConfig.from_dict(cfg.to_dict()) == cfg

    def test_empty_iterations(self):
        with pytest.raises(ValueError):
            CliqueConfig(graph="x", samples=1, iterations=(), seed=0, samplers=("qi",))


class TestCliqueExperiment:
    def test_complete_graph(self):
        cfg = CliqueConfig(graph="k5", samples=10, iterations=(0, 5), seed=3,
                           samplers=("gbs", "qi", "uniform"))
        result = clique_experiment(cfg, complete(5), VertexWeights(np.ones(5)))
        assert result.optimum == ((0, 1, 2, 3, 4), 5.0)
        assert result.sample_size == 4
        for kind in result.successes:
            assert result.success_rate(kind, 0) == 1.0
            assert result.success_rate(kind, 5) == 1.0
            assert result.raw_hits[kind] == 0
        assert result.metadata()["iteration_unit"] == ITERATION_UNIT

    def test_rows(self):
        cfg = CliqueConfig(graph="k5", samples=4, iterations=(0, 2), seed=3,
                           samplers=("uniform",))
        rows = clique_experiment(cfg, complete(5), VertexWeights(np.ones(5))).rows()
        assert rows == [("uniform", 0, 4, 4, 1.0, 0), ("uniform", 2, 4, 4, 1.0, 0)]

    def test_supplied_optimum(self):
        cfg = CliqueConfig(graph="pendant", samples=20, iterations=(0,), seed=1,
                           samplers=("uniform",), k=2)
        result = clique_experiment(cfg, PENDANT, PENDANT_W, optimum=((1, 3), 6.0))
        assert result.optimum == ((1, 3), 6.0)
        assert result.sample_size == 2

    def test_deterministic_across_threads(self):
        cfg = CliqueConfig(graph=planted_source(20, 0.2, 5), samples=100,
                           iterations=(0, 3), seed=8, samplers=("qi", "uniform"))
        g, w = resolve_clique_instance(cfg)
        a = clique_experiment(cfg, g, w, threads=1)
        b = clique_experiment(cfg, g, w, threads=2)
        assert a.rows() == b.rows()

    @pytest.mark.slow
    def test_planted_instance(self):
        cfg = CliqueConfig(graph=planted_source(30, 0.2, 6), samples=500,
                           iterations=(0, 2, 8), seed=2024, samplers=("qi", "uniform"))
        g, w = resolve_clique_instance(cfg)
        result = clique_experiment(cfg, g, w)
        for kind in (SamplerKind.QI, SamplerKind.UNIFORM):
            rates = [result.success_rate(kind, t) for t in (0, 2, 8)]
            assert rates == sorted(rates)
        qi = result.successes[SamplerKind.QI][0]
        un = result.successes[SamplerKind.UNIFORM][0]
        # qi at least as good as uniform: no significant evidence of the reverse
        _, p = fisher_exact([[qi, 500 - qi], [un, 500 - un]], alternative="less")
        assert p > 0.05
