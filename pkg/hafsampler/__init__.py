"""hafsampler: hafnian-proportional subgraph sampling and reference distributions.

Usage:
    import hafsampler as hs

    g = hs.erdos_renyi(8, 0.5, seed=3)

    # Quantum-inspired sampler: k-subsets with probability ~ haf(A_S)
    qi = hs.create_sampler("qi", g, k=4)
    rows = qi.sample(1000, 42)

    # Exact sector-normalized tables (haf^2 for gbs, haf for qi)
    gbs = hs.exact_distribution(g, 4, "gbs")
    qi_table = hs.pc_from_pq(gbs)

    # Experiments
    cfg = hs.DensestConfig(n=20, p=0.3, k=8, graphs=10, samples_per_graph=100,
                           samplers=("qi", "uniform"), seed=1)
    result = hs.densest_experiment(cfg)
"""
from __future__ import annotations

__version__ = "0.1.0"

from ._clique import (clique_local_search, clique_local_search_trace, expand_clique,
                      exhaustive_max_weight_clique, shrink_to_clique)
from ._encoding import (EdgeModel, SqueezeSpec, build_edge_model, build_H, calibrate_scale,
                        compensate_spec, diagonal_dominant_fix, loss_compensate, squeeze_spec,
                        takagi_singular_values)
from ._errors import (BudgetExceededError, CalibrationError, ConfigError, EmptySectorError,
                      GraphFormatError, GraphValidationError, HafsamplerError, OddSectorError,
                      RejectionLimitError, UsageError)
from ._experiments import (CliqueConfig, CliqueResult, DensestConfig, DensestResult,
                           clique_experiment, densest_experiment)
from ._graph import (apply_vertex_weights, clique_weight, density, erdos_renyi,
                     induced_subgraph, is_clique, max_matching_size, planted_clique)
from ._hafnian import HafnianCache, hafnian, hafnian_naive, hafnian_sub
from ._io import load_graph, load_weights, save_graph
from ._rng import derive_rng, derive_seed
from ._types import Graph, SamplerKind, Subset, VertexWeights
from .samplers import (SAMPLER_REGISTRY, DistributionTable, OccupancyVector,
                       ProbabilityRatioReport, acceptance_rate, create_sampler,
                       estimate_hafnian, exact_distribution, ips_occupancy_probability,
                       ips_sample, ips_sector_table, max_probability_ratios, pc_from_pq,
                       qi_sample, sample_from_table, uniform_sample)

__all__ = [
    "BudgetExceededError", "CalibrationError", "CliqueConfig", "CliqueResult", "ConfigError",
    "DensestConfig", "DensestResult", "DistributionTable", "EdgeModel", "EmptySectorError",
    "Graph", "GraphFormatError", "GraphValidationError", "HafnianCache", "HafsamplerError",
    "OccupancyVector", "OddSectorError", "ProbabilityRatioReport", "RejectionLimitError",
    "SAMPLER_REGISTRY", "SamplerKind", "SqueezeSpec", "Subset", "UsageError", "VertexWeights",
    "acceptance_rate", "apply_vertex_weights", "build_H", "build_edge_model",
    "calibrate_scale", "clique_experiment", "clique_local_search",
    "clique_local_search_trace", "clique_weight", "compensate_spec", "create_sampler",
    "densest_experiment", "density", "derive_rng", "derive_seed", "diagonal_dominant_fix",
    "erdos_renyi", "estimate_hafnian", "exact_distribution", "exhaustive_max_weight_clique",
    "expand_clique", "hafnian", "hafnian_naive", "hafnian_sub", "induced_subgraph",
    "ips_occupancy_probability", "ips_sample", "ips_sector_table", "is_clique",
    "load_graph", "load_weights", "loss_compensate", "max_matching_size",
    "max_probability_ratios", "pc_from_pq", "planted_clique", "qi_sample",
    "sample_from_table", "save_graph", "shrink_to_clique", "squeeze_spec",
    "takagi_singular_values", "uniform_sample",
]
