"""Sampler registry: maps SamplerKind to sampler class, plus factory function."""
from __future__ import annotations

from .._types import Graph, SamplerKind
from ._base import Sampler
from ._ips import (IPSSampler, OccupancyVector, ips_occupancy_probability, ips_sample,
                   ips_sector_table)
from ._qi import QISampler, acceptance_rate, estimate_hafnian, qi_sample, qi_sample_many
from ._table import (DistributionTable, GBSSampler, ProbabilityRatioReport, TableSampler,
                     enumeration_cost, exact_distribution, max_probability_ratios,
                     pc_from_pq, sample_from_table)
from ._uniform import UniformSampler, uniform_sample

SAMPLER_REGISTRY: dict[SamplerKind, type[Sampler]] = {
    SamplerKind.GBS: GBSSampler,
    SamplerKind.QI: QISampler,
    SamplerKind.UNIFORM: UniformSampler,
    SamplerKind.IPS: IPSSampler,
}


def create_sampler(kind: SamplerKind | str, g: Graph, k: int, **options) -> Sampler:
    """Create the sampler for ``kind`` over ``k``-outcomes of ``g``.

    ``options`` are passed to the sampler class (``max_attempts`` and
    ``route_photons`` for qi, ``max_enum`` and ``threads`` for gbs).
    """
    cls = SAMPLER_REGISTRY[SamplerKind.parse(kind)]
    return cls(g, k, **options)


__all__ = [
    "SAMPLER_REGISTRY", "DistributionTable", "GBSSampler", "IPSSampler", "OccupancyVector",
    "ProbabilityRatioReport", "QISampler", "Sampler", "TableSampler", "UniformSampler",
    "acceptance_rate", "create_sampler", "enumeration_cost", "estimate_hafnian",
    "exact_distribution", "ips_occupancy_probability", "ips_sample", "ips_sector_table",
    "max_probability_ratios", "pc_from_pq", "qi_sample", "qi_sample_many",
    "sample_from_table", "uniform_sample",
]
