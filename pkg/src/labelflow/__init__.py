"""Community detection by capacity-controlled label propagation.

Core pieces: an immutable CSR graph (:mod:`labelflow.graph`), the
propagation engine with classic, strength-weighted and capacity-controlled
variants (:mod:`labelflow.propagation`), partition quality metrics
(:mod:`labelflow.metrics`), pre-run flood-fill diagnostics
(:mod:`labelflow.diagnostics`), and a planted-partition benchmark generator
with a sweep harness (:mod:`labelflow.benchgen`).
"""

__version__ = "0.1.0"

from .benchgen import (BenchmarkSpec, GenerationError, PlantedGraph, SweepResult,
                       SweepRow, generate, sweep)
from .diagnostics import (AttractionProfile, FloodFillReport, attraction_power,
                          flood_fill_report)
from .graph import EdgeListError, Graph, load_edge_list, write_edge_list
from .metrics import (CommunityReport, MetricsError, community_report,
                      dissatisfied_count, load_ground_truth, lpa_objective,
                      modularity, nmi, strong_weak_flags)
from .propagation import (ConfigError, Labeling, PropagationConfig, RunTrace,
                          anneal_probability, capacity, run,
                          update_label_classic, update_label_clpa,
                          update_label_leung)

__all__ = [
    "AttractionProfile",
    "BenchmarkSpec",
    "CommunityReport",
    "ConfigError",
    "EdgeListError",
    "FloodFillReport",
    "GenerationError",
    "Graph",
    "Labeling",
    "MetricsError",
    "PlantedGraph",
    "PropagationConfig",
    "RunTrace",
    "SweepResult",
    "SweepRow",
    "anneal_probability",
    "attraction_power",
    "capacity",
    "community_report",
    "dissatisfied_count",
    "flood_fill_report",
    "generate",
    "load_edge_list",
    "load_ground_truth",
    "lpa_objective",
    "modularity",
    "nmi",
    "run",
    "strong_weak_flags",
    "sweep",
    "update_label_classic",
    "update_label_clpa",
    "update_label_leung",
    "write_edge_list",
]
