"""Random geometric hypergraphs through their bipartite node-centre graphs."""
from rghyper._backend import BACKEND
from rghyper.geometry import Box, PointSample, derive_seed, measure, sample, trial_samples
from rghyper.hypergraph import (BipartiteGeometricGraph, Hypergraph, build_bipartite,
                                component_count, is_connected, to_hypergraph)
from rghyper.spatial_index import UniformGrid, brute_force_within, neighbors_within, pairs_within
from rghyper.theory import (CoverageGrid, TheoryParams, build_coverage_grid, coverage_holds,
                            coverage_probability, radius_strong, radius_weak)
from rghyper.threshold import (CriticalRadiusResult, critical_radius_bisection,
                               critical_radius_exact, is_connected_at)
from rghyper.experiments import SweepConfig, SweepResult, run_sweep, theorem_validation

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Box", "PointSample", "derive_seed", "measure", "sample", "trial_samples",
    "BipartiteGeometricGraph", "Hypergraph", "build_bipartite", "component_count",
    "is_connected", "to_hypergraph", "UniformGrid", "brute_force_within", "neighbors_within",
    "pairs_within", "CoverageGrid", "TheoryParams", "build_coverage_grid", "coverage_holds",
    "coverage_probability", "radius_strong", "radius_weak", "CriticalRadiusResult",
    "critical_radius_bisection", "critical_radius_exact", "is_connected_at", "SweepConfig",
    "SweepResult", "run_sweep", "theorem_validation",
]
