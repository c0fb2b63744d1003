"""Randomized tree decompositions of planar graphs that keep a hidden pattern sparse in every bag."""

from .config import RunConfig
from .decomposer import DecompositionResult, RunFailure, baker_decompose, decompose_bounded_diameter, glue
from .distance import dual_distance, reweighted_chain, shortcut_paths
from .estimator import PatternSparseDecomposer
from .flow import dual1_outcome, pq_structure, verify_pq_structure
from .generators import cylinder, generate, grid, path, random_maximal_planar
from .graph import (
    ClusterFamily,
    Graph,
    InputError,
    Separation,
    TreeDecomposition,
    bag_pattern_stats,
    validate_tree_decomposition,
)
from .improve import ImproveConfig, ImproveTuple, improve_enumerate, improve_sample
from .oracles import SuccessReport, exact_treewidth, find_minor_model, monte_carlo_success
from .planar import balanced_node_for_weight, candidate_separations, three_path_decomposition

__all__ = [
    "ClusterFamily",
    "DecompositionResult",
    "Graph",
    "ImproveConfig",
    "ImproveTuple",
    "InputError",
    "PatternSparseDecomposer",
    "RunConfig",
    "RunFailure",
    "Separation",
    "SuccessReport",
    "TreeDecomposition",
    "bag_pattern_stats",
    "baker_decompose",
    "balanced_node_for_weight",
    "candidate_separations",
    "cylinder",
    "decompose_bounded_diameter",
    "dual1_outcome",
    "dual_distance",
    "exact_treewidth",
    "find_minor_model",
    "generate",
    "glue",
    "grid",
    "improve_enumerate",
    "improve_sample",
    "monte_carlo_success",
    "path",
    "pq_structure",
    "random_maximal_planar",
    "reweighted_chain",
    "shortcut_paths",
    "three_path_decomposition",
    "validate_tree_decomposition",
    "verify_pq_structure",
]
