"""Constrained discovery of variable-length motif sets in time series."""

from .core import MotifSet, Segment, TimeSeries, coverage, is_coincident, search_space_digit_count
from .loco import LocoParams, compute_local_warping_paths, project_path
from .candidates import CandidateMotifSet, fitness, generate_candidate_motif_set
from .discovery import (DiscoveryConfig, DiscoveryResult, discover, filter_candidate_motif_set,
                        find_best_admissible_motif_set)
from .evaluation import GroundTruth, derive_benchmark_constraints, evaluate, match_motif
from .errors import ConfigError, DataError

__version__ = "0.1.0"

__all__ = [
    "MotifSet", "Segment", "TimeSeries", "coverage", "is_coincident", "search_space_digit_count",
    "LocoParams", "compute_local_warping_paths", "project_path",
    "CandidateMotifSet", "fitness", "generate_candidate_motif_set",
    "DiscoveryConfig", "DiscoveryResult", "discover", "filter_candidate_motif_set",
    "find_best_admissible_motif_set",
    "GroundTruth", "derive_benchmark_constraints", "evaluate", "match_motif",
    "ConfigError", "DataError",
]
