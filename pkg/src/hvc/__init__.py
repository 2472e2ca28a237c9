"""Exact and approximate hypervolume contributions of solution sets."""

from .contribution import (
    R2HvcParams,
    monte_carlo_hvc,
    r2_contribution,
    r2_hvc,
    segment_length,
    segment_length_via_augmented_points,
)
from .core import (
    DirectionSet,
    HvcEstimate,
    Method,
    Orientation,
    SolutionSet,
    dominates,
    validate_set,
)
from .exact import hv_exact, hv_inclusion_exclusion, hvc_exact, smallest_contributor
from .generate import (
    PfShape,
    make_benchmark_suite,
    reference_point,
    sample_directions,
    sample_front,
)
from .indicators import per_direction_best_two, r2_2tch, r2_hv, r2_mtch
from .metrics import aggregate_runs, consistency_rate, correct_identification, identification_rate
from .scalarize import g_2tch, g_mtch, g_star_2tch

__version__ = "0.1.0"
