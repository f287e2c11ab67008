"""Capacity toolkit for Gaussian 1-2-1 relay networks.

Models networks where every node owns one steerable transmit beam and
one steerable receive beam, so information flows only over links whose
endpoints point at each other.  The package computes the scheduling
capacity of the ideal and imperfect-beamforming models, a practical
schedule-then-nullify rate, and certified additive gaps between them.
"""

from .bounds import (
    AssumptionReport,
    DegenerateInstanceError,
    DominanceViolatedError,
    GapReport,
    RatioCondition,
    TheoremViolationError,
    analytic_dominance_bound,
    check_assumptions,
    constant_gap_condition,
    dominance_penalty,
    ideal_gap_bound,
    tsn_gap_bound,
    verify_instance,
)
from .capacity import (
    CapacityResult,
    LinkRates,
    UndefinedLinkError,
    capacity_ideal,
    capacity_imperfect,
    imperfect_value_table,
    linear_value_table,
    link_rate_ideal,
    link_rate_leakage,
    link_rate_tsn,
    link_rates,
    rate_tsn,
)
from .enumeration import (
    CAP_ENV_VAR,
    EnumerationCapError,
    EnumerationCaps,
    StateSpace,
    build_state_space,
    default_caps,
    enumerate_alignment_patterns,
    enumerate_cuts,
    enumerate_raw_states,
    pattern_of_state,
)
from .instancegen import GenSpec, friis_amplitude, generate, platooning_instance
from .matrices import (
    CutStateMatrix,
    cut_dominance_ratio,
    cut_state_matrix,
    cut_submatrix,
    dominance_ratio,
    gram_matrix,
    hadamard_upper_bound,
    log_det_capacity,
    ostrowski_lower_bound,
)
from .model import (
    EMPTY_PATTERN,
    AlignmentPattern,
    Cut,
    InvalidPatternError,
    NetworkInstance,
    NodeState,
    ValidationReport,
    effective_channel,
    max_degree,
    validate_instance,
    validate_pattern,
)
from .optimize import (
    EdgeFractions,
    MaxMinProblem,
    Schedule,
    SolverError,
    decompose_edge_fractions,
    solve_edge_lp,
    solve_maxmin,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentPattern",
    "AssumptionReport",
    "CAP_ENV_VAR",
    "CapacityResult",
    "Cut",
    "CutStateMatrix",
    "DegenerateInstanceError",
    "DominanceViolatedError",
    "EMPTY_PATTERN",
    "EdgeFractions",
    "EnumerationCapError",
    "EnumerationCaps",
    "GapReport",
    "GenSpec",
    "InvalidPatternError",
    "LinkRates",
    "MaxMinProblem",
    "NetworkInstance",
    "NodeState",
    "RatioCondition",
    "Schedule",
    "SolverError",
    "StateSpace",
    "TheoremViolationError",
    "UndefinedLinkError",
    "ValidationReport",
    "analytic_dominance_bound",
    "build_state_space",
    "capacity_ideal",
    "capacity_imperfect",
    "check_assumptions",
    "constant_gap_condition",
    "cut_dominance_ratio",
    "cut_state_matrix",
    "cut_submatrix",
    "decompose_edge_fractions",
    "default_caps",
    "dominance_penalty",
    "dominance_ratio",
    "effective_channel",
    "enumerate_alignment_patterns",
    "enumerate_cuts",
    "enumerate_raw_states",
    "friis_amplitude",
    "generate",
    "gram_matrix",
    "hadamard_upper_bound",
    "ideal_gap_bound",
    "imperfect_value_table",
    "linear_value_table",
    "link_rate_ideal",
    "link_rate_leakage",
    "link_rate_tsn",
    "link_rates",
    "log_det_capacity",
    "max_degree",
    "ostrowski_lower_bound",
    "pattern_of_state",
    "platooning_instance",
    "rate_tsn",
    "solve_edge_lp",
    "solve_maxmin",
    "tsn_gap_bound",
    "validate_instance",
    "validate_pattern",
    "verify_instance",
]
