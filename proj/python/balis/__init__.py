"""Balanced independent sets in dense random bipartite graphs."""

from ._balis import (
    BipartiteGraph,
    ConfigError,
    ContractViolation,
    FormatError,
    GuardError,
    Seed,
    Thresholds,
    compute_thresholds,
    count_balanced_independent_sets,
    estimate_success_probability,
    first_moment_crossing,
    generate_graph,
    greedy,
    greedy_with_targets,
    is_gamma_balanced,
    log_first_moment,
    max_balanced_independent_set,
    overlap_exponent_q,
    run_cli,
    second_moment_ratio,
)

__all__ = [
    "BipartiteGraph",
    "ConfigError",
    "ContractViolation",
    "FormatError",
    "GuardError",
    "Seed",
    "Thresholds",
    "compute_thresholds",
    "count_balanced_independent_sets",
    "estimate_success_probability",
    "first_moment_crossing",
    "generate_graph",
    "greedy",
    "greedy_with_targets",
    "is_gamma_balanced",
    "log_first_moment",
    "max_balanced_independent_set",
    "overlap_exponent_q",
    "run_cli",
    "second_moment_ratio",
]
