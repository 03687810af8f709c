"""Modified coordinate descent and comparison optimizers for budget-limited
black-box minimization."""

from ._core import (
    BenchFunction,
    ConfigError,
    DimensionMismatch,
    Error,
    InsufficientBudget,
    compute_iar,
    delta_grouping,
    make_suite,
    restart_plan,
    run_cc,
    run_de,
    run_mcd,
    suite_manifest_json,
    suite_names,
    tally_wtl,
)

__all__ = [
    "BenchFunction",
    "ConfigError",
    "DimensionMismatch",
    "Error",
    "InsufficientBudget",
    "compute_iar",
    "delta_grouping",
    "make_suite",
    "restart_plan",
    "run_cc",
    "run_de",
    "run_mcd",
    "suite_manifest_json",
    "suite_names",
    "tally_wtl",
]
