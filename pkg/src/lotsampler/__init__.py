"""Acceptance-sampling toolkit: plan design, sequential testing, simulation."""

from .plans import (
    FixedPlan,
    InvalidParameterError,
    PlanParams,
    ThresholdKind,
    acceptance_threshold,
    normal_cdf,
    normal_quantile,
    plan_sweep,
    poisson_cdf,
    rejection_threshold,
    sample_size,
)
from .simulate import (
    FiniteLot,
    InfiniteLot,
    Lot,
    MissingPerRepCountsError,
    PlanComparison,
    SampleExceedsLotError,
    SimConfig,
    SimReport,
    compare_plans,
    draw_defects,
    replication_rng,
    simulate_fixed_plan,
    simulate_sequential,
)
from .sprt import (
    ItemResult,
    SprtConfig,
    SprtPerformance,
    SprtState,
    SteppedAfterStopError,
    Verdict,
    boundaries,
    exact_performance,
    log_likelihood_ratio,
    run_sequence,
    step,
)
from .stats import DegenerateVarianceError, TTestResult, welch_t
from .tables import (
    AqlPlanEntry,
    PLAN_ENTRIES,
    PlanCase,
    UnknownCodeLetterError,
    code_letter_size,
    export_plan_table_csv,
    lookup_plan,
)

__version__ = "0.1.0"

__all__ = [
    "AqlPlanEntry",
    "DegenerateVarianceError",
    "FiniteLot",
    "FixedPlan",
    "InfiniteLot",
    "InvalidParameterError",
    "ItemResult",
    "Lot",
    "MissingPerRepCountsError",
    "PLAN_ENTRIES",
    "PlanCase",
    "PlanComparison",
    "PlanParams",
    "SampleExceedsLotError",
    "SimConfig",
    "SimReport",
    "SprtConfig",
    "SprtPerformance",
    "SprtState",
    "SteppedAfterStopError",
    "TTestResult",
    "ThresholdKind",
    "UnknownCodeLetterError",
    "Verdict",
    "acceptance_threshold",
    "boundaries",
    "code_letter_size",
    "compare_plans",
    "draw_defects",
    "exact_performance",
    "export_plan_table_csv",
    "log_likelihood_ratio",
    "lookup_plan",
    "normal_cdf",
    "normal_quantile",
    "plan_sweep",
    "poisson_cdf",
    "rejection_threshold",
    "replication_rng",
    "run_sequence",
    "sample_size",
    "simulate_fixed_plan",
    "simulate_sequential",
    "step",
    "welch_t",
]
