"""Curvature-aware greedy maximization of monotone submodular set functions."""

from .algorithms import (
    ALGORITHMS,
    RESQUE_MODES,
    ledger_update_after_removal,
    random_rewiring_greedy,
    resque_greedy,
    sequential_greedy,
    solve,
    step_back,
    trigger_law,
)
from .bench import BenchConfig, RunReport, run_bench, summarize, write_results
from .coverage import (
    CoverageFunction,
    GeneratorConfig,
    Instance,
    evaluate_coverage,
    generate_instance,
    instance_from_points,
    load_instance_json,
    load_points_csv,
    modular_instance,
    save_instance_json,
)
from .curvature import (
    TOL,
    CurvatureLedger,
    LedgerEntry,
    PathCurvatureRecord,
    expansion_curvature,
    gamma_star,
    path_curvature,
    set_curvature,
    total_curvature,
)
from .errors import (
    ResqueError,
    ElementInSetError,
    EmptyCandidatesError,
    OverlapError,
    EmptyLedgerError,
    KappaRangeError,
    NoRemovableStageError,
    StageRangeError,
    InvalidProbabilityError,
    InvalidOptError,
    InstanceTooLargeError,
    InstanceMismatchError,
    MalformedTraceError,
    UnknownSiteError,
    InvalidConfigError,
    ParseError,
    MissingHeaderError,
    NonFiniteCoordinateError,
)
from .exact import (
    BoundReport,
    ComparisonReport,
    OptimalCertificate,
    brute_force_opt,
    certify_bounds,
    compare_runs,
    curvature_bound,
    stage_bound,
)
from .oracle import CallableSetFunction, OracleStats, SetFunction, ValueOracle, marginal_gain, scan_marginals
from .plot import render_svg, save_svg
from .trace import RewireEvent, SolutionTrace, StageRecord

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "RESQUE_MODES",
    "ledger_update_after_removal",
    "random_rewiring_greedy",
    "resque_greedy",
    "sequential_greedy",
    "solve",
    "step_back",
    "trigger_law",
    "CoverageFunction",
    "GeneratorConfig",
    "Instance",
    "evaluate_coverage",
    "generate_instance",
    "instance_from_points",
    "load_instance_json",
    "load_points_csv",
    "modular_instance",
    "save_instance_json",
    "TOL",
    "CurvatureLedger",
    "LedgerEntry",
    "PathCurvatureRecord",
    "expansion_curvature",
    "gamma_star",
    "path_curvature",
    "set_curvature",
    "total_curvature",
    "ResqueError",
    "ElementInSetError",
    "EmptyCandidatesError",
    "OverlapError",
    "EmptyLedgerError",
    "KappaRangeError",
    "NoRemovableStageError",
    "StageRangeError",
    "InvalidProbabilityError",
    "InvalidOptError",
    "InstanceTooLargeError",
    "InstanceMismatchError",
    "MalformedTraceError",
    "UnknownSiteError",
    "InvalidConfigError",
    "ParseError",
    "MissingHeaderError",
    "NonFiniteCoordinateError",
    "BoundReport",
    "ComparisonReport",
    "OptimalCertificate",
    "brute_force_opt",
    "certify_bounds",
    "compare_runs",
    "curvature_bound",
    "stage_bound",
    "BenchConfig",
    "RunReport",
    "run_bench",
    "summarize",
    "write_results",
    "CallableSetFunction",
    "OracleStats",
    "SetFunction",
    "ValueOracle",
    "marginal_gain",
    "scan_marginals",
    "render_svg",
    "save_svg",
    "RewireEvent",
    "SolutionTrace",
    "StageRecord",
]
