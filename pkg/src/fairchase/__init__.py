"""Venue-specific ODI run-scoring distributions and bias-corrected chase
targets: ingest match results, fit per-case scoring models, and compute the
second-innings target that gives both batting orders an equal shot."""

from .config import (
    AppConfig,
    DEFAULT_TARGET_GRID,
    LOW_TARGET_WARNING_THRESHOLD,
    load_config_file,
    parse_family,
)
from .distributions import (
    DEFAULT_FIT_CONFIG,
    DEFAULT_QUANTILE_CAP,
    Family,
    FitConfig,
    FittedDist,
    LogisticParams,
    NegBinParams,
    NormalParams,
    cdf,
    fit,
    fit_logistic,
    fit_nb,
    fit_normal,
    fitted_from_dict,
    fitted_from_json,
    fitted_to_dict,
    fitted_to_json,
    nb_logpmf,
    nb_pmf,
    pmf,
    quantile,
    survival,
)
from .errors import (
    DegenerateQuantileWarning,
    DuplicateMatchId,
    EmptyVenue,
    FairchaseError,
    InconsistentOutcome,
    InconsistentSpec,
    InsufficientSample,
    InvalidParams,
    MalformedRow,
    TargetUnattainable,
    UnderdispersedSample,
    UnknownVenue,
    ZeroVariance,
)
from .matches import (
    CSV_HEADER,
    CaseLabel,
    CaseSample,
    MatchRecord,
    OVERALL_VENUE,
    Outcome,
    SummaryRow,
    categorize,
    parse_matches,
    resolve_venue,
    round_half_away,
    serialize_matches,
    summarize,
    summary_to_csv,
    summary_to_json,
    venue_names,
)
from .revision import (
    BiasRow,
    RevisedTarget,
    RevisionModel,
    RevisionReport,
    TargetCell,
    VenueStatus,
    bias_total,
    build_model,
    report_to_csv,
    report_to_json,
    revise_target,
    revision_report,
)
from .simulate import (
    SimConfig,
    SimResult,
    SyntheticVenueSpec,
    check_equalization,
    default_synthetic_spec,
    generate_synthetic_dataset,
    sample_scores,
)

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "BiasRow",
    "CSV_HEADER",
    "CaseLabel",
    "CaseSample",
    "DEFAULT_FIT_CONFIG",
    "DEFAULT_QUANTILE_CAP",
    "DEFAULT_TARGET_GRID",
    "DegenerateQuantileWarning",
    "DuplicateMatchId",
    "EmptyVenue",
    "FairchaseError",
    "Family",
    "FitConfig",
    "FittedDist",
    "InconsistentOutcome",
    "InconsistentSpec",
    "InsufficientSample",
    "InvalidParams",
    "LOW_TARGET_WARNING_THRESHOLD",
    "LogisticParams",
    "MalformedRow",
    "MatchRecord",
    "NegBinParams",
    "NormalParams",
    "OVERALL_VENUE",
    "Outcome",
    "RevisedTarget",
    "RevisionModel",
    "RevisionReport",
    "SimConfig",
    "SimResult",
    "SummaryRow",
    "SyntheticVenueSpec",
    "TargetCell",
    "TargetUnattainable",
    "UnderdispersedSample",
    "UnknownVenue",
    "VenueStatus",
    "ZeroVariance",
    "bias_total",
    "build_model",
    "categorize",
    "cdf",
    "check_equalization",
    "default_synthetic_spec",
    "fit",
    "fit_logistic",
    "fit_nb",
    "fit_normal",
    "fitted_from_dict",
    "fitted_from_json",
    "fitted_to_dict",
    "fitted_to_json",
    "generate_synthetic_dataset",
    "load_config_file",
    "nb_logpmf",
    "nb_pmf",
    "parse_family",
    "parse_matches",
    "pmf",
    "quantile",
    "resolve_venue",
    "revise_target",
    "revision_report",
    "report_to_csv",
    "report_to_json",
    "round_half_away",
    "sample_scores",
    "serialize_matches",
    "summarize",
    "summary_to_csv",
    "summary_to_json",
    "survival",
    "venue_names",
]
