"""memstab: runtime-memory stability metrics for cohorts of correct program variants."""

from .aggregation import (
    ModelScore,
    PairwiseDistanceRecord,
    ProblemScore,
    SolutionDmpdMean,
    model_score,
    pairwise_table,
    problem_scores,
    solution_dmpd_means,
)
from .alignment import (
    AlignmentResult,
    dmpd,
    dmpd_matrix,
    dtw_align,
    normalized_peak_difference,
)
from .burstiness import (
    NMVConfig,
    NMVRecord,
    NMVSolutionMean,
    max_velocity,
    median_peak,
    nmv_records,
    nmv_solution_mean,
)
from .errors import (
    ConfigurationError,
    DegenerateProfileError,
    DegenerateTestError,
    ExcludedRunError,
    InsufficientDataError,
    InvalidTraceError,
    MemstabError,
    NoDataError,
    NoPassingSolutionsError,
    UndefinedCorrelationError,
    ValidationError,
)
from .estimators import DmpdDistance, MonotonicPeakTransform
from .profiles import (
    MonotonicPeakProfile,
    RawTrace,
    baseline_correct,
    quantize,
    resample_stride,
    to_mpp,
    unit_peak,
)
from .stats import (
    CorrelationRow,
    PairedDiffSummary,
    cliffs_delta,
    paired_diff_summary,
    pearson_r,
    spearman_rho,
    tertile_stratify,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "ConfigurationError",
    "CorrelationRow",
    "DegenerateProfileError",
    "DegenerateTestError",
    "DmpdDistance",
    "ExcludedRunError",
    "InsufficientDataError",
    "InvalidTraceError",
    "MemstabError",
    "ModelScore",
    "MonotonicPeakProfile",
    "MonotonicPeakTransform",
    "NMVConfig",
    "NMVRecord",
    "NMVSolutionMean",
    "NoDataError",
    "NoPassingSolutionsError",
    "PairedDiffSummary",
    "PairwiseDistanceRecord",
    "ProblemScore",
    "RawTrace",
    "SolutionDmpdMean",
    "UndefinedCorrelationError",
    "ValidationError",
    "baseline_correct",
    "cliffs_delta",
    "dmpd",
    "dmpd_matrix",
    "dtw_align",
    "max_velocity",
    "median_peak",
    "model_score",
    "nmv_records",
    "nmv_solution_mean",
    "normalized_peak_difference",
    "paired_diff_summary",
    "pairwise_table",
    "pearson_r",
    "problem_scores",
    "quantize",
    "resample_stride",
    "solution_dmpd_means",
    "spearman_rho",
    "tertile_stratify",
    "to_mpp",
    "unit_peak",
    "wilcoxon_signed_rank",
]
