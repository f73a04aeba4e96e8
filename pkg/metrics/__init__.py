"""Embedding-space diagnostics: variance ratio, trials and EER, sub-center utilization."""
from .variance import (
    inter_class_similarities,
    inter_class_variance,
    intra_class_similarities,
    intra_class_variance,
    variance_ratio,
)
from .trials import TrialSet, build_trials, score_trials
from .eer import compute_eer, compute_eer_threshold, det_points
from .utilization import UtilizationSummary, subcenter_purity, subcenter_utilization
from .report import MetricsReport, build_report, read_scores_csv, write_report_json, write_scores_csv

__all__ = [
    "intra_class_similarities",
    "inter_class_similarities",
    "intra_class_variance",
    "inter_class_variance",
    "variance_ratio",
    "TrialSet",
    "build_trials",
    "score_trials",
    "compute_eer",
    "compute_eer_threshold",
    "det_points",
    "UtilizationSummary",
    "subcenter_utilization",
    "subcenter_purity",
    "MetricsReport",
    "build_report",
    "write_report_json",
    "write_scores_csv",
    "read_scores_csv",
]
