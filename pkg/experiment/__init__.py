"""Config-driven generate / train / evaluate / experiment commands."""
from .commands import (
    ExperimentSummary,
    RunResult,
    cmd_evaluate,
    cmd_experiment,
    cmd_generate,
    cmd_train,
    evaluate_model,
)
from .table import SummaryRow, render_table

__all__ = [
    "ExperimentSummary",
    "RunResult",
    "SummaryRow",
    "cmd_generate",
    "cmd_train",
    "cmd_evaluate",
    "cmd_experiment",
    "evaluate_model",
    "render_table",
]
