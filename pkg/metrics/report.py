"""MetricsReport assembly and the scores / report file formats."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from loguru import logger

from .eer import compute_eer
from .trials import TrialSet
from .utilization import UtilizationSummary
from .variance import inter_class_variance, intra_class_variance


@dataclass
class MetricsReport:
    eer: float
    intra_var: float
    inter_var: float
    var_ratio: float | None
    utilization_mean: float | None = None
    utilization_per_class: list[int] | None = None
    purity: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "eer": self.eer,
            "intra_var": self.intra_var,
            "inter_var": self.inter_var,
            "var_ratio": self.var_ratio,
            "utilization_mean": self.utilization_mean,
            "utilization_per_class": self.utilization_per_class,
            "purity": self.purity,
        }
        out.update(self.extra)
        return out


def build_report(
    embeddings,
    speaker_ids,
    trials: TrialSet,
    utilization: UtilizationSummary | None = None,
    purity: float | None = None,
) -> MetricsReport:
    intra = intra_class_variance(embeddings, speaker_ids)
    inter = inter_class_variance(embeddings, speaker_ids)
    if inter > 0:
        ratio = intra / inter
    else:
        logger.warning("inter-class variance is zero; var_ratio left empty")
        ratio = None
    return MetricsReport(
        eer=compute_eer(trials.target_scores(), trials.nontarget_scores()),
        intra_var=intra,
        inter_var=inter,
        var_ratio=ratio,
        utilization_mean=None if utilization is None else utilization.mean,
        utilization_per_class=None if utilization is None else [int(c) for c in utilization.per_class],
        purity=purity,
    )


def write_report_json(report: MetricsReport, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=2)
        f.write("\n")
    return path


def write_scores_csv(trials: TrialSet, path: str | Path) -> Path:
    """label,score with label in {target, nontarget}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame({
        "label": np.where(trials.is_target, "target", "nontarget"),
        "score": trials.require_scores(),
    })
    df.to_csv(path, index=False, encoding="utf-8", float_format="%.17g", lineterminator="\n")
    return path


def read_scores_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """(target scores, non-target scores)."""
    df = pd.read_csv(path, encoding="utf-8", float_precision="round_trip")
    bad = set(df["label"]) - {"target", "nontarget"}
    if bad:
        raise ValueError(f"{path}: unknown labels {sorted(bad)}")
    return (
        df.loc[df["label"] == "target", "score"].to_numpy(dtype=np.float64),
        df.loc[df["label"] == "nontarget", "score"].to_numpy(dtype=np.float64),
    )
