"""Per-variant summary rows and their aligned-text rendering."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd


@dataclass
class SummaryRow:
    """Medians over seeds for one variant, plus run status."""
    variant: str
    subcenters: int
    temperature: float
    eer: float | None
    var_ratio: float | None
    utilization: float | None
    purity: float | None
    seeds_ok: int
    seeds_total: int
    errors: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.errors)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "subcenters": self.subcenters,
            "temperature": self.temperature,
            "eer": self.eer,
            "var_ratio": self.var_ratio,
            "utilization": self.utilization,
            "purity": self.purity,
            "seeds_ok": self.seeds_ok,
            "seeds_total": self.seeds_total,
            "status": "failed" if self.failed else "ok",
            "errors": self.errors,
        }


def median_or_none(values) -> float | None:
    vals = [v for v in values if v is not None]
    return float(np.median(vals)) if vals else None


def _fmt(value: float | None, pattern: str) -> str:
    return "-" if value is None else pattern.format(value)


def render_table(rows: list[SummaryRow]) -> str:
    df = pd.DataFrame({
        "variant": [r.variant for r in rows],
        "C": [r.subcenters for r in rows],
        "T": [f"{r.temperature:g}" for r in rows],
        "EER(%)": [_fmt(None if r.eer is None else 100 * r.eer, "{:.2f}") for r in rows],
        "var": [_fmt(r.var_ratio, "{:.3f}") for r in rows],
        "active": [_fmt(r.utilization, "{:.2f}") for r in rows],
        "purity": [_fmt(r.purity, "{:.3f}") for r in rows],
        "seeds": [f"{r.seeds_ok}/{r.seeds_total}" for r in rows],
        "status": ["failed" if r.failed else "ok" for r in rows],
    })
    return df.to_string(index=False) + "\n"
