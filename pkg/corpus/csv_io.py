"""Corpus CSV: speaker_id,subcluster_id,f0..f{D-1}; header row, UTF-8."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from .generator import SyntheticCorpus


def corpus_to_frame(corpus: SyntheticCorpus) -> pd.DataFrame:
    cols = [f"f{i}" for i in range(corpus.feature_dim)]
    df = pd.DataFrame(corpus.features, columns=cols)
    df.insert(0, "subcluster_id", corpus.subcluster_ids)
    df.insert(0, "speaker_id", corpus.speaker_ids)
    return df


def write_corpus_csv(corpus: SyntheticCorpus, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # repr-precision floats so a reload is exact
    corpus_to_frame(corpus).to_csv(path, index=False, encoding="utf-8", float_format="%.17g", lineterminator="\n")
    return path


def read_corpus_csv(path: str | Path) -> SyntheticCorpus:
    path = Path(path)
    df = pd.read_csv(path, encoding="utf-8", float_precision="round_trip")
    for col in ("speaker_id", "subcluster_id"):
        if col not in df.columns:
            raise ValueError(f"{path}: missing column {col!r}")
    feature_cols = [c for c in df.columns if c not in ("speaker_id", "subcluster_id")]
    expected = [f"f{i}" for i in range(len(feature_cols))]
    if feature_cols != expected:
        raise ValueError(f"{path}: feature columns must be f0..f{len(expected) - 1} in order")
    return SyntheticCorpus(
        features=df[feature_cols].to_numpy(dtype=np.float64),
        speaker_ids=df["speaker_id"].to_numpy(dtype=np.int64),
        subcluster_ids=df["subcluster_id"].to_numpy(dtype=np.int64),
    )
