"""Speaker-level train/eval split (eval speakers unseen in training)."""
from __future__ import annotations

import numpy as np
from loguru import logger

from .generator import SyntheticCorpus


def split_corpus(
    corpus: SyntheticCorpus,
    train_fraction: float,
    seed: int,
) -> tuple[SyntheticCorpus, SyntheticCorpus]:
    """
    Randomly choose round(train_fraction * S) speakers for training; the rest are eval.
    Both sides must be non-empty.
    """
    if not (0.0 < train_fraction < 1.0):
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    speakers = corpus.speakers
    if len(speakers) < 2:
        raise ValueError("need at least 2 speakers to split")
    n_train = int(round(train_fraction * len(speakers)))
    if n_train < 1 or n_train >= len(speakers):
        raise ValueError(
            f"train_fraction={train_fraction} over {len(speakers)} speakers leaves an empty split"
        )
    rng = np.random.default_rng(seed)
    order = rng.permutation(speakers)
    train_speakers = np.sort(order[:n_train])
    eval_speakers = np.sort(order[n_train:])
    logger.debug(f"Split {len(speakers)} speakers -> {len(train_speakers)} train / {len(eval_speakers)} eval")
    return corpus.subset(train_speakers), corpus.subset(eval_speakers)
