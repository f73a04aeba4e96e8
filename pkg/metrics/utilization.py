"""Which sub-centers actually get used by a class's own utterances."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from corpus import SyntheticCorpus
from encoder import TrainedModel, encode_batch


@dataclass
class UtilizationSummary:
    """per_class[j] = number of class j sub-centers that are argmax for >= 1 of its utterances."""
    per_class: np.ndarray
    mean: float
    assignments: np.ndarray  # argmax sub-center per used utterance
    labels: np.ndarray  # class label per used utterance
    subcluster_ids: np.ndarray  # ground-truth style per used utterance


def _assign(model: TrainedModel, corpus: SyntheticCorpus):
    labels = model.class_labels(corpus.speaker_ids)
    known = labels >= 0
    if not np.all(known):
        logger.warning(f"utilization: skipping {int((~known).sum())} utterances of speakers unknown to the head")
    labels = labels[known]
    if labels.size == 0:
        return labels, np.zeros(0, dtype=np.int64), corpus.subcluster_ids[known]
    x = encode_batch(model, corpus.features[known])
    unit = model.bank.unit()
    sims = np.einsum("bl,bcl->bc", x, unit[labels])
    return labels, np.argmax(sims, axis=1), corpus.subcluster_ids[known]


def subcenter_utilization(model: TrainedModel, corpus: SyntheticCorpus) -> UtilizationSummary:
    labels, assigned, styles = _assign(model, corpus)
    used = np.zeros((model.bank.num_classes, model.bank.num_subcenters), dtype=bool)
    used[labels, assigned] = True
    per_class = used.sum(axis=1)
    return UtilizationSummary(
        per_class=per_class,
        mean=float(per_class.mean()),
        assignments=assigned,
        labels=labels,
        subcluster_ids=styles,
    )


def subcenter_purity(model: TrainedModel, corpus: SyntheticCorpus) -> float:
    """
    Mean over classes of the fraction of utterances whose assigned sub-center's
    majority ground-truth sub-style equals their own.
    """
    summary = subcenter_utilization(model, corpus)
    scores = []
    for cls in np.unique(summary.labels):
        mask = summary.labels == cls
        assigned = summary.assignments[mask]
        styles = summary.subcluster_ids[mask]
        hits = 0
        for k in np.unique(assigned):
            sel = styles[assigned == k]
            hits += int(np.bincount(sel).max())
        scores.append(hits / mask.sum())
    return float(np.mean(scores)) if scores else 0.0
