"""
Intra- and inter-class variance of cosine similarities to speaker means.

Speaker means are plain arithmetic means (no renormalisation). Intra-class: each
embedding against its own speaker's mean, N terms. Inter-class: each embedding
against every other speaker's mean, N x (S - 1) terms. Both are population
variances centred on their own global mean.
"""
from __future__ import annotations

import numpy as np


def _grouped(embeddings, speaker_ids) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Unit embeddings, dense speaker index per row, unit speaker means, speaker ids."""
    x = np.asarray(embeddings, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("need a non-empty (n, L) embedding array")
    spk, inverse = np.unique(np.asarray(speaker_ids), return_inverse=True)
    if inverse.shape[0] != x.shape[0]:
        raise ValueError("speaker_ids must have one entry per embedding")
    counts = np.bincount(inverse)
    sums = np.zeros((len(spk), x.shape[1]))
    np.add.at(sums, inverse, x)
    means = sums / counts[:, None]
    mean_norms = np.linalg.norm(means, axis=1)
    if np.any(mean_norms == 0.0):
        raise ValueError("degenerate speaker mean")
    x_norms = np.linalg.norm(x, axis=1)
    if np.any(x_norms == 0.0):
        raise ValueError("degenerate vector")
    return x / x_norms[:, None], inverse, means / mean_norms[:, None], spk


def intra_class_similarities(embeddings, speaker_ids) -> np.ndarray:
    """Cosine of each embedding with its own speaker mean."""
    xu, inverse, mu, _ = _grouped(embeddings, speaker_ids)
    return np.sum(xu * mu[inverse], axis=1)


def inter_class_similarities(embeddings, speaker_ids) -> np.ndarray:
    """Cosine of each embedding with every other speaker mean, flattened."""
    xu, inverse, mu, spk = _grouped(embeddings, speaker_ids)
    if len(spk) < 2:
        raise ValueError("inter-class variance needs at least 2 speakers")
    sims = xu @ mu.T
    other = np.ones_like(sims, dtype=bool)
    other[np.arange(len(inverse)), inverse] = False
    return sims[other]


def intra_class_variance(embeddings, speaker_ids) -> float:
    return float(np.var(intra_class_similarities(embeddings, speaker_ids)))


def inter_class_variance(embeddings, speaker_ids) -> float:
    return float(np.var(inter_class_similarities(embeddings, speaker_ids)))


def variance_ratio(embeddings, speaker_ids) -> float:
    """Intra-class over inter-class variance."""
    inter = inter_class_variance(embeddings, speaker_ids)
    if inter == 0.0:
        raise ValueError("degenerate configuration")
    return intra_class_variance(embeddings, speaker_ids) / inter
