"""
Seeded multi-speaker corpus: each speaker is a mixture of sub-style clusters.

Speaker means lie on a sphere of radius speaker_spread; each speaker's sub-cluster
means sit at distance subcluster_spread from the speaker mean; utterances add
isotropic Gaussian noise. Every speaker draws from its own stream
(default_rng([seed, speaker])), so adding speakers leaves earlier ones untouched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from loguru import logger


@dataclass(frozen=True)
class CorpusConfig:
    """Corpus shape and geometry."""
    num_speakers: int
    subclusters_per_speaker: int
    utterances_per_speaker: int
    feature_dim: int
    speaker_spread: float
    subcluster_spread: float
    noise_sigma: float
    seed: int

    def __post_init__(self):
        for name in ("num_speakers", "subclusters_per_speaker", "utterances_per_speaker", "feature_dim"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value}")
        for name in ("speaker_spread", "subcluster_spread", "noise_sigma"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if not self.subcluster_spread < self.speaker_spread:
            raise ValueError("subcluster_spread must be smaller than speaker_spread")
        if int(self.seed) != self.seed:
            raise ValueError(f"seed must be an integer, got {self.seed}")


@dataclass(frozen=True)
class Utterance:
    """One utterance; subcluster_id is the latent style, for diagnostics only."""
    features: np.ndarray
    speaker_id: int
    subcluster_id: int


@dataclass
class SyntheticCorpus:
    """Utterance features with speaker and sub-cluster labels, row-aligned."""
    features: np.ndarray  # (n, D)
    speaker_ids: np.ndarray  # (n,)
    subcluster_ids: np.ndarray  # (n,)
    config: CorpusConfig | None = field(default=None, compare=False)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.speaker_ids = np.asarray(self.speaker_ids, dtype=np.int64)
        self.subcluster_ids = np.asarray(self.subcluster_ids, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D array")
        n = self.features.shape[0]
        if self.speaker_ids.shape != (n,) or self.subcluster_ids.shape != (n,):
            raise ValueError("label arrays must match the number of feature rows")

    def __len__(self) -> int:
        return self.features.shape[0]

    def __iter__(self) -> Iterator[Utterance]:
        for i in range(len(self)):
            yield self.utterance(i)

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    @property
    def speakers(self) -> np.ndarray:
        """Sorted distinct speaker ids."""
        return np.unique(self.speaker_ids)

    def utterance(self, i: int) -> Utterance:
        return Utterance(
            features=self.features[i].copy(),
            speaker_id=int(self.speaker_ids[i]),
            subcluster_id=int(self.subcluster_ids[i]),
        )

    def subset(self, speaker_ids) -> "SyntheticCorpus":
        """Utterances of the given speakers, original order kept."""
        mask = np.isin(self.speaker_ids, np.asarray(list(speaker_ids), dtype=np.int64))
        return SyntheticCorpus(
            features=self.features[mask],
            speaker_ids=self.speaker_ids[mask],
            subcluster_ids=self.subcluster_ids[mask],
            config=self.config,
        )

    def equals(self, other: "SyntheticCorpus") -> bool:
        return (
            np.array_equal(self.features, other.features)
            and np.array_equal(self.speaker_ids, other.speaker_ids)
            and np.array_equal(self.subcluster_ids, other.subcluster_ids)
        )


def _unit_directions(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Uniform directions on the sphere via normalised Gaussian draws."""
    g = rng.standard_normal((count, dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # a zero draw has probability zero; keep it finite anyway
    norms[norms == 0.0] = 1.0
    return g / norms


def _speaker_block(cfg: CorpusConfig, speaker: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([cfg.seed, speaker])
    k = cfg.subclusters_per_speaker
    u = cfg.utterances_per_speaker
    mean = cfg.speaker_spread * _unit_directions(rng, 1, cfg.feature_dim)[0]
    sub_means = mean + cfg.subcluster_spread * _unit_directions(rng, k, cfg.feature_dim)
    # balanced round-robin assignment, then shuffled
    styles = rng.permutation(np.arange(u) % k)
    noise = cfg.noise_sigma * rng.standard_normal((u, cfg.feature_dim))
    return sub_means[styles] + noise, styles


def generate_corpus(cfg: CorpusConfig) -> SyntheticCorpus:
    """Build the corpus; byte-identical for a fixed config."""
    feats, spk, sub = [], [], []
    for speaker in range(cfg.num_speakers):
        block, styles = _speaker_block(cfg, speaker)
        feats.append(block)
        spk.append(np.full(cfg.utterances_per_speaker, speaker, dtype=np.int64))
        sub.append(styles.astype(np.int64))
    corpus = SyntheticCorpus(
        features=np.concatenate(feats, axis=0),
        speaker_ids=np.concatenate(spk),
        subcluster_ids=np.concatenate(sub),
        config=cfg,
    )
    logger.info(
        f"Generated corpus: {cfg.num_speakers} speakers x {cfg.utterances_per_speaker} utterances, "
        f"{cfg.subclusters_per_speaker} sub-clusters each, dim={cfg.feature_dim}"
    )
    return corpus
