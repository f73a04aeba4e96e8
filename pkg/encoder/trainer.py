"""
Encoder + sub-center head training, embedding extraction.

Training is single-threaded and deterministic: batches come from a seeded
permutation per epoch (last short batch kept), the bank is projected back to the
unit sphere after every optimizer step.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from corpus import SyntheticCorpus
from loss import LossConfig, SubCenterBank, aam_softmax_loss, subcenter_loss
from loss.aggregate import normalize_rows

from .network import Encoder, EncoderConfig
from .optim import OptimizerName, make_optimizer


class TrainingDivergedError(RuntimeError):
    """Non-finite loss or weights during training."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int = 32
    learning_rate: float = 1e-4
    optimizer: OptimizerName = "adam"
    loss: LossConfig = field(default_factory=LossConfig)
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not self.learning_rate >= 0:
            raise ValueError("learning_rate must be >= 0")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"optimizer must be adam or sgd, got {self.optimizer!r}")


@dataclass
class TrainedModel:
    """Encoder, sub-center bank and the bookkeeping needed to encode new utterances."""
    encoder: Encoder
    bank: SubCenterBank
    loss_config: LossConfig
    classes: np.ndarray  # class index -> speaker id
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    history: list[float] = field(default_factory=list)
    train_config: TrainConfig | None = None

    @property
    def encoder_config(self) -> EncoderConfig:
        return self.encoder.config

    def class_labels(self, speaker_ids) -> np.ndarray:
        """Class index per speaker id; -1 for speakers the head was not trained on."""
        speaker_ids = np.asarray(speaker_ids, dtype=np.int64)
        pos = np.searchsorted(self.classes, speaker_ids)
        pos = np.clip(pos, 0, len(self.classes) - 1)
        return np.where(self.classes[pos] == speaker_ids, pos, -1)


@dataclass
class EmbeddingSet:
    """Unit embeddings with their speaker and sub-cluster labels."""
    embeddings: np.ndarray  # (n, L)
    speaker_ids: np.ndarray
    subcluster_ids: np.ndarray

    def __len__(self) -> int:
        return self.embeddings.shape[0]


def init_model(
    encoder_cfg: EncoderConfig,
    num_classes: int,
    loss_cfg: LossConfig,
    classes: np.ndarray | None = None,
) -> TrainedModel:
    """Untrained seeded model; identity input standardisation."""
    encoder = Encoder.init(encoder_cfg)
    bank = SubCenterBank.random(
        num_classes, loss_cfg.subcenters, encoder_cfg.embedding_dim,
        np.random.default_rng([encoder_cfg.seed, 1]),
    )
    return TrainedModel(
        encoder=encoder,
        bank=bank,
        loss_config=loss_cfg,
        classes=np.arange(num_classes) if classes is None else np.asarray(classes, dtype=np.int64),
        feature_mean=np.zeros(encoder_cfg.input_dim),
        feature_scale=np.ones(encoder_cfg.input_dim),
    )


def _check_features(model: TrainedModel, features) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.shape[-1] != model.encoder_config.input_dim:
        raise ValueError(
            f"feature length {x.shape[-1]} does not match encoder input_dim {model.encoder_config.input_dim}"
        )
    return x


def encode_batch(model: TrainedModel, features) -> np.ndarray:
    """(n, D) features -> (n, L) unit embeddings."""
    x = _check_features(model, np.atleast_2d(features))
    raw, _ = model.encoder.forward((x - model.feature_mean) / model.feature_scale)
    unit, _ = normalize_rows(raw)
    return unit


def encode(model: TrainedModel, features) -> np.ndarray:
    """One utterance's features -> unit embedding of dimension L."""
    x = _check_features(model, features)
    if x.ndim != 1:
        raise ValueError("encode takes a single feature vector; use encode_batch for matrices")
    return encode_batch(model, x[None, :])[0]


def extract_all(model: TrainedModel, corpus: SyntheticCorpus, workers: int = 1) -> EmbeddingSet:
    """Encode every utterance, keeping labels; chunks fan out across threads."""
    if len(corpus) == 0:
        return EmbeddingSet(
            embeddings=np.zeros((0, model.encoder_config.embedding_dim)),
            speaker_ids=np.zeros(0, dtype=np.int64),
            subcluster_ids=np.zeros(0, dtype=np.int64),
        )
    if workers <= 1:
        emb = encode_batch(model, corpus.features)
    else:
        chunks = np.array_split(corpus.features, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: encode_batch(model, c), [c for c in chunks if len(c)]))
        emb = np.concatenate(parts, axis=0)
    return EmbeddingSet(
        embeddings=emb,
        speaker_ids=corpus.speaker_ids.copy(),
        subcluster_ids=corpus.subcluster_ids.copy(),
    )


def _project_in_place(weights: np.ndarray) -> None:
    # in place: the optimizer holds a reference to this array
    np.divide(weights, np.linalg.norm(weights, axis=-1, keepdims=True), out=weights)


def train(
    corpus_train: SyntheticCorpus,
    encoder_cfg: EncoderConfig,
    train_cfg: TrainConfig,
) -> TrainedModel:
    """Train encoder and head on speaker labels; per-epoch mean loss goes to history."""
    if len(corpus_train) == 0:
        raise ValueError("training corpus is empty")
    if corpus_train.feature_dim != encoder_cfg.input_dim:
        raise ValueError(
            f"corpus feature_dim {corpus_train.feature_dim} != encoder input_dim {encoder_cfg.input_dim}"
        )
    classes, labels = np.unique(corpus_train.speaker_ids, return_inverse=True)
    if len(classes) < 2:
        raise ValueError("training corpus needs at least 2 speakers")

    loss_cfg = train_cfg.loss
    model = init_model(encoder_cfg, len(classes), loss_cfg, classes=classes)
    mean = corpus_train.features.mean(axis=0)
    scale = corpus_train.features.std(axis=0)
    scale[scale == 0.0] = 1.0
    model.feature_mean = mean
    model.feature_scale = scale
    model.train_config = train_cfg
    x_all = (corpus_train.features - mean) / scale

    loss_fn = aam_softmax_loss if loss_cfg.subcenters == 1 else subcenter_loss
    encoder, bank = model.encoder, model.bank
    optimizer = make_optimizer(train_cfg.optimizer, [*encoder.parameters(), bank.weights], train_cfg.learning_rate)
    rng = np.random.default_rng(train_cfg.seed)
    n = len(corpus_train)

    logger.info(
        f"Training: {n} utterances, {len(classes)} classes, C={loss_cfg.subcenters}, "
        f"T={loss_cfg.temperature}, m={loss_cfg.margin}, s={loss_cfg.scale}, epochs={train_cfg.epochs}"
    )
    for epoch in range(1, train_cfg.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for batch, start in enumerate(range(0, n, train_cfg.batch_size), 1):
            idx = order[start:start + train_cfg.batch_size]
            raw, cache = encoder.forward(x_all[idx])
            if not np.all(np.isfinite(raw)):
                raise TrainingDivergedError(f"non-finite embeddings at epoch {epoch}, batch {batch}")
            out = loss_fn(raw, labels[idx], bank, loss_cfg)
            if not np.isfinite(out.loss):
                raise TrainingDivergedError(f"non-finite loss at epoch {epoch}, batch {batch}")
            grads_w, grads_b = encoder.backward(out.grad_embeddings, cache)
            optimizer.step([*grads_w, *grads_b, out.grad_weights])
            _project_in_place(bank.weights)
            total += out.loss * len(idx)
            logger.debug(f"epoch {epoch} batch {batch}: loss={out.loss:.5f}")
        if not (encoder.all_finite() and np.all(np.isfinite(bank.weights))):
            raise TrainingDivergedError(f"non-finite weights after epoch {epoch}")
        model.history.append(total / n)
        logger.info(f"epoch {epoch}/{train_cfg.epochs}: loss={model.history[-1]:.5f}")
    return model
