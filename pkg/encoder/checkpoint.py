"""JSON checkpoint container. Floats are written at repr precision, so a reload encodes bit-identically."""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Any

import numpy as np

from loss import LossConfig, SubCenterBank

from .network import Encoder, EncoderConfig
from .trainer import TrainConfig, TrainedModel

CHECKPOINT_FORMAT = "subcenter-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(RuntimeError):
    """Unreadable checkpoint, wrong format or unsupported version."""


def model_to_dict(model: TrainedModel) -> dict[str, Any]:
    train_cfg = None
    if model.train_config is not None:
        train_cfg = asdict(model.train_config)
    enc_cfg = asdict(model.encoder_config)
    enc_cfg["hidden_dims"] = list(enc_cfg["hidden_dims"])
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "encoder_config": enc_cfg,
        "loss_config": asdict(model.loss_config),
        "train_config": train_cfg,
        "classes": model.classes.tolist(),
        "feature_mean": model.feature_mean.tolist(),
        "feature_scale": model.feature_scale.tolist(),
        "encoder": {
            "weights": [w.tolist() for w in model.encoder.weights],
            "biases": [b.tolist() for b in model.encoder.biases],
        },
        "bank": model.bank.weights.tolist(),
        "history": [float(v) for v in model.history],
    }


def model_from_dict(data: dict[str, Any]) -> TrainedModel:
    if data.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"not a checkpoint (format={data.get('format')!r})")
    if data.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {data.get('version')!r}")
    try:
        enc_cfg = EncoderConfig(**data["encoder_config"])
        loss_cfg = LossConfig(**data["loss_config"])
        train_cfg = None
        if data.get("train_config") is not None:
            tc = dict(data["train_config"])
            tc["loss"] = LossConfig(**tc["loss"])
            train_cfg = TrainConfig(**tc)
        encoder = Encoder(
            config=enc_cfg,
            weights=[np.asarray(w, dtype=np.float64) for w in data["encoder"]["weights"]],
            biases=[np.asarray(b, dtype=np.float64) for b in data["encoder"]["biases"]],
        )
        return TrainedModel(
            encoder=encoder,
            bank=SubCenterBank(np.asarray(data["bank"], dtype=np.float64)),
            loss_config=loss_cfg,
            classes=np.asarray(data["classes"], dtype=np.int64),
            feature_mean=np.asarray(data["feature_mean"], dtype=np.float64),
            feature_scale=np.asarray(data["feature_scale"], dtype=np.float64),
            history=list(data.get("history", [])),
            train_config=train_cfg,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"malformed checkpoint: {e}") from e


def save_checkpoint(model: TrainedModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model_to_dict(model), f)
    return path


def load_checkpoint(path: str | Path) -> TrainedModel:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise CheckpointError(f"checkpoint not found: {path}") from e
    except json.JSONDecodeError as e:
        raise CheckpointError(f"{path}: invalid JSON ({e})") from e
    return model_from_dict(data)
