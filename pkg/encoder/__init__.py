"""Feed-forward speaker encoder trained with the angular-margin heads."""
from .network import Encoder, EncoderConfig
from .optim import SGD, Adam, make_optimizer
from .trainer import (
    EmbeddingSet,
    TrainConfig,
    TrainedModel,
    TrainingDivergedError,
    encode,
    encode_batch,
    extract_all,
    init_model,
    train,
)
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    "Encoder",
    "EncoderConfig",
    "SGD",
    "Adam",
    "make_optimizer",
    "EmbeddingSet",
    "TrainConfig",
    "TrainedModel",
    "TrainingDivergedError",
    "encode",
    "encode_batch",
    "extract_all",
    "init_model",
    "train",
    "CheckpointError",
    "load_checkpoint",
    "save_checkpoint",
]
