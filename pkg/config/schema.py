"""
Experiment config schema: exhaustive validation, unknown keys rejected.
Every error names the offending field by its dotted path (e.g. corpus.seed).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from corpus import CorpusConfig
from encoder import EncoderConfig, TrainConfig
from loss import LossConfig

_MISSING = object()


class ConfigError(ValueError):
    """Invalid experiment config; `field` is the dotted path of the bad entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class VariantConfig:
    name: str
    loss: LossConfig


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: CorpusConfig
    variants: tuple[VariantConfig, ...]
    trials: int
    output_dir: Path
    train_fraction: float = 0.8
    split_seed: int = 0
    hidden_dims: tuple[int, ...] = (64, 64)
    embedding_dim: int = 16
    activation: str = "relu"
    epochs: int = 20
    batch_size: int = 32
    learning_rate: float = 1e-4
    optimizer: str = "adam"
    seeds: tuple[int, ...] = (0, 1, 2)
    workers: int = 1
    source: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def encoder_config(self, seed: int) -> EncoderConfig:
        return EncoderConfig(
            input_dim=self.corpus.feature_dim,
            hidden_dims=self.hidden_dims,
            embedding_dim=self.embedding_dim,
            activation=self.activation,
            seed=seed,
        )

    def train_config(self, variant: VariantConfig, seed: int) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            optimizer=self.optimizer,
            loss=variant.loss,
            seed=seed,
        )

    def variant(self, name: str) -> VariantConfig:
        for v in self.variants:
            if v.name == name:
                return v
        available = ", ".join(v.name for v in self.variants)
        raise ValueError(f"unknown variant {name!r}; available: {available}")

    def resolved(self) -> dict[str, Any]:
        """Fully resolved config (defaults filled) as plain JSON types."""
        corpus = asdict(self.corpus)
        return {
            "corpus": corpus,
            "split": {"train_fraction": self.train_fraction, "seed": self.split_seed},
            "encoder": {
                "hidden_dims": list(self.hidden_dims),
                "embedding_dim": self.embedding_dim,
                "activation": self.activation,
            },
            "train": {
                "epochs": self.epochs,
                "batch_size": self.batch_size,
                "learning_rate": self.learning_rate,
                "optimizer": self.optimizer,
            },
            "variants": [
                {
                    "name": v.name,
                    "margin": v.loss.margin,
                    "scale": v.loss.scale,
                    "temperature": v.loss.temperature,
                    "subcenters": v.loss.subcenters,
                }
                for v in self.variants
            ],
            "trials": self.trials,
            "seeds": list(self.seeds),
            "workers": self.workers,
            "output_dir": str(self.output_dir),
        }


def _section(data: dict, key: str, path: str, required: bool = True) -> dict:
    value = data.get(key, _MISSING)
    if value is _MISSING:
        if required:
            raise ConfigError(f"{path}{key}", "missing required section")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{path}{key}", "must be an object")
    return value


def _reject_unknown(data: dict, allowed: set[str], path: str) -> None:
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{path}{key}", "unknown key")


def _int(data: dict, key: str, path: str, default=_MISSING, minimum: int | None = None) -> int:
    value = data.get(key, default)
    name = f"{path}{key}"
    if value is _MISSING:
        raise ConfigError(name, "missing required field")
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {value}")
    return value


def _float(data: dict, key: str, path: str, default=_MISSING) -> float:
    value = data.get(key, default)
    name = f"{path}{key}"
    if value is _MISSING:
        raise ConfigError(name, "missing required field")
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(name, f"must be a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"must be a number, got {value!r}")
    return float(value)


def _str(data: dict, key: str, path: str, default=_MISSING, choices: tuple[str, ...] | None = None) -> str:
    value = data.get(key, default)
    name = f"{path}{key}"
    if value is _MISSING:
        raise ConfigError(name, "missing required field")
    if not isinstance(value, str) or not value:
        raise ConfigError(name, f"must be a non-empty string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigError(name, f"must be one of {', '.join(choices)}, got {value!r}")
    return value


def _int_list(
    data: dict, key: str, path: str, default=_MISSING, minimum: int | None = None, unique: bool = False
) -> tuple[int, ...]:
    value = data.get(key, default)
    name = f"{path}{key}"
    if value is _MISSING:
        raise ConfigError(name, "missing required field")
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(name, "must be a non-empty list of integers")
    items = tuple(_checked_item(item, f"{name}[{i}]", minimum) for i, item in enumerate(value))
    if unique:
        for i, item in enumerate(items):
            if item in items[:i]:
                raise ConfigError(f"{name}[{i}]", f"duplicate value {item}")
    return items


def _checked_item(item, name: str, minimum: int | None) -> int:
    if isinstance(item, bool) or not isinstance(item, int):
        raise ConfigError(name, f"must be an integer, got {item!r}")
    if minimum is not None and item < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {item}")
    return item


def _build(name: str, factory, **kwargs):
    """Run a dataclass constructor, re-raising its ValueError against the config path."""
    try:
        return factory(**kwargs)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(name, str(e)) from e


def _parse_corpus(data: dict) -> CorpusConfig:
    sec = _section(data, "corpus", "")
    fields = (
        "num_speakers", "subclusters_per_speaker", "utterances_per_speaker", "feature_dim",
        "speaker_spread", "subcluster_spread", "noise_sigma", "seed",
    )
    _reject_unknown(sec, set(fields), "corpus.")
    kwargs = {
        "num_speakers": _int(sec, "num_speakers", "corpus.", minimum=1),
        "subclusters_per_speaker": _int(sec, "subclusters_per_speaker", "corpus.", minimum=1),
        "utterances_per_speaker": _int(sec, "utterances_per_speaker", "corpus.", minimum=1),
        "feature_dim": _int(sec, "feature_dim", "corpus.", minimum=1),
        "speaker_spread": _float(sec, "speaker_spread", "corpus."),
        "subcluster_spread": _float(sec, "subcluster_spread", "corpus."),
        "noise_sigma": _float(sec, "noise_sigma", "corpus."),
        "seed": _int(sec, "seed", "corpus."),
    }
    return _build("corpus", CorpusConfig, **kwargs)


def _parse_variants(data: dict) -> tuple[VariantConfig, ...]:
    raw = data.get("variants", _MISSING)
    if raw is _MISSING:
        raise ConfigError("variants", "missing required field")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("variants", "must be a non-empty list")
    out, seen = [], set()
    for i, item in enumerate(raw):
        path = f"variants[{i}]."
        if not isinstance(item, dict):
            raise ConfigError(f"variants[{i}]", "must be an object")
        _reject_unknown(item, {"name", "margin", "scale", "temperature", "subcenters"}, path)
        name = _str(item, "name", path)
        if name in seen:
            raise ConfigError(f"{path}name", f"duplicate variant name {name!r}")
        seen.add(name)
        loss = _build(
            f"variants[{i}]",
            LossConfig,
            margin=_float(item, "margin", path, default=0.4),
            scale=_float(item, "scale", path, default=30.0),
            temperature=_float(item, "temperature", path, default=1.0),
            subcenters=_int(item, "subcenters", path, default=1, minimum=1),
        )
        out.append(VariantConfig(name=name, loss=loss))
    return tuple(out)


def _check_trials_feasible(corpus: CorpusConfig, train_fraction: float, trials: int) -> None:
    n_train = int(round(train_fraction * corpus.num_speakers))
    n_eval = corpus.num_speakers - n_train
    if n_train < 1 or n_eval < 2:
        raise ConfigError("split.train_fraction", f"leaves {n_train} train / {n_eval} eval speakers")
    u = corpus.utterances_per_speaker
    if u < 2:
        raise ConfigError("corpus.utterances_per_speaker", "need >= 2 utterances per speaker for trials")
    avail_target = n_eval * u * (u - 1) // 2
    avail_nontarget = (n_eval * u) * (n_eval * u - 1) // 2 - avail_target
    if trials // 2 > avail_target or trials - trials // 2 > avail_nontarget:
        raise ConfigError(
            "trials",
            f"{trials} trials infeasible for {n_eval} eval speakers x {u} utterances "
            f"({avail_target} target / {avail_nontarget} non-target pairs)",
        )


def parse_experiment_config(data: dict[str, Any]) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be an object")
    _reject_unknown(
        data,
        {"corpus", "split", "encoder", "train", "variants", "trials", "seeds", "workers", "output_dir"},
        "",
    )
    corpus = _parse_corpus(data)

    split = _section(data, "split", "")
    _reject_unknown(split, {"train_fraction", "seed"}, "split.")
    train_fraction = _float(split, "train_fraction", "split.", default=0.8)
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError("split.train_fraction", f"must be in (0, 1), got {train_fraction}")
    split_seed = _int(split, "seed", "split.")

    enc = _section(data, "encoder", "", required=False)
    _reject_unknown(enc, {"hidden_dims", "embedding_dim", "activation"}, "encoder.")
    hidden_dims = _int_list(enc, "hidden_dims", "encoder.", default=[64, 64], minimum=1)
    embedding_dim = _int(enc, "embedding_dim", "encoder.", default=16, minimum=2)
    activation = _str(enc, "activation", "encoder.", default="relu", choices=("relu", "tanh"))

    tr = _section(data, "train", "")
    _reject_unknown(tr, {"epochs", "batch_size", "learning_rate", "optimizer"}, "train.")
    epochs = _int(tr, "epochs", "train.", minimum=1)
    batch_size = _int(tr, "batch_size", "train.", default=32, minimum=1)
    learning_rate = _float(tr, "learning_rate", "train.", default=1e-4)
    if not learning_rate > 0:
        raise ConfigError("train.learning_rate", f"must be > 0, got {learning_rate}")
    optimizer = _str(tr, "optimizer", "train.", default="adam", choices=("adam", "sgd"))

    variants = _parse_variants(data)
    trials = _int(data, "trials", "", minimum=2)
    seeds = _int_list(data, "seeds", "", default=[0, 1, 2], unique=True)
    workers = _int(data, "workers", "", default=1, minimum=1)
    output_dir = _str(data, "output_dir", "")
    _check_trials_feasible(corpus, train_fraction, trials)

    return ExperimentConfig(
        corpus=corpus,
        variants=variants,
        trials=trials,
        output_dir=Path(output_dir),
        train_fraction=train_fraction,
        split_seed=split_seed,
        hidden_dims=hidden_dims,
        embedding_dim=embedding_dim,
        activation=activation,
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        optimizer=optimizer,
        seeds=seeds,
        workers=workers,
        source=dict(data),
    )
