"""Configuration loader. Loads .env for output/worker overrides."""
import json
import os
from pathlib import Path
from typing import Any

import yaml

from .schema import ConfigError, ExperimentConfig, VariantConfig, parse_experiment_config

# Load .env so SUBCENTER_* overrides are available
try:
    from dotenv import load_dotenv
    _env_path = Path(__file__).resolve().parent.parent / ".env"
    load_dotenv(_env_path)
except ImportError:
    pass  # optional: pip install python-dotenv

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent / "settings.yaml"


def load_config(config_path: str | Path | None = None) -> dict[str, Any]:
    """Load a JSON or YAML experiment config (default: settings.yaml); apply env overrides."""
    path = Path(config_path) if config_path is not None else DEFAULT_CONFIG_PATH
    try:
        with open(path, encoding="utf-8") as f:
            # PyYAML reads 1e-4 as a string, so JSON goes through json
            cfg = json.load(f) if path.suffix.lower() == ".json" else yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigError("<file>", f"config file not found: {path}") from e
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError("<file>", f"{path}: not valid JSON/YAML ({e})") from e
    if cfg is None:
        cfg = {}
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", f"{path}: top level must be an object")
    if os.getenv("SUBCENTER_OUTPUT_DIR"):
        cfg["output_dir"] = os.getenv("SUBCENTER_OUTPUT_DIR")
    if os.getenv("SUBCENTER_WORKERS"):
        try:
            cfg["workers"] = int(os.getenv("SUBCENTER_WORKERS"))
        except ValueError as e:
            raise ConfigError("workers", "SUBCENTER_WORKERS must be an integer") from e
    return cfg


def load_experiment_config(config_path: str | Path | None = None) -> ExperimentConfig:
    return parse_experiment_config(load_config(config_path))


__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "VariantConfig",
    "DEFAULT_CONFIG_PATH",
    "load_config",
    "load_experiment_config",
    "parse_experiment_config",
]
