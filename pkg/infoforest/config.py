"""
Configuration module for the Information Forest toolkit
Centralized settings for paths, worker counts, logging and hyperparameter defaults
"""

import os
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .errors import InvalidInputError

# Load environment variables
load_dotenv()

# Project paths
PROJECT_ROOT = Path(__file__).parent.parent
LOGS_DIR = Path(os.getenv("INFOFOREST_LOGS_DIR", PROJECT_ROOT / "logs"))
MANIFEST_DIR = Path(os.getenv("INFOFOREST_MANIFEST_DIR", LOGS_DIR / "manifests"))

# Worker count for tree training (the only behavioral env override)
N_JOBS = int(os.getenv("INFOFOREST_N_JOBS", "1"))

# Hyperparameter defaults shipped with the CLI, echoed into every manifest
DEFAULT_TRAIN_ARGS: Dict[str, Any] = {
    "tau": 0.5,
    "delta": 0.01,
    "trees": 32,
    "max_depth": 64,
    "min_samples": 2,
    "n_axis": 2,
    "n_linear": 1,
    "n_thresholds": 16,
    "pool_scope": "node",
    "bins": 16,
    "smoothing": 1.0,
    "symmetrize": False,
    "sampling": "bootstrap",
    "subsample_fraction": 0.632,
    "seed": 0,
}

# Logging configuration
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE_NAME = "infoforest.log"


def setup_logging(level: Optional[str] = None, log_to_file: bool = False) -> None:
    """
    Configure root logging once for a CLI process

    Args:
        level: Log level name; falls back to LOG_LEVEL
        log_to_file: Also append to logs/infoforest.log
    """
    handlers: list = [logging.StreamHandler()]
    if log_to_file:
        LOGS_DIR.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(LOGS_DIR / LOG_FILE_NAME))

    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Read hyperparameter overrides from a YAML file

    Keys use the CLI flag names with underscores (e.g. ``n_thresholds``).
    Unknown keys are rejected so a typo never silently falls back to a default.

    Returns:
        Dictionary of overrides (possibly empty)
    """
    with open(path, "r") as f:
        loaded = yaml.safe_load(f) or {}

    if not isinstance(loaded, dict):
        raise InvalidInputError(f"Config file {path} must contain a mapping")

    unknown = sorted(set(loaded) - set(DEFAULT_TRAIN_ARGS))
    if unknown:
        raise InvalidInputError(f"Unknown config keys in {path}: {', '.join(unknown)}")

    return dict(loaded)


def resolve_train_args(overrides: Optional[Dict[str, Any]] = None,
                       config_path: Optional[Path] = None,
                       preset: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Merge defaults < preset < YAML file < explicit overrides (None values ignored)"""
    resolved = dict(DEFAULT_TRAIN_ARGS)
    resolved.update(preset or {})
    if config_path is not None:
        resolved.update(load_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is not None:
            resolved[key] = value
    return resolved
