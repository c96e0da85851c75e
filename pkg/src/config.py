"""Configuration management for the reconstruction toolkit."""
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Process-level settings, read from ``WSST_*`` environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="WSST_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Output
    output_dir: Path = Field(default=Path("results"))
    log_level: str = Field(default="INFO")

    # Harness
    workers: int = Field(default=1, ge=1)

    # Datasets
    movielens_100k: Optional[Path] = Field(default=None)


def load_run_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load a flat key-value run configuration from a YAML file.

    Keys are normalised to snake_case so ``--eps-lambda`` and ``eps_lambda``
    address the same parameter.

    Args:
        config_path: Path to config file. If None, returns an empty mapping.

    Returns:
        Dictionary of parameter overrides
    """
    if config_path is None:
        return {}

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to load run config {config_path}: {e}")

    if not isinstance(raw, dict):
        raise RuntimeError(f"Run config {config_path} must be a flat key-value mapping")

    config: Dict[str, Any] = {}
    for key, value in raw.items():
        if isinstance(value, dict):
            logger.warning(f"Ignoring nested section '{key}' in {config_path}")
            continue
        config[str(key).replace("-", "_")] = value
    return config


settings = Settings()
