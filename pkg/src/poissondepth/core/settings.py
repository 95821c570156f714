"""Runtime settings from the environment and key=value run configuration files."""

import os
from pathlib import Path
from typing import Any, Dict, Union

from dotenv import dotenv_values
from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class RuntimeSettings(BaseSettings):
    """Process-wide settings.

    ``THREADS`` caps internal parallelism (LWLR pixel blocks, ablation cells).
    """

    model_config = SettingsConfigDict(case_sensitive=False, extra="ignore")

    threads: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        gt=0,
        validation_alias=AliasChoices("THREADS"),
    )
    log_level: str = Field(
        default="WARNING",
        validation_alias=AliasChoices("POISSONDEPTH_LOG_LEVEL"),
    )


def get_settings() -> RuntimeSettings:
    """Read settings fresh from the current environment."""
    return RuntimeSettings()


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Parse a ``key=value`` run configuration file.

    Keys are CLI flag names; ``-`` and ``_`` are interchangeable and case is ignored.
    Returns normalized keys (``cg_tol``) mapped to raw string values.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    raw = dotenv_values(path)
    config: Dict[str, str] = {}
    for key, value in raw.items():
        if value is None:
            raise ValueError(f"{path}: key {key!r} has no value")
        config[key.strip().lower().replace("-", "_")] = value.strip()
    return config


def resolve(flag: Any, config: Dict[str, str], key: str, default: Any, cast=float) -> Any:
    """Explicit flag, then config file value, then built-in default."""
    if flag is not None:
        return flag
    if key in config:
        return cast(config[key])
    return default
