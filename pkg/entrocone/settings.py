#!/usr/bin/env python3
"""
Runtime Settings

Environment-driven knobs for the cone pipelines, redundancy removal and
logging. Every field can be overridden with an ENTROCONE_ prefixed variable
or through a .env file.
"""

from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="ENTROCONE_", extra="ignore"
    )

    # Parallelism (1 keeps everything in-process)
    THREADS: int = 1

    # Numerics
    TOLERANCE: float = 1e-9
    REDUNDANCY_STRIDE: int = 1
    FLOAT_PRESCREEN: bool = True
    RATIONALIZE_DENOMINATOR: int = 10**9

    # Data
    DATA_DIR: Optional[Path] = None

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None


settings = Settings()


def get_settings() -> Settings:
    """Re-read the environment and return a fresh settings object."""
    return Settings()
