"""Engine configuration using pydantic settings."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class EngineSettings(BaseSettings):
    """Runtime limits and logging options for the computation engine."""

    model_config = SettingsConfigDict(env_prefix="SINGCAT_", case_sensitive=False)

    degree_cap: int = Field(32, ge=1, le=256)
    hom_degree_bound: int = Field(4, ge=1, le=24)
    witness_candidates: int = Field(64, ge=0, le=100_000)
    witness_degree_cap: int = Field(12, ge=2, le=64)
    batch_concurrency: int = Field(4, ge=1, le=64)
    log_level: str = Field("WARNING")
    log_directory: Optional[Path] = None
    environment: str = Field("production")


@lru_cache(maxsize=1)
def get_settings() -> EngineSettings:
    """Return cached settings instance."""

    settings = EngineSettings()
    if settings.log_directory is not None:
        settings.log_directory.mkdir(parents=True, exist_ok=True)
    return settings
