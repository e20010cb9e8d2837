from __future__ import annotations

import os
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="LOGNLS_", extra="ignore")

    # Where run directories (manifests, CSV, JSON) are created
    OUT_DIR: str = os.getenv("LOGNLS_OUT_DIR", ".runs")

    # Logging; an empty LOG_DIR disables the rotating file handler
    LOG_DIR: str = ".logs"
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # Defaults for --seed / --jobs
    SEED: int = 42
    JOBS: int = 1


settings = Settings()
