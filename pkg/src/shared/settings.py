"""
Runtime settings loaded from the environment (prefix FRIDGE_) or a .env file
"""
from functools import lru_cache
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level knobs that are not part of an experiment description"""

    model_config = SettingsConfigDict(env_prefix="FRIDGE_", env_file=".env", extra="ignore")

    log_level: str = "INFO"
    log_format: Literal["text", "json"] = "text"
    log_file: Optional[str] = None

    # Sweep grid points are evaluated by a thread pool of this size
    max_workers: int = Field(default=4, ge=1)
    default_steps: int = Field(default=200, ge=2)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the cached settings instance"""
    return Settings()
