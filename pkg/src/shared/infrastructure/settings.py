from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class RogueSettings(BaseSettings):
    """Process-level settings read from ROGUE_* environment variables or a .env file."""

    model_config = SettingsConfigDict(env_prefix="ROGUE_", env_file=".env", extra="ignore")

    workers: int = Field(default=1, ge=1, description="Worker processes used for replicates")
    log_level: str = "INFO"
    log_json: bool = False
    metrics_file: bool = Field(default=True, description="Write metrics.prom next to the results")


@lru_cache
def get_settings() -> RogueSettings:
    """Get the cached settings instance."""
    return RogueSettings()
