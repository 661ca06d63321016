from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"


class Settings(BaseSettings):
    """Application configuration."""

    type_predicate: str = RDF_TYPE
    instance_of_predicate: str = "urn:fsp:instanceOf"
    surrogate_prefix: str = "urn:fsp:"
    surrogate_hash_hex_digits: int = Field(default=16, ge=8, le=64)

    efsp_max_properties: int = Field(default=20, ge=2)
    gfsp_early_stop: bool = True

    default_algorithm: Literal["efsp", "gfsp"] = "gfsp"
    default_convention: Literal["with-type", "without-type"] = "with-type"
    strict_assumptions: bool = False
    histogram_top_k: int = Field(default=10, ge=1)

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    log_file: Path | None = None
    log_max_bytes: int = 5_000_000
    log_backup_count: int = 3

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="FSP_",
        extra="ignore",
    )

    @field_validator("log_file", mode="before")
    @classmethod
    def _empty_log_file(cls, value: object) -> object:
        """Treat an empty FSP_LOG_FILE as 'no file handler'."""
        if isinstance(value, str) and not value.strip():
            return None
        return value


_SETTINGS: Settings | None = None


def get_settings() -> Settings:
    """Return the application settings singleton (loaded from env / .env)."""
    global _SETTINGS
    if _SETTINGS is None:
        _SETTINGS = Settings()
    return _SETTINGS


def reset_settings() -> None:
    """Drop the cached settings so the next get_settings() re-reads the environment."""
    global _SETTINGS
    _SETTINGS = None
