"""
Configuration settings for MEV-ACE Lab.

This module provides configuration management using environment variables
and sensible defaults. Protocol parameters and scenarios are not settings;
they are loaded from scenario documents (see app.schemas.scenario).
"""

from typing import Optional
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    """Application settings."""

    # Model configuration
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"  # Allow extra fields without raising an error
    )

    # General settings
    app_name: str = Field(default="MEV-ACE Lab", json_schema_extra={"env": "APP_NAME"})
    debug: bool = Field(default=False, json_schema_extra={"env": "DEBUG"})
    version: str = Field(default="1.0.0", json_schema_extra={"env": "VERSION"})
    log_level: str = Field(default="INFO", json_schema_extra={"env": "LOG_LEVEL"})

    # Archive database settings
    database_name: str = Field(default="mevace.db", json_schema_extra={"env": "DATABASE_NAME"})
    database_url: Optional[str] = Field(default=None, json_schema_extra={"env": "DATABASE_URL"})

    # Protocol plumbing
    auth_context: str = Field(default="mev-ace/auth/v1", json_schema_extra={"env": "AUTH_CONTEXT"})
    signature_scheme: str = Field(default="mock", json_schema_extra={"env": "SIGNATURE_SCHEME"})  # "mock" or "ed25519"
    vdf_checkpoint_divisor: int = Field(default=16, ge=1, json_schema_extra={"env": "VDF_CHECKPOINT_DIVISOR"})

    # Simulation defaults
    default_seed: int = Field(default=7, json_schema_extra={"env": "DEFAULT_SEED"})
    reports_dir: str = Field(default="reports", json_schema_extra={"env": "REPORTS_DIR"})


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings (cached).
    """
    return Settings()


def reload_settings() -> Settings:
    """
    Reload application settings.

    Clears the cache so the next get_settings() call re-reads environment
    variables and the .env file. Useful for tests.

    Returns:
        Settings: New settings instance
    """
    get_settings.cache_clear()
    return get_settings()


def get_auth_context() -> str:
    """Get the key-derivation context label for authentication keys."""
    return get_settings().auth_context


def get_debug_mode() -> bool:
    """Get debug mode from settings."""
    return get_settings().debug
