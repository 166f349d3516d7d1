"""
Settings for delpezzo-lines.

Defaults live on the models below; config/config.yaml and the environment
override them.
"""

import os
from collections.abc import Sequence
from functools import lru_cache
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

CONFIG_ENV_VAR = "DELPEZZO_CONFIG"
CONFIG_CANDIDATES = (
    Path("config/config.yaml"),
    Path(__file__).resolve().parent.parent / "config" / "config.yaml",
)


class RootsConfig(BaseSettings):
    """Root enumeration and positivity configuration."""

    positivity_base: int = Field(default=100, ge=2)
    coordinate_bound: int = Field(default=3, ge=3)


class CatalogConfig(BaseSettings):
    """Deformation class catalog configuration."""

    version: str = "1.0.0"
    validate_on_build: bool = True


class TritangentConfig(BaseSettings):
    """Randomized tritangent check configuration."""

    seed: int = 20240601
    random_instances: int = Field(default=120, ge=100)
    substitution_trials: int = Field(default=10, ge=1)
    coefficient_bound: int = Field(default=5, ge=1)


class ReportConfig(BaseSettings):
    """Report rendering configuration."""

    indent: int = Field(default=2, ge=0)


class LoggingConfig(BaseSettings):
    """structlog level and renderer."""

    level: str = "WARNING"
    format: str = "console"
    include_timestamp: bool = False

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        """Validate log level name."""
        allowed = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if v.upper() not in allowed:
            raise ValueError(f"level must be one of {allowed}")
        return v.upper()

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        """Validate renderer name."""
        if v.lower() not in {"json", "console"}:
            raise ValueError("format must be 'json' or 'console'")
        return v.lower()


class Settings(BaseSettings):
    """
    Main settings class for delpezzo-lines.

    Sources, lowest priority first: field defaults, the YAML file from
    find_config_file(), a .env file, then environment variables with "__"
    between nested keys (TRITANGENT__SEED=7).
    """

    model_config = SettingsConfigDict(
        env_prefix="",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    environment: str = Field(default="development")

    roots: RootsConfig = Field(default_factory=RootsConfig)
    catalog: CatalogConfig = Field(default_factory=CatalogConfig)
    tritangent: TritangentConfig = Field(default_factory=TritangentConfig)
    report: ReportConfig = Field(default_factory=ReportConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        yaml_settings = YamlConfigSettingsSource(settings_cls, yaml_file=find_config_file())
        return init_settings, env_settings, dotenv_settings, yaml_settings, file_secret_settings

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        allowed = {"development", "staging", "production", "test"}
        if v.lower() not in allowed:
            raise ValueError(f"environment must be one of {sorted(allowed)}")
        return v.lower()

    @property
    def is_production(self) -> bool:
        return self.environment == "production"

    @property
    def is_test(self) -> bool:
        return self.environment == "test"


def find_config_file(candidates: Sequence[Path] = CONFIG_CANDIDATES) -> Path | None:
    """
    Locate the YAML configuration.

    DELPEZZO_CONFIG names the file explicitly; otherwise the first existing
    candidate wins. None when nothing is found, which leaves the defaults.
    """
    explicit = os.environ.get(CONFIG_ENV_VAR)
    if explicit:
        return Path(explicit)
    return next((path for path in candidates if path.is_file()), None)


@lru_cache
def get_settings() -> Settings:
    """Settings for this process, built once."""
    return Settings()


def reset_settings() -> None:
    """Drop the cached settings so the next get_settings() re-reads its sources."""
    get_settings.cache_clear()
