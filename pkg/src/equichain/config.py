"""Configuration management for equichain.

Settings come from pydantic-settings, so every field can be set through an
``EQUICHAIN_``-prefixed environment variable, a ``.env`` file, or directly.
"""

from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

OUTPUT_FORMATS = ("table", "json", "tsv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class EquichainConfig(BaseSettings):
    """Central configuration.

    Attributes:
        seed: Base seed for all sampled property checks (``EQUICHAIN_SEED``).
        samples_per_degree: Sampled elements per degree when validating reductions.
        max_check_degree: Highest degree sampled by default.
        certify_snf: Re-multiply recorded unimodular transforms after each SNF.
        output_format: Default CLI table format.
        log_level: Logging level.
        log_json: Emit structured JSON logs.
        parallel: Compute per-degree homology concurrently.
        max_workers: Worker threads for parallel homology.
        report_dir: Where ``selftest`` writes its report, if anywhere.
    """

    seed: int = Field(default=0, description="Base seed for sampled property checks")
    samples_per_degree: int = Field(
        default=50, description="Sampled elements per degree when validating"
    )
    max_check_degree: int = Field(default=6, description="Highest degree sampled by default")
    certify_snf: bool = Field(
        default=False, description="Certify Smith normal forms by replaying transforms"
    )
    output_format: str = Field(default="table", description="Default CLI output format")

    log_level: str = Field(default="INFO", description="Logging level")
    log_json: bool = Field(default=False, description="Output structured JSON logs")

    parallel: bool = Field(default=False, description="Compute homology degrees concurrently")
    max_workers: int = Field(default=4, description="Maximum number of worker threads")

    report_dir: Optional[Path] = Field(
        default=None, description="Directory for selftest reports"
    )

    model_config = SettingsConfigDict(
        env_prefix="EQUICHAIN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    @field_validator("samples_per_degree", "max_check_degree", "max_workers")
    @classmethod
    def validate_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"must be non-negative, got {v}")
        return v

    @field_validator("output_format")
    @classmethod
    def validate_output_format(cls, v: str) -> str:
        v = v.lower()
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        v = v.upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}")
        return v

    def ensure_directories(self):
        """Create the report directory if one is configured."""
        if self.report_dir:
            self.report_dir.mkdir(parents=True, exist_ok=True)


def get_config(**overrides) -> EquichainConfig:
    """Load configuration from the environment, then apply explicit overrides."""
    return EquichainConfig(**overrides)
