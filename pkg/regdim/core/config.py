"""
Library Configuration

Centralized defaults for tolerances, scale grids and worker counts.
Only explicit arguments are honoured: environment variables and .env files
are ignored so that a run is fully determined by its config file and flags.
"""

from functools import lru_cache
from typing import List, Tuple, Type

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    """
    Library-wide defaults.

    Override by passing keyword arguments, e.g. Settings(default_tol=1e-8),
    or through the `tolerances` section of a run config.
    """

    model_config = SettingsConfigDict(extra="ignore", validate_default=True)

    # ===========================================
    # Application Settings
    # ===========================================
    app_name: str = Field(default="regdim", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    debug: bool = Field(default=False, description="Enable debug logging")
    log_level: str = Field(default="INFO", description="Log level when debug is off")

    # ===========================================
    # Ball-Mass Queries
    # ===========================================
    default_tol: float = Field(default=1e-6, description="Relative width target of ball-mass intervals")
    ssc_max_depth: int = Field(default=8, description="Refinement depth for SSC certification")
    sequence_n_max: int = Field(default=1_000_000, description="Cached prefix sums for sequence weights")
    lens_cell_size: float = Field(default=2.0 ** -24, description="Finest quadrature cell side for the lens measure")
    preimage_cache_size: int = Field(default=200_000, description="Emitted pushforward points whose exact preimage is kept")

    # ===========================================
    # Scale Grids
    # ===========================================
    grid_base: float = Field(default=2.0, description="Base of the geometric radius grid")
    gap_min: int = Field(default=8, description="Smallest scale gap log_b(R/r) used by scans")
    gap_max: int = Field(default=24, description="Largest scale gap log_b(R/r) used by scans")

    # ===========================================
    # Estimators
    # ===========================================
    chain_tol: float = Field(default=0.1, description="Slack allowed in dimension-chain checks")
    tau_q_list: Tuple[float, ...] = Field(default=(-1.0, -5.0, -10.0), description="Moments used to estimate T")
    net_scale_factor: float = Field(default=1.0, description="Support-net scale relative to the packing radius")

    # ===========================================
    # Execution
    # ===========================================
    threads: int = Field(default=1, description="Worker threads for estimator scans")
    seed: int = Field(default=0, description="Seed for randomized sampling")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @property
    def effective_log_level(self) -> str:
        """Log level after applying the debug switch."""
        return "DEBUG" if self.debug else self.log_level.upper()

    def validate_config(self) -> List[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if not 0 < self.default_tol < 1:
            errors.append("default_tol must be in (0, 1)")

        if self.grid_base <= 1:
            errors.append("grid_base must exceed 1")

        if not 1 <= self.gap_min <= self.gap_max:
            errors.append("gap_min must satisfy 1 <= gap_min <= gap_max")

        if not any(q <= -10 for q in self.tau_q_list):
            errors.append("tau_q_list needs a moment q <= -10")

        if self.threads < 1:
            errors.append("threads must be at least 1")

        if self.sequence_n_max < 1000:
            errors.append("sequence_n_max must be at least 1000")

        if self.preimage_cache_size < 1:
            errors.append("preimage_cache_size must be at least 1")

        return errors


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()
