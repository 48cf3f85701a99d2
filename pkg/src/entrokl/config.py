"""Application configuration using pydantic-settings."""

from __future__ import annotations

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from ENTROKL_* environment variables.

    Only the CLI reads settings; library functions take every knob as an
    explicit argument whose default matches the value here.

    Attributes:
        threads: Worker threads for Monte Carlo loops and tree queries.
        log_level: Logging level.
        log_format: Console log format ("json" or "detailed").
        send_to_logfire: Ship logs to Logfire when a token is present.
        mc_n: Monte Carlo points per ball-mass evaluation.
        grid: Initial radius grid size of the sup/inf searches.
        grid_refinements: Maximum grid doublings of the sup/inf searches.
        redraw_cap: Maximum coincident-pair redraw rounds per outer point.
    """

    model_config = SettingsConfigDict(
        env_prefix="ENTROKL_",
        extra="ignore",
    )

    threads: int = Field(default=1, ge=1)
    log_level: str = "WARNING"
    log_format: Literal["json", "detailed"] = "json"
    send_to_logfire: bool = False

    mc_n: int = Field(default=4096, ge=1)
    grid: int = Field(default=64, ge=2)
    grid_refinements: int = Field(default=4, ge=0)
    redraw_cap: int = Field(default=100, ge=1)


def get_settings() -> Settings:
    """Get application settings.

    Returns:
        Settings instance loaded from environment.
    """
    return Settings()
