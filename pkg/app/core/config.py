"""
Application settings.

Values are read from the environment (prefix ``TANGENCY_``) or from a local ``.env``
file, e.g. ``TANGENCY_ESCALATION_CAP=4``.
"""

from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine and oracle defaults."""

    max_order: Optional[int] = Field(
        None, lt=0, description="Truncation order override; None uses -(deg f * deg curve + 1)"
    )
    escalation_cap: int = Field(3, ge=0, description="Depth doublings before truncation exhaustion")
    precision: int = Field(12, ge=1, le=100, description="Decimal digits of report approximations")
    algebraic_dps: int = Field(60, ge=20, description="mpmath working precision for algebraic values")
    shear_limit: int = Field(24, ge=1, description="Shears tried to reach generic position")
    psi_angular_samples: int = Field(3600, ge=16, description="Angular grid size of the psi oracle")
    psi_refine_steps: int = Field(200, ge=1, description="Bounded Brent iterations per psi seed")
    log_level: str = Field("WARNING", description="Root logging level")

    model_config = SettingsConfigDict(env_prefix="TANGENCY_", env_file=".env", extra="ignore")


@lru_cache
def get_settings() -> Settings:
    return Settings()
