"""Numerical tolerances and planner knobs, loaded through the config layer."""

from __future__ import annotations

from pydantic import Field

from ._app_config import AppConfig
from ._casters import Choices
from ._reader import config
from ._repository import ConfigRepository

LOG_LEVELS = ("debug", "info", "warning", "error")


class Tolerances(AppConfig):
    """Geometric and temporal tolerances.

    ``corner`` and ``vertex`` are relative to the cell width, ``tangent`` to
    the particle speed.
    """

    class Meta:
        env_prefix = "SCATTERCHAIN_TOL"

    corner: float = Field(default=1e-7, gt=0)
    tangent: float = Field(default=1e-9, gt=0)
    time: float = Field(default=1e-12, gt=0)
    angle: float = Field(default=1e-9, gt=0)
    coverage: float = Field(default=1e-6, gt=0)
    boundary_samples: int = Field(default=4096, ge=64)
    angular_samples: int = Field(default=8192, ge=64)
    root_xtol: float = Field(default=1e-13, gt=0)
    vertex: float = Field(default=1e-8, gt=0)


class PlannerSettings(AppConfig):
    class Meta:
        env_prefix = "SCATTERCHAIN_PLAN"

    hop_samples: int = Field(default=1024, ge=16)
    hop_refine: int = Field(default=4, ge=0)
    alpha_samples: int = Field(default=32, ge=4)
    lambda_cap: float = Field(default=2.0**40, gt=1)
    controller_speed: float = Field(default=1.0, gt=0)
    window_fill: float = Field(default=0.5, gt=0, lt=1)
    min_window: float = Field(default=1e-9, gt=0)
    path_retries: int = Field(default=4, ge=0)
    phase_window: float = Field(default=16.0, gt=0)
    seed: int = 0


def log_level(repo: ConfigRepository | None = None) -> str:
    """Diagnostic verbosity from ``SCATTERCHAIN_LOG`` (default ``warning``)."""
    return config(
        "log",
        env="SCATTERCHAIN_LOG",
        cast=Choices(LOG_LEVELS, cast=lambda v: str(v).strip().lower()),
        default="warning",
        repo=repo,
    )
