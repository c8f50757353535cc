"""Layered configuration: environment, then ``--tolerance`` flags, then the scenario, then defaults."""

from ._app_config import AppConfig
from ._casters import Choices, split_assignment
from ._reader import active_repository, config, get_repository, set_repository
from ._repository import ConfigRepository, EnvironRepository, FakeConfigRepository, Layer
from ._testing import override_config, use_repository
from ._types import UNDEFINED, ConfigCastError, ConfigError, UndefinedValueError
from .settings import LOG_LEVELS, PlannerSettings, Tolerances, log_level

__all__ = [
    "AppConfig",
    "Choices",
    "ConfigCastError",
    "ConfigError",
    "ConfigRepository",
    "EnvironRepository",
    "FakeConfigRepository",
    "LOG_LEVELS",
    "Layer",
    "PlannerSettings",
    "Tolerances",
    "UNDEFINED",
    "UndefinedValueError",
    "active_repository",
    "config",
    "get_repository",
    "log_level",
    "override_config",
    "set_repository",
    "split_assignment",
    "use_repository",
]
