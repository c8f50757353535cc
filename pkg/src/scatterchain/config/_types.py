"""The missing-value sentinel and the config exception family."""

from __future__ import annotations

from enum import Enum
from typing import Final, Literal

from .._errors import ScatterChainError


class _Missing(Enum):
    """Marks a key no layer defines; ``None`` stays a legal value."""

    UNDEFINED = "UNDEFINED"

    def __repr__(self) -> str:
        return self.value

    def __bool__(self) -> Literal[False]:
        return False


UNDEFINED: Final = _Missing.UNDEFINED


class ConfigError(ScatterChainError):
    """Base exception for config errors."""


class UndefinedValueError(ConfigError):
    def __init__(self, key: str) -> None:
        self.key = key
        super().__init__(f"No layer defines '{key}' and it has no default.")


class ConfigCastError(ConfigError):
    """A raw value from some layer could not be converted."""

    def __init__(self, key: str, value: object, reason: str) -> None:
        self.key = key
        self.value = value
        self.reason = reason
        super().__init__(f"Bad value {value!r} for '{key}': {reason}")
