"""Converters for raw strings read from the environment or the command line."""

from __future__ import annotations

from collections.abc import Callable, Collection
from typing import Any


class Choices:
    """Accept only members of ``choices``, after normalizing with ``cast``.

    >>> Choices(("debug", "info"), cast=str.lower)("INFO")
    'info'
    """

    def __init__(self, choices: Collection[Any], cast: Callable[[Any], Any] = str) -> None:
        self.choices = tuple(choices)
        self.cast = cast

    def __call__(self, value: Any) -> Any:
        normalized = self.cast(value)
        if normalized in self.choices:
            return normalized
        allowed = ", ".join(map(str, self.choices))
        raise ValueError(f"{normalized!r} is not a valid choice. Must be one of: {allowed}")


def split_assignment(text: str) -> tuple[str, str]:
    """``"name=value"`` → ``("name", "value")``, both stripped and non-empty."""
    name, sep, value = text.partition("=")
    name, value = name.strip(), value.strip()
    if not sep or not name or not value:
        raise ValueError(f"expected NAME=VALUE, got {text!r}")
    return name, value
