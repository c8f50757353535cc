"""The ``config()`` lookup and the process-wide active repository."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import Any

from ._repository import ConfigRepository, EnvironRepository, Layer
from ._types import UNDEFINED, ConfigCastError, UndefinedValueError

_active: ConfigRepository | None = None


def set_repository(repo: ConfigRepository | None) -> None:
    global _active
    _active = repo


def get_repository() -> ConfigRepository | None:
    return _active


def active_repository() -> ConfigRepository:
    """The installed repository; an :class:`EnvironRepository` is installed on first use."""
    global _active
    if _active is None:
        _active = EnvironRepository()
    return _active


def lookup(repo: ConfigRepository, places: Iterable[tuple[Layer, str]]) -> Any:
    """First value found at ``places``, or ``UNDEFINED``."""
    for layer, name in places:
        value = repo.get(layer, name)
        if value is not None:
            return value
    return UNDEFINED


def places_for(key: str, env: str | None = None) -> list[tuple[Layer, str]]:
    head = [(Layer.ENV, env)] if env is not None else []
    return head + [(Layer.OVERRIDE, key), (Layer.SCENARIO, key)]


def config(
    key: str,
    *,
    default: Any = UNDEFINED,
    cast: Callable[[Any], Any] | None = None,
    env: str | None = None,
    repo: ConfigRepository | None = None,
) -> Any:
    """Resolve ``key``: the ``env`` variable, then the override, then the scenario value.

    A found value goes through ``cast``; a conversion failure raises
    :class:`ConfigCastError`. ``default`` is returned unconverted, and a key
    with neither raises :class:`UndefinedValueError`.
    """
    raw = lookup(repo or active_repository(), places_for(key, env))
    if raw is UNDEFINED:
        if default is UNDEFINED:
            raise UndefinedValueError(key)
        return default
    if cast is None:
        return raw
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigCastError(key, raw, str(exc)) from exc
