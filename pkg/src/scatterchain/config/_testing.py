"""Swapping the active repository inside tests."""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from typing import Any, TypeVar

from ._reader import get_repository, set_repository
from ._repository import ConfigRepository, FakeConfigRepository

_R = TypeVar("_R", bound=ConfigRepository)


@contextmanager
def use_repository(repo: _R) -> Iterator[_R]:
    """Make ``repo`` the active repository until the block exits."""
    saved = get_repository()
    set_repository(repo)
    try:
        yield repo
    finally:
        set_repository(saved)


@contextmanager
def override_config(
    *,
    overrides: Mapping[str, Any] | None = None,
    scenario: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> Iterator[FakeConfigRepository]:
    """Run the block against in-memory tables only::

        with override_config(overrides={"tangent": 1e-6}):
            assert Tolerances.load().tangent == 1e-6
    """
    with use_repository(FakeConfigRepository(env=env, overrides=overrides, scenario=scenario)) as fake:
        yield fake
