"""Where raw config values come from.

A repository answers one question: what does ``layer`` say about ``key``?
Layers are consulted from the most to the least specific: the process
environment, ``--tolerance`` flags, then the scenario's ``tolerances``
table.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from enum import Enum
from typing import Any, Protocol, runtime_checkable


class Layer(str, Enum):
    ENV = "env"
    OVERRIDE = "override"
    SCENARIO = "scenario"


@runtime_checkable
class ConfigRepository(Protocol):
    def get(self, layer: Layer, key: str) -> Any:
        """Raw value of ``key`` in ``layer``, or ``None`` when absent."""
        ...


class _Tables:
    def __init__(
        self,
        env: Mapping[str, str],
        overrides: Mapping[str, Any] | None,
        scenario: Mapping[str, Any] | None,
    ) -> None:
        self.tables: dict[Layer, Mapping[str, Any]] = {
            Layer.ENV: env,
            Layer.OVERRIDE: dict(overrides or {}),
            Layer.SCENARIO: dict(scenario or {}),
        }

    def get(self, layer: Layer, key: str) -> Any:
        return self.tables[layer].get(key)


class EnvironRepository(_Tables):
    """``os.environ`` (or ``environ``) under the flag and scenario tables of one run."""

    def __init__(
        self,
        overrides: Mapping[str, Any] | None = None,
        scenario: Mapping[str, Any] | None = None,
        environ: Mapping[str, str] | None = None,
    ) -> None:
        super().__init__(os.environ if environ is None else environ, overrides, scenario)


class FakeConfigRepository(_Tables):
    """In-memory tables for tests; the real environment is never read.

    >>> repo = FakeConfigRepository(scenario={"tangent": 1e-8})
    >>> repo.get(Layer.SCENARIO, "tangent")
    1e-08
    """

    def __init__(
        self,
        env: Mapping[str, str] | None = None,
        overrides: Mapping[str, Any] | None = None,
        scenario: Mapping[str, Any] | None = None,
    ) -> None:
        super().__init__(dict(env or {}), overrides, scenario)

    def set(self, layer: Layer, key: str, value: Any) -> None:
        table = self.tables[layer]
        assert isinstance(table, dict)
        table[key] = value
