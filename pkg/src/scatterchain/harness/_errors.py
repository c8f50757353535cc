"""Harness exception family: bad input files."""

from __future__ import annotations

from pathlib import Path

from .._errors import ScatterChainError


class HarnessError(ScatterChainError):
    """Base exception for harness errors."""


class ScenarioError(HarnessError):
    """A scenario file failed to parse or validate; ``location`` names the field."""

    def __init__(self, path: Path | str, location: str, message: str) -> None:
        self.path = str(path)
        self.location = location
        self.message = message
        where = f" at {location}" if location else ""
        super().__init__(f"{self.path}{where}: {message}")


class TraceError(HarnessError):
    """A trace row could not be read back into an event."""

    def __init__(self, path: Path | str, row_index: int, message: str) -> None:
        self.path = str(path)
        self.row_index = row_index
        self.message = message
        super().__init__(f"{self.path}, row {row_index}: {message}")
