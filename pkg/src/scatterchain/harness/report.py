"""Verification reports written next to each run's trace."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, computed_field


class Residual(BaseModel):
    value: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.tolerance


class VerificationReport(BaseModel):
    """Outcome of one goal: passes when every named residual is within its tolerance."""

    scenario: str = ""
    goal: dict[str, Any] = Field(default_factory=dict)
    residuals: dict[str, Residual] = Field(default_factory=dict)
    details: dict[str, Any] = Field(default_factory=dict)
    trace_digest: str | None = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.residuals.values())

    def record(self, name: str, value: float, tolerance: float) -> None:
        self.residuals[name] = Residual(value=float(value), tolerance=float(tolerance))

    def failures(self) -> list[str]:
        return [
            f"{name}={r.value:.3g} > {r.tolerance:.3g}"
            for name, r in self.residuals.items()
            if not r.ok
        ]

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        name = self.scenario or "<scenario>"
        tail = "" if self.passed else ": " + ", ".join(self.failures())
        return f"{verdict} {name} [{self.goal.get('kind', '?')}]{tail}"

    def save(self, path: Path | str) -> None:
        Path(path).write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
