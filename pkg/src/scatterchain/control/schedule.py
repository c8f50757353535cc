"""Injection schedules and their timing annotations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..dynamics import Injection


@dataclass(frozen=True)
class ExpectedHit:
    """A steered disk hit: ``particle`` meets disk ``disk`` at ``time``."""

    particle: str
    disk: int
    time: float
    omega: float = math.nan


@dataclass(frozen=True)
class DriverWindow:
    """Span of the support injected to set ``disk`` before a steered hit.

    ``serves`` is the index into ``expected_hits`` of that hit, or ``None``
    for support that serves no tracer (phase setting, cleanup).
    """

    start: float
    end: float
    disk: int
    contact: float = math.nan
    serves: int | None = None


@dataclass(frozen=True)
class InjectionSchedule:
    injections: tuple[Injection, ...] = ()
    expected_hits: tuple[ExpectedHit, ...] = ()
    windows: tuple[DriverWindow, ...] = ()
    horizon: float = 0.0
    notes: dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "injections", tuple(self.injections))
        object.__setattr__(self, "expected_hits", tuple(self.expected_hits))
        object.__setattr__(self, "windows", tuple(self.windows))
        times = [inj.time for inj in self.injections]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError("Injections must be sorted by time")

    def __len__(self) -> int:
        return len(self.injections)

    @property
    def is_empty(self) -> bool:
        return not self.injections

    def ordering_violations(self) -> list[str]:
        """Windows serving hit ``i`` must open after hit ``i-1`` and close before hit ``i``."""
        problems = []
        hits = self.expected_hits
        for a, b in zip(hits, hits[1:]):
            if not a.time < b.time:
                problems.append(f"hits of {a.particle!r} and {b.particle!r} are not strictly ordered")
        for k, window in enumerate(self.windows):
            if window.serves is None:
                continue
            i = window.serves
            if not window.end < hits[i].time:
                problems.append(f"window {k} ends at {window.end!r}, after hit {i} at {hits[i].time!r}")
            if i > 0 and not hits[i - 1].time < window.start:
                problems.append(f"window {k} opens at {window.start!r}, before hit {i - 1}")
        return problems

    def merged(self, other: InjectionSchedule) -> InjectionSchedule:
        offset = len(self.expected_hits)
        windows = self.windows + tuple(
            DriverWindow(w.start, w.end, w.disk, w.contact, None if w.serves is None else w.serves + offset)
            for w in other.windows
        )
        return InjectionSchedule(
            injections=tuple(sorted(self.injections + other.injections, key=lambda i: i.time)),
            expected_hits=self.expected_hits + other.expected_hits,
            windows=windows,
            horizon=max(self.horizon, other.horizon),
        )
