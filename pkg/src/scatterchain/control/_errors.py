"""Synthesis exception family."""

from __future__ import annotations

from .._errors import ScatterChainError


class SynthesisError(ScatterChainError):
    """Base exception for schedule synthesis errors."""


class NoLineOfSight(SynthesisError):
    def __init__(self, start: tuple[float, float], target: tuple[float, float], blocker: str) -> None:
        self.start = start
        self.target = target
        self.blocker = blocker
        super().__init__(f"No line of sight from {start} to {target}: blocked by {blocker}.")


class InfeasibleDelta(SynthesisError):
    def __init__(self, delta: float, bound: float, reason: str = "") -> None:
        self.delta = delta
        self.bound = bound
        suffix = f" ({reason})" if reason else ""
        super().__init__(f"Time {delta!r} violates the bound {bound!r}{suffix}.")


class DegenerateWindow(SynthesisError):
    def __init__(self, width: float) -> None:
        self.width = width
        super().__init__(f"Contact window of width {width!r} is below the timing tolerance.")


class NearTangent(SynthesisError):
    def __init__(self, alpha: float) -> None:
        self.alpha = alpha
        super().__init__(f"Outgoing angle {alpha!r} is too close to tangent.")


class NotOneControllable(SynthesisError):
    def __init__(self, witness: float) -> None:
        self.witness = witness
        super().__init__(f"Cell is not 1-controllable (uncovered disk angle near {witness!r}).")


class SearchExhausted(SynthesisError):
    def __init__(self, theta: float, samples: int) -> None:
        self.theta = theta
        self.samples = samples
        super().__init__(f"No hop route from θ={theta!r} on a grid of {samples} angles.")


class WindowTooShort(SynthesisError):
    def __init__(self, start: float, end: float, needed: float | None = None) -> None:
        self.start = start
        self.end = end
        self.needed = needed
        detail = f"; activity reaches t={needed!r}" if needed is not None else ""
        super().__init__(f"Window ({start!r}, {end!r}) is too short{detail}.")


class LambdaOverflow(SynthesisError):
    def __init__(self, cap: float, disk: int) -> None:
        self.cap = cap
        self.disk = disk
        super().__init__(f"No feasible speed factor below {cap!r} for disk {disk}.")


class RootNotBracketed(SynthesisError):
    def __init__(self, target: float, low: float, high: float) -> None:
        self.target = target
        self.low = low
        self.high = high
        super().__init__(f"Target {target!r} lies outside the reachable range [{low!r}, {high!r}].")


class SchedulingConflict(SynthesisError):
    def __init__(self, time: float, detail: str) -> None:
        self.time = time
        self.detail = detail
        super().__init__(f"Scheduling conflict at t={time!r}: {detail}")


class InadmissibleState(SynthesisError):
    def __init__(self, report: object) -> None:
        self.report = report
        super().__init__(f"State is not admissible: {report}")
