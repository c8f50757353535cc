"""Dynamics exception family."""

from __future__ import annotations

from enum import Enum

from .._errors import ScatterChainError


class DynamicsError(ScatterChainError):
    """Base exception for dynamics errors."""


class UndefinedKind(str, Enum):
    CORNER = "corner"
    TANGENT_DISK = "tangent-disk"
    SIMULTANEOUS_DISK_HIT = "simultaneous-disk-hit"


class UndefinedEvent(DynamicsError):
    """The flow is not defined past this event; the state was inadmissible."""

    def __init__(self, kind: UndefinedKind, time: float, particle: str, detail: str = "") -> None:
        self.kind = kind
        self.time = time
        self.particle = particle
        self.detail = detail
        suffix = f" ({detail})" if detail else ""
        super().__init__(f"Undefined {kind.value} event at t={time!r} for particle {particle!r}{suffix}")


class NotIncoming(DynamicsError):
    def __init__(self, normal_component: float) -> None:
        self.normal_component = normal_component
        super().__init__(
            f"Velocity is not incoming: normal component {normal_component!r} must be negative."
        )


class TangentHit(DynamicsError):
    def __init__(self, normal_component: float, speed: float) -> None:
        self.normal_component = normal_component
        self.speed = speed
        super().__init__(
            f"Disk collision is tangent: |v_n|={abs(normal_component):.3g} at speed {speed:.3g}."
        )


class NoEventWithinHorizon(DynamicsError):
    def __init__(self, horizon: float) -> None:
        self.horizon = horizon
        super().__init__(f"No event occurs before t={horizon!r}.")


class ScheduleError(DynamicsError):
    """An injection schedule cannot be replayed as given."""
