"""Event-driven dynamics of particles in a chain of cells with rotating disks."""

from __future__ import annotations

from ._errors import (
    DynamicsError,
    NoEventWithinHorizon,
    NotIncoming,
    ScheduleError,
    TangentHit,
    UndefinedEvent,
    UndefinedKind,
)
from .collisions import (
    apply_disk_collision,
    apply_wall_collision,
    specular_omega,
    split_velocity,
    tangent_of,
)
from .engine import Simulation, next_event, simulate
from .events import Event, EventKind
from .kinematics import Flight, Outcome, contact_normal, injection_point, next_flight, resolve
from .state import DiskState, Injection, Particle, Role, Side, SystemState, energy, reverse

__all__ = [
    "DiskState",
    "DynamicsError",
    "Event",
    "EventKind",
    "Flight",
    "Injection",
    "NoEventWithinHorizon",
    "NotIncoming",
    "Outcome",
    "Particle",
    "Role",
    "ScheduleError",
    "Side",
    "Simulation",
    "SystemState",
    "TangentHit",
    "UndefinedEvent",
    "UndefinedKind",
    "apply_disk_collision",
    "apply_wall_collision",
    "contact_normal",
    "energy",
    "injection_point",
    "next_event",
    "next_flight",
    "resolve",
    "reverse",
    "simulate",
    "specular_omega",
    "split_velocity",
    "tangent_of",
]
