"""Phase-space types: disks, particles, injections and whole-system states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from ..geometry import Chain, Point, wrap_angle


class Role(str, Enum):
    RESIDENT = "resident"
    DRIVER = "driver"
    TRACER = "tracer"
    CONTROLLER = "controller"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class DiskState:
    """Angular position (clockwise, reduced mod 2π) and angular velocity."""

    phi: float = 0.0
    omega: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.phi) and math.isfinite(self.omega)):
            raise ValueError(f"Disk state must be finite, got ({self.phi}, {self.omega})")
        object.__setattr__(self, "phi", wrap_angle(float(self.phi)))
        object.__setattr__(self, "omega", float(self.omega))

    def advanced(self, dt: float) -> DiskState:
        return DiskState(self.phi + self.omega * dt, self.omega)


@dataclass(frozen=True)
class Particle:
    id: str
    cell_index: int
    q: Point
    v: Point
    role: Role = Role.RESIDENT

    @property
    def speed(self) -> float:
        return math.hypot(*self.v)


@dataclass(frozen=True)
class Injection:
    """A particle entering through a bath opening at ``time``."""

    time: float
    side: Side
    y: float
    v: Point
    role: Role = Role.DRIVER
    label: str = ""

    def __post_init__(self) -> None:
        if not all(math.isfinite(x) for x in (self.time, self.y, *self.v)):
            raise ValueError("Injection data must be finite")
        inward = self.v[0] > 0.0 if self.side is Side.LEFT else self.v[0] < 0.0
        if not inward:
            raise ValueError(f"Injection velocity {self.v} does not point into the system")


@dataclass(frozen=True)
class SystemState:
    """A point of the N-cell phase space at time ``t``."""

    t: float
    chain: Chain
    particles: tuple[Particle, ...] = ()
    disks: tuple[DiskState, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "particles", tuple(self.particles))
        disks = tuple(self.disks) or tuple(DiskState() for _ in range(self.chain.n_cells))
        if len(disks) != self.chain.n_cells:
            raise ValueError(f"Expected {self.chain.n_cells} disks, got {len(disks)}")
        object.__setattr__(self, "disks", disks)
        ids = [p.id for p in self.particles]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Particle ids must be unique, got {ids}")

    @classmethod
    def ground(cls, chain: Chain, t: float = 0.0) -> SystemState:
        return cls(t=t, chain=chain)

    @property
    def is_empty(self) -> bool:
        return not self.particles

    def with_disks(self, disks: tuple[DiskState, ...]) -> SystemState:
        return replace(self, disks=tuple(disks))


def energy(state: SystemState) -> float:
    """``Σ|v|² + Σω²``."""
    return math.fsum(
        [p.v[0] ** 2 + p.v[1] ** 2 for p in state.particles] + [d.omega**2 for d in state.disks]
    )


def reverse(state: SystemState) -> SystemState:
    """Negate every particle velocity and disk angular velocity."""
    return replace(
        state,
        particles=tuple(replace(p, v=(-p.v[0], -p.v[1])) for p in state.particles),
        disks=tuple(DiskState(d.phi, -d.omega) for d in state.disks),
    )
