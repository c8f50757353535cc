"""Event records emitted by the simulator."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..geometry import Point
from .state import DiskState, Side


class EventKind(str, Enum):
    WALL_HIT = "WallHit"
    DISK_HIT = "DiskHit"
    CELL_TRANSFER = "CellTransfer"
    EXIT = "Exit"
    INJECTION = "Injection"


@dataclass(frozen=True)
class Event:
    """One boundary event.

    ``cell_index`` is the cell the particle occupies after the event (before
    it, for exits). ``arc`` is zero-based; ``disk`` is the 1-based disk index.
    """

    time: float
    kind: EventKind
    particle: str
    cell_index: int
    point: Point
    v_before: Point
    v_after: Point
    arc: int | None = None
    disk: int | None = None
    side: Side | None = None
    disk_before: DiskState | None = None
    disk_after: DiskState | None = None
