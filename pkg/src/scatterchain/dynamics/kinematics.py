"""Single-particle free flight between boundary events.

The simulator and the control planner both advance particles through
these functions, so a planned trajectory and its replay perform identical
floating-point operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..geometry import LEFT, Chain, HitKind, Point, RayHit, cast_ray
from ._errors import UndefinedEvent, UndefinedKind
from .collisions import apply_disk_collision, apply_wall_collision
from .state import DiskState, Side


@dataclass(frozen=True, slots=True)
class Flight:
    """Straight flight from a reference point to the next boundary point."""

    dt: float
    hit: RayHit
    cell_index: int
    point: Point


def next_flight(chain: Chain, cell_index: int, q: Point, v: Point) -> Flight | None:
    """Flight from ``q`` (global) with velocity ``v``; ``None`` for a particle at rest."""
    speed = math.hypot(v[0], v[1])
    if speed == 0.0:
        return None
    offset = chain.offset(cell_index)
    hit = cast_ray(chain.cell, q[0] - offset, q[1], v[0] / speed, v[1] / speed)
    if hit is None:
        return Flight(math.inf, RayHit(HitKind.NONE, 0, math.inf, math.nan, math.nan, True), cell_index, q)
    return Flight(hit.distance / speed, hit, cell_index, (hit.x + offset, hit.y))


@dataclass(frozen=True, slots=True)
class Outcome:
    """Result of resolving a flight's end point.

    ``exit_side`` is set when the particle leaves the chain; ``disk`` holds
    the new disk state after a disk hit.
    """

    v: Point
    cell_index: int
    disk: DiskState | None = None
    exit_side: Side | None = None


def resolve(
    chain: Chain,
    flight: Flight,
    v: Point,
    disk: DiskState | None,
    *,
    time: float,
    particle: str,
    tangent_tol: float,
) -> Outcome:
    """Apply the boundary rule at the end of ``flight``.

    ``disk`` is the state of the flight cell's disk, used on disk hits.
    """
    hit = flight.hit
    if hit.kind is HitKind.NONE or hit.corner:
        raise UndefinedEvent(UndefinedKind.CORNER, time, particle, f"near {flight.point}")
    spec = chain.cell.spec
    if hit.kind is HitKind.ARC:
        arc = spec.arcs[hit.index]
        normal = ((hit.x - arc.center[0]) / arc.radius, (hit.y - arc.center[1]) / arc.radius)
        return Outcome(apply_wall_collision(v, normal), flight.cell_index)
    if hit.kind is HitKind.DISK:
        cx, _ = spec.disk_center
        r = spec.disk_radius
        normal = ((hit.x - cx) / r, hit.y / r)
        vn = v[0] * normal[0] + v[1] * normal[1]
        if -vn < tangent_tol * math.hypot(v[0], v[1]):
            raise UndefinedEvent(UndefinedKind.TANGENT_DISK, time, particle, f"v_n={vn!r}")
        v_after, disk_after = apply_disk_collision(v, disk or DiskState(), normal)
        return Outcome(v_after, flight.cell_index, disk=disk_after)
    if hit.index == LEFT:
        if flight.cell_index == 1:
            return Outcome(v, flight.cell_index, exit_side=Side.LEFT)
        return Outcome(v, flight.cell_index - 1)
    if flight.cell_index == chain.n_cells:
        return Outcome(v, flight.cell_index, exit_side=Side.RIGHT)
    return Outcome(v, flight.cell_index + 1)


def contact_normal(chain: Chain, cell_index: int, point: Point) -> Point:
    """Outward disk normal at a contact point given in global coordinates."""
    cx, _ = chain.disk_center(cell_index)
    r = chain.cell.spec.disk_radius
    return ((point[0] - cx) / r, point[1] / r)


def injection_point(chain: Chain, side: Side, y: float) -> tuple[int, Point]:
    if side is Side.LEFT:
        return 1, (0.0, y)
    return chain.n_cells, (chain.length, y)
