"""Collision rules at walls and at the rotating disk."""

from __future__ import annotations

import math

from ..geometry import Point
from ._errors import NotIncoming, TangentHit
from .state import DiskState


def apply_wall_collision(v: Point, normal: Point) -> Point:
    """Specular reflection; ``normal`` is the unit normal pointing into the cell."""
    vn = v[0] * normal[0] + v[1] * normal[1]
    if vn >= 0.0:
        raise NotIncoming(vn)
    return (v[0] - 2.0 * vn * normal[0], v[1] - 2.0 * vn * normal[1])


def tangent_of(normal: Point) -> Point:
    """Unit tangent oriented with the rim velocity of a positively spinning disk."""
    return (normal[1], -normal[0])


def split_velocity(v: Point, normal: Point) -> tuple[float, float]:
    """Normal and tangential components of ``v`` at a disk contact."""
    tx, ty = tangent_of(normal)
    return v[0] * normal[0] + v[1] * normal[1], v[0] * tx + v[1] * ty


def apply_disk_collision(
    v: Point, disk: DiskState, normal: Point, *, tangent_tol: float = 0.0
) -> tuple[Point, DiskState]:
    """Negate the normal component and swap the tangential one with ``ω``.

    ``normal`` is the disk's outward unit normal at the contact.
    """
    vn, vt = split_velocity(v, normal)
    speed = math.hypot(*v)
    if vn >= 0.0:
        raise NotIncoming(vn)
    if -vn < tangent_tol * speed:
        raise TangentHit(vn, speed)
    tx, ty = tangent_of(normal)
    omega = disk.omega
    v_after = (-vn * normal[0] + omega * tx, -vn * normal[1] + omega * ty)
    return v_after, DiskState(disk.phi, vt)


def specular_omega(v: Point, normal: Point) -> float:
    """The disk velocity for which the next collision reflects ``v`` specularly."""
    return split_velocity(v, normal)[1]
