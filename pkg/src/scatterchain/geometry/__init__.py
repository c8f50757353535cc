"""Cells of the dispersing-billiard class, their return map and illumination."""

from __future__ import annotations

from ._errors import (
    DiskTouchesWall,
    GeometryError,
    InvalidArcIndex,
    NonClosedBoundary,
    NonDispersingArc,
    NotStarShaped,
)
from ._raycast import LEFT, RIGHT, HitKind, RayHit, cast_ray, cast_rays
from .angles import TWO_PI, AngularIntervalSet, signed_angle, wrap_angle
from .cell import (
    ArcSpec,
    Cell,
    CellSpec,
    Chain,
    Point,
    angle_from_normal,
    build_cell,
    direction_at,
    disk_normal,
    disk_tangent,
)
from .illumination import (
    Controllability,
    ReturnTrip,
    fixed_point_direction,
    illuminate,
    is_one_controllable,
    return_map,
    return_map_many,
    return_trip,
)

__all__ = [
    "AngularIntervalSet",
    "ArcSpec",
    "Cell",
    "CellSpec",
    "Chain",
    "Controllability",
    "DiskTouchesWall",
    "GeometryError",
    "HitKind",
    "InvalidArcIndex",
    "LEFT",
    "NonClosedBoundary",
    "NonDispersingArc",
    "NotStarShaped",
    "Point",
    "RIGHT",
    "RayHit",
    "ReturnTrip",
    "TWO_PI",
    "angle_from_normal",
    "build_cell",
    "cast_ray",
    "cast_rays",
    "direction_at",
    "disk_normal",
    "disk_tangent",
    "fixed_point_direction",
    "illuminate",
    "is_one_controllable",
    "return_map",
    "return_map_many",
    "return_trip",
    "signed_angle",
    "wrap_angle",
]
