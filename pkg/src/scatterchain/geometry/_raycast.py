"""Ray casting against the pieces of one cell, in cell-local coordinates.

``cast_ray`` is the scalar version used by the simulator and the closed-loop
planner; ``cast_rays`` is its numpy counterpart for bulk sampling. Rays use
unit directions, so distances are lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .angles import TWO_PI
from .cell import Cell

# Roots closer than this multiple of L to the ray origin are the contact the
# ray starts from.
LOOKBACK = 1e-10


class HitKind(IntEnum):
    NONE = -1
    DISK = 0
    ARC = 1
    OPENING = 2


LEFT = 0
RIGHT = 1


@dataclass(frozen=True, slots=True)
class RayHit:
    """First boundary point met by a ray.

    ``index`` is the zero-based arc index for arcs, ``LEFT``/``RIGHT`` for
    openings and 0 for the disk.
    """

    kind: HitKind
    index: int
    distance: float
    x: float
    y: float
    corner: bool


def _circle_roots(
    ox: float, oy: float, ux: float, uy: float, cx: float, cy: float, radius: float
) -> tuple[float, float] | None:
    wx, wy = ox - cx, oy - cy
    b = ux * wx + uy * wy
    c = wx * wx + wy * wy - radius * radius
    disc = b * b - c
    if disc < 0.0:
        return None
    q = -(b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return (0.0, 0.0)
    s1, s2 = q, c / q
    return (s1, s2) if s1 <= s2 else (s2, s1)


def cast_ray(
    cell: Cell,
    ox: float,
    oy: float,
    ux: float,
    uy: float,
    *,
    include_disk: bool = True,
    lookback: float | None = None,
) -> RayHit | None:
    """First intersection of the ray ``o + s·u`` (``s > lookback``) with the boundary."""
    spec = cell.spec
    s_min = LOOKBACK * spec.width if lookback is None else lookback
    best = math.inf
    kind = HitKind.NONE
    index = 0

    if include_disk:
        cx, cy = spec.disk_center
        roots = _circle_roots(ox, oy, ux, uy, cx, cy, spec.disk_radius)
        if roots is not None:
            for s in roots:
                if s > s_min:
                    best, kind = s, HitKind.DISK
                    break

    for k, arc in enumerate(spec.arcs):
        roots = _circle_roots(ox, oy, ux, uy, arc.center[0], arc.center[1], arc.radius)
        if roots is None:
            continue
        slack = cell.corner_radius / arc.radius
        for s in roots:
            if s <= s_min or s >= best:
                continue
            psi = math.atan2(oy + s * uy - arc.center[1], ox + s * ux - arc.center[0])
            if arc.contains_angle(psi, slack):
                best, kind, index = s, HitKind.ARC, k
                break

    a = spec.opening_half_height + cell.corner_radius
    if ux < 0.0:
        s = -ox / ux
        if s_min < s < best and abs(oy + s * uy) <= a:
            best, kind, index = s, HitKind.OPENING, LEFT
    elif ux > 0.0:
        s = (spec.width - ox) / ux
        if s_min < s < best and abs(oy + s * uy) <= a:
            best, kind, index = s, HitKind.OPENING, RIGHT

    if kind is HitKind.NONE:
        return None
    x, y = ox + best * ux, oy + best * uy
    if kind is HitKind.OPENING:
        x = 0.0 if index == LEFT else spec.width
    corner = any(math.hypot(x - px, y - py) < cell.corner_radius for px, py in cell.corner_points)
    return RayHit(kind, index, best, x, y, corner)


# ---------------------------------------------------------------------------
# Vectorized
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RayHits:
    kind: np.ndarray
    index: np.ndarray
    distance: np.ndarray
    x: np.ndarray
    y: np.ndarray
    corner: np.ndarray


def _circle_roots_many(ox, oy, ux, uy, cx, cy, radius):
    wx, wy = ox - cx, oy - cy
    b = ux * wx + uy * wy
    c = wx * wx + wy * wy - radius * radius
    disc = b * b - c
    sq = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
    q = -(b + np.copysign(sq, b))
    safe_q = np.where(q == 0.0, 1.0, q)
    other = np.where(q == 0.0, 0.0, c / safe_q)
    return np.minimum(q, other), np.maximum(q, other)


def cast_rays(
    cell: Cell,
    ox: np.ndarray,
    oy: np.ndarray,
    ux: np.ndarray,
    uy: np.ndarray,
    *,
    include_disk: bool = True,
    lookback: float | None = None,
) -> RayHits:
    """Vectorized :func:`cast_ray`; misses carry ``HitKind.NONE`` and ``inf`` distance."""
    spec = cell.spec
    s_min = LOOKBACK * spec.width if lookback is None else lookback
    ox, oy, ux, uy = (np.asarray(v, dtype=float) for v in (ox, oy, ux, uy))
    best = np.full(ox.shape, np.inf)
    kind = np.full(ox.shape, int(HitKind.NONE), dtype=np.int8)
    index = np.zeros(ox.shape, dtype=np.int64)

    with np.errstate(invalid="ignore", divide="ignore"):
        if include_disk:
            cx, cy = spec.disk_center
            lo, hi = _circle_roots_many(ox, oy, ux, uy, cx, cy, spec.disk_radius)
            s = np.where(lo > s_min, lo, np.where(hi > s_min, hi, np.inf))
            take = s < best
            best = np.where(take, s, best)
            kind = np.where(take, int(HitKind.DISK), kind).astype(np.int8)

        for k, arc in enumerate(spec.arcs):
            lo, hi = _circle_roots_many(ox, oy, ux, uy, arc.center[0], arc.center[1], arc.radius)
            slack = cell.corner_radius / arc.radius
            for s in (hi, lo):
                psi = np.arctan2(oy + s * uy - arc.center[1], ox + s * ux - arc.center[0])
                rel = np.mod(psi - arc.start, TWO_PI)
                inside = (rel <= arc.width + slack) | (rel >= TWO_PI - slack)
                take = (s > s_min) & (s < best) & inside
                best = np.where(take, s, best)
                kind = np.where(take, int(HitKind.ARC), kind).astype(np.int8)
                index = np.where(take, k, index)

        a = spec.opening_half_height + cell.corner_radius
        s_left = np.where(ux < 0.0, -ox / ux, np.inf)
        take = (s_left > s_min) & (s_left < best) & (np.abs(oy + s_left * uy) <= a)
        best = np.where(take, s_left, best)
        kind = np.where(take, int(HitKind.OPENING), kind).astype(np.int8)
        index = np.where(take, LEFT, index)

        s_right = np.where(ux > 0.0, (spec.width - ox) / ux, np.inf)
        take = (s_right > s_min) & (s_right < best) & (np.abs(oy + s_right * uy) <= a)
        best = np.where(take, s_right, best)
        kind = np.where(take, int(HitKind.OPENING), kind).astype(np.int8)
        index = np.where(take, RIGHT, index)

        x = ox + best * ux
        y = oy + best * uy

    corner = np.zeros(ox.shape, dtype=bool)
    for px, py in cell.corner_points:
        corner |= np.hypot(x - px, y - py) < cell.corner_radius
    return RayHits(kind=kind, index=index, distance=best, x=x, y=y, corner=corner)
