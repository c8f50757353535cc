"""Return map, illuminated segments and 1-controllability."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import Tolerances
from ._errors import InvalidArcIndex
from ._raycast import HitKind, cast_ray, cast_rays
from .angles import TWO_PI, AngularIntervalSet, wrap_angle
from .cell import Cell, Point, direction_at, disk_normal, disk_tangent

_logger = logging.getLogger(__name__)

_BISECTIONS = 48


@dataclass(frozen=True, slots=True)
class ReturnTrip:
    """Disk-to-disk flight with one wall reflection."""

    theta: float
    arc: int
    wall_point: Point
    landing_cos: float


def return_trip(
    cell: Cell, theta: float, alpha: float, *, tolerances: Tolerances | None = None
) -> ReturnTrip | None:
    """Follow the ray leaving the disk at ``theta`` in direction ``alpha``.

    Returns ``None`` unless the ray reflects exactly once, on an arc away
    from every corner, and lands on the disk non-tangentially.
    """
    if not abs(alpha) < 0.5 * math.pi:
        return None
    tangent_tol = (tolerances or Tolerances.load()).tangent
    px, py = cell.disk_point(theta)
    ux, uy = direction_at(theta, alpha)
    wall = cast_ray(cell, px, py, ux, uy)
    if wall is None or wall.kind is not HitKind.ARC or wall.corner:
        return None
    arc = cell.arcs[wall.index]
    nx = (wall.x - arc.center[0]) / arc.radius
    ny = (wall.y - arc.center[1]) / arc.radius
    dot = ux * nx + uy * ny
    rx, ry = ux - 2.0 * dot * nx, uy - 2.0 * dot * ny
    landing = cast_ray(cell, wall.x, wall.y, rx, ry)
    if landing is None or landing.kind is not HitKind.DISK or landing.corner:
        return None
    theta_out = cell.disk_angle(landing.x, landing.y)
    lnx, lny = disk_normal(theta_out)
    landing_cos = -(rx * lnx + ry * lny)
    if landing_cos < tangent_tol:
        return None
    return ReturnTrip(theta_out, wall.index, (wall.x, wall.y), landing_cos)


def return_map(
    cell: Cell, theta: float, alpha: float, *, tolerances: Tolerances | None = None
) -> float | None:
    """``R(θ, α)``, or ``None`` where the map is undefined."""
    trip = return_trip(cell, theta, alpha, tolerances=tolerances)
    return None if trip is None else trip.theta


def return_map_many(
    cell: Cell, thetas: np.ndarray, alphas: np.ndarray, *, tangent_tol: float = 1e-9
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized return map: landing angles (``nan`` when undefined) and arc indices."""
    thetas, alphas = np.broadcast_arrays(np.asarray(thetas, float), np.asarray(alphas, float))
    cx, _ = cell.spec.disk_center
    r = cell.spec.disk_radius
    nx, ny = np.cos(thetas), -np.sin(thetas)
    tx, ty = -np.sin(thetas), -np.cos(thetas)
    ca, sa = np.cos(alphas), np.sin(alphas)
    ux, uy = ca * nx + sa * tx, ca * ny + sa * ty
    first = cast_rays(cell, cx + r * nx, r * ny, ux, uy)
    ok = (first.kind == HitKind.ARC) & ~first.corner & (np.abs(alphas) < 0.5 * math.pi)

    centers = np.array([arc.center for arc in cell.arcs] or [(0.0, 0.0)])
    radii = np.array([arc.radius for arc in cell.arcs] or [1.0])
    arc_index = np.where(ok, first.index, 0)
    wnx = (first.x - centers[arc_index, 0]) / radii[arc_index]
    wny = (first.y - centers[arc_index, 1]) / radii[arc_index]
    dot = ux * wnx + uy * wny
    rx, ry = ux - 2.0 * dot * wnx, uy - 2.0 * dot * wny
    with np.errstate(invalid="ignore"):
        second = cast_rays(
            cell, np.where(ok, first.x, cx), np.where(ok, first.y, 0.0), rx, ry
        )
    ok &= (second.kind == HitKind.DISK) & ~second.corner
    landing = np.mod(np.arctan2(-second.y, second.x - cx), TWO_PI)
    lnx, lny = np.cos(landing), -np.sin(landing)
    ok &= -(rx * lnx + ry * lny) >= tangent_tol
    return np.where(ok, landing, np.nan), np.where(ok, arc_index, -1)


# ---------------------------------------------------------------------------
# Fixed points and illumination
# ---------------------------------------------------------------------------


def _check_arc(cell: Cell, k: int) -> int:
    if not 1 <= k <= len(cell.arcs):
        raise InvalidArcIndex(k, len(cell.arcs))
    return k - 1


def fixed_point_direction(cell: Cell, theta: float, k: int) -> float:
    """``α_k(θ)``: the outward direction along the line through the disk point and ``c_k``."""
    arc = cell.arcs[_check_arc(cell, k)]
    px, py = cell.disk_point(theta)
    wx, wy = arc.center[0] - px, arc.center[1] - py
    nx, ny = disk_normal(theta)
    tx, ty = disk_tangent(theta)
    along_n = wx * nx + wy * ny
    if along_n < 0.0:
        wx, wy, along_n = -wx, -wy, -along_n
    return math.atan2(wx * tx + wy * ty, along_n)


def _lit_many(cell: Cell, k0: int, thetas: np.ndarray, tangent_tol: float) -> np.ndarray:
    arc = cell.arcs[k0]
    cx, _ = cell.spec.disk_center
    r = cell.spec.disk_radius
    nx, ny = np.cos(thetas), -np.sin(thetas)
    px, py = cx + r * nx, r * ny
    wx, wy = arc.center[0] - px, arc.center[1] - py
    norm = np.hypot(wx, wy)
    along = (wx * nx + wy * ny) / norm
    flip = np.where(along < 0.0, -1.0, 1.0)
    ux, uy = flip * wx / norm, flip * wy / norm
    hits = cast_rays(cell, px, py, ux, uy)
    return (
        (np.abs(along) > tangent_tol)
        & (hits.kind == HitKind.ARC)
        & (hits.index == k0)
        & ~hits.corner
    )


def _lit(cell: Cell, k0: int, theta: float, tangent_tol: float) -> bool:
    return bool(_lit_many(cell, k0, np.array([theta]), tangent_tol)[0])


def _refine(cell: Cell, k0: int, lit_at: float, dark_at: float, tangent_tol: float) -> float:
    for _ in range(_BISECTIONS):
        mid = 0.5 * (lit_at + dark_at)
        if _lit(cell, k0, mid, tangent_tol):
            lit_at = mid
        else:
            dark_at = mid
    return lit_at


def illuminate(cell: Cell, k: int, *, tolerances: Tolerances | None = None) -> AngularIntervalSet:
    """``I_k``: disk angles whose ray toward ``c_k`` first meets arc ``k``."""
    tol = tolerances or Tolerances.load()
    k0 = _check_arc(cell, k)
    count = tol.angular_samples
    thetas = TWO_PI * np.arange(count) / count
    lit = _lit_many(cell, k0, thetas, tol.tangent)
    if lit.all():
        return AngularIntervalSet.full(slack=tol.angle)
    if not lit.any():
        return AngularIntervalSet.empty(slack=tol.angle)

    step = TWO_PI / count
    # rotate so that sample 0 is dark and runs never wrap
    shift = int(np.flatnonzero(~lit)[0])
    order = np.roll(np.arange(count), -shift)
    rolled = lit[order]
    intervals: list[tuple[float, float]] = []
    i = 0
    while i < count:
        if not rolled[i]:
            i += 1
            continue
        j = i
        while j + 1 < count and rolled[j + 1]:
            j += 1
        first = thetas[order[i]]
        last = first + (j - i) * step
        lo = _refine(cell, k0, first, first - step, tol.tangent)
        hi = _refine(cell, k0, last, last + step, tol.tangent)
        intervals.append((lo, hi))
        i = j + 1
    result = AngularIntervalSet.from_intervals(intervals, slack=tol.angle)
    _logger.debug("I_%d has %d interval(s), measure %.6f", k, len(result), result.measure)
    return result


@dataclass(frozen=True)
class Controllability:
    """Verdict of :func:`is_one_controllable` with its supporting data.

    ``witness`` is ``None`` exactly when the cell is controllable.
    """

    controllable: bool
    witness: float | None
    illuminated: tuple[AngularIntervalSet, ...]
    coverage: AngularIntervalSet

    def __bool__(self) -> bool:
        return self.controllable


def _thinnest_point(illuminated: tuple[AngularIntervalSet, ...]) -> float:
    """Segment endpoint lying in the fewest illuminated segments."""
    ends = [wrap_angle(end) for segment in illuminated for piece in segment for end in piece]
    if not ends:
        return 0.0
    return min(ends, key=lambda theta: (sum(theta in segment for segment in illuminated), theta))


def is_one_controllable(cell: Cell, *, tolerances: Tolerances | None = None) -> Controllability:
    """Whether the illuminated segments cover the disk; else a witness angle.

    The witness is the middle of the largest uncovered piece. A cell with
    fewer than three arcs is never controllable; when its segments still
    cover the disk up to tolerance, the witness is the segment endpoint
    lit by the fewest segments.
    """
    tol = tolerances or Tolerances.load()
    illuminated = tuple(illuminate(cell, k, tolerances=tol) for k in range(1, len(cell.arcs) + 1))
    coverage = AngularIntervalSet.empty(slack=tol.angle)
    for segment in illuminated:
        coverage = coverage.union(segment)
    uncovered = coverage.complement()
    covered = uncovered.measure < tol.coverage
    controllable = covered and len(cell.arcs) >= 3
    if controllable:
        return Controllability(True, None, illuminated, coverage)
    witness = uncovered.midpoint_of_largest()
    if witness is None:
        witness = _thinnest_point(illuminated)
    _logger.info("Cell is not 1-controllable (witness θ=%.6f)", witness)
    return Controllability(False, witness, illuminated, coverage)
