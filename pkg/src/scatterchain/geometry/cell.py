"""Cell geometry: declarative specs, validated cells and chains of cells.

Disk angles ``θ`` are measured clockwise from the +x axis, the same sense
as the disk's angular position. At the disk point ``θ`` the outward normal
is ``n = (cos θ, -sin θ)`` and the unit tangent ``e_t = (-sin θ, -cos θ)``
points toward increasing ``θ``, so the rim of a disk spinning with
positive ``ω`` moves with velocity ``ω·e_t``. Outgoing directions are
angles ``α`` measured from ``n`` toward ``e_t``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..config import Tolerances
from ._errors import DiskTouchesWall, NonClosedBoundary, NonDispersingArc, NotStarShaped
from .angles import TWO_PI, wrap_angle

_logger = logging.getLogger(__name__)

Point = tuple[float, float]

_CLOSURE_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArcSpec:
    """Arc of the circle ``C_k`` present on the cell boundary.

    ``angular_span`` is a counter-clockwise pair ``(start, end)`` of standard
    polar angles around ``center``; ``end - start`` lies in ``(0, 2π]``.
    """

    center: Point
    radius: float
    angular_span: tuple[float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(
            self, "angular_span", (float(self.angular_span[0]), float(self.angular_span[1]))
        )
        values = (*self.center, self.radius, *self.angular_span)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"Arc parameters must be finite, got {values}")
        if self.radius <= 0:
            raise ValueError(f"Arc radius must be positive, got {self.radius}")
        if not 0.0 < self.width <= TWO_PI:
            raise ValueError(f"Arc span {self.angular_span} must have length in (0, 2π]")

    @property
    def start(self) -> float:
        return self.angular_span[0]

    @property
    def width(self) -> float:
        return self.angular_span[1] - self.angular_span[0]

    @property
    def length(self) -> float:
        return self.radius * self.width

    def point(self, psi: float) -> Point:
        return (
            self.center[0] + self.radius * math.cos(psi),
            self.center[1] + self.radius * math.sin(psi),
        )

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return self.point(self.angular_span[0]), self.point(self.angular_span[1])

    def contains_angle(self, psi: float, slack: float = 0.0) -> bool:
        rel = (psi - self.start) % TWO_PI
        return rel <= self.width + slack or rel >= TWO_PI - slack

    def sample(self, count: int) -> np.ndarray:
        """``count`` points strictly inside the arc, shape ``(count, 2)``."""
        psi = self.start + self.width * (np.arange(count) + 0.5) / count
        return np.column_stack(
            (self.center[0] + self.radius * np.cos(psi), self.center[1] + self.radius * np.sin(psi))
        )


@dataclass(frozen=True)
class CellSpec:
    """Declarative cell: openings ``{0, L} x [-a, a]`` and a disk at ``(L/2, 0)``."""

    width: float
    opening_half_height: float
    disk_radius: float
    arcs: tuple[ArcSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(self.arcs))
        values = (self.width, self.opening_half_height, self.disk_radius)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"Cell parameters must be finite, got {values}")
        if self.width <= 0 or self.opening_half_height <= 0 or self.disk_radius <= 0:
            raise ValueError(f"Cell width, opening and disk radius must be positive, got {values}")

    @property
    def disk_center(self) -> Point:
        return (0.5 * self.width, 0.0)

    @property
    def d(self) -> float:
        """Abscissa of the leftmost disk point."""
        return 0.5 * self.width - self.disk_radius

    @property
    def opening_endpoints(self) -> tuple[Point, Point, Point, Point]:
        a, width = self.opening_half_height, self.width
        return ((0.0, -a), (0.0, a), (width, -a), (width, a))


@dataclass(frozen=True)
class Cell:
    """A validated cell. ``corner_points`` is the set of arc and opening endpoints."""

    spec: CellSpec
    corner_points: tuple[Point, ...]
    validated: bool
    corner_radius: float

    @property
    def arcs(self) -> tuple[ArcSpec, ...]:
        return self.spec.arcs

    # -- disk frame ---------------------------------------------------------

    def disk_point(self, theta: float) -> Point:
        r = self.spec.disk_radius
        return (0.5 * self.spec.width + r * math.cos(theta), -r * math.sin(theta))

    def disk_angle(self, x: float, y: float) -> float:
        return wrap_angle(math.atan2(-y, x - 0.5 * self.spec.width))


def disk_normal(theta: float) -> Point:
    return (math.cos(theta), -math.sin(theta))


def disk_tangent(theta: float) -> Point:
    return (-math.sin(theta), -math.cos(theta))


def direction_at(theta: float, alpha: float) -> Point:
    """Unit direction leaving the disk point ``theta`` at angle ``alpha``."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    ct, st = math.cos(theta), math.sin(theta)
    return (ca * ct - sa * st, -ca * st - sa * ct)


def angle_from_normal(theta: float, ux: float, uy: float) -> float:
    """Inverse of :func:`direction_at` for an arbitrary vector."""
    nx, ny = disk_normal(theta)
    tx, ty = disk_tangent(theta)
    return math.atan2(ux * tx + uy * ty, ux * nx + uy * ny)


# ---------------------------------------------------------------------------
# Chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    """``n_cells`` copies of ``cell`` placed side by side.

    Cell ``j`` (1-based) spans ``x ∈ [(j-1)L, jL]``; interior openings are
    transparent and only the outer two lead to the baths.
    """

    cell: Cell
    n_cells: int = 1

    def __post_init__(self) -> None:
        if self.n_cells < 1:
            raise ValueError(f"A chain needs at least one cell, got {self.n_cells}")

    @property
    def width(self) -> float:
        return self.cell.spec.width

    @property
    def length(self) -> float:
        return self.n_cells * self.cell.spec.width

    def offset(self, j: int) -> float:
        return (j - 1) * self.cell.spec.width

    def disk_center(self, j: int) -> Point:
        return (self.offset(j) + 0.5 * self.cell.spec.width, 0.0)

    def disk_point(self, j: int, theta: float) -> Point:
        x, y = self.cell.disk_point(theta)
        return (x + self.offset(j), y)

    def disk_angle(self, j: int, x: float, y: float) -> float:
        return self.cell.disk_angle(x - self.offset(j), y)

    def leftmost(self, j: int) -> Point:
        return (self.offset(j) + self.cell.spec.d, 0.0)

    def rightmost(self, j: int) -> Point:
        return (self.offset(j) + self.cell.spec.width - self.cell.spec.d, 0.0)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _pieces(spec: CellSpec) -> list[tuple[Point, Point]]:
    a, width = spec.opening_half_height, spec.width
    pieces = [arc.endpoints for arc in spec.arcs]
    pieces.append(((0.0, -a), (0.0, a)))
    pieces.append(((width, -a), (width, a)))
    return pieces


def _check_closed(spec: CellSpec) -> None:
    """Every endpoint must meet exactly one endpoint of another piece, in one cycle."""
    pieces = _pieces(spec)
    tol = _CLOSURE_TOLERANCE * spec.width
    neighbours: dict[tuple[int, int], tuple[int, int]] = {}
    for i, piece in enumerate(pieces):
        for end, point in enumerate(piece):
            matches = [
                (j, other_end)
                for j, other in enumerate(pieces)
                if j != i
                for other_end, q in enumerate(other)
                if math.dist(point, q) <= tol
            ]
            if len(matches) != 1:
                gaps = [
                    math.dist(point, q) for j, other in enumerate(pieces) if j != i for q in other
                ]
                raise NonClosedBoundary(min(gaps) if gaps else math.inf, point)
            neighbours[(i, end)] = matches[0]

    visited = {0}
    current = (0, 1)
    while True:
        piece, end = neighbours[current]
        if piece == 0:
            break
        if piece in visited:
            raise NonClosedBoundary(0.0, pieces[piece][end])
        visited.add(piece)
        current = (piece, 1 - end)
    if len(visited) != len(pieces):
        missing = next(i for i in range(len(pieces)) if i not in visited)
        raise NonClosedBoundary(0.0, pieces[missing][0])


def _check_dispersing(spec: CellSpec, samples: int) -> None:
    cx, cy = spec.disk_center
    for k, arc in enumerate(spec.arcs):
        points = arc.sample(samples)
        away = points - np.asarray(arc.center)
        inward = np.asarray((cx, cy)) - points
        dots = np.einsum("ij,ij->i", away, inward)
        bad = np.flatnonzero(dots <= 0.0)
        if bad.size:
            x, y = points[bad[0]]
            raise NonDispersingArc(k + 1, (float(x), float(y)))


def _arc_distance(arc: ArcSpec, point: Point) -> float:
    px, py = point
    psi = math.atan2(py - arc.center[1], px - arc.center[0])
    candidates = [math.dist(point, q) for q in arc.endpoints]
    if arc.contains_angle(psi):
        candidates.append(abs(math.dist(point, arc.center) - arc.radius))
    return min(candidates)


def _check_disk_clearance(spec: CellSpec) -> None:
    center = spec.disk_center
    distances = [_arc_distance(arc, center) for arc in spec.arcs]
    distances.append(0.5 * spec.width)
    clearance = min(distances) - spec.disk_radius
    if clearance <= 0.0:
        raise DiskTouchesWall(clearance)


def _boundary_samples(spec: CellSpec, count: int) -> np.ndarray:
    a, width = spec.opening_half_height, spec.width
    lengths = [arc.length for arc in spec.arcs] + [2 * a, 2 * a]
    total = sum(lengths)
    chunks = []
    for arc, length in zip(spec.arcs, lengths):
        chunks.append(arc.sample(max(8, int(count * length / total))))
    per_opening = max(8, int(count * 2 * a / total))
    ys = -a + 2 * a * (np.arange(per_opening) + 0.5) / per_opening
    chunks.append(np.column_stack((np.zeros_like(ys), ys)))
    chunks.append(np.column_stack((np.full_like(ys, width), ys)))
    return np.vstack(chunks)


def _check_star_shaped(cell: Cell, count: int) -> None:
    from ._raycast import HitKind, cast_rays

    spec = cell.spec
    cx, cy = spec.disk_center
    points = _boundary_samples(spec, count)
    offsets = points - np.asarray((cx, cy))
    distance = np.hypot(offsets[:, 0], offsets[:, 1])
    ux, uy = offsets[:, 0] / distance, offsets[:, 1] / distance
    hits = cast_rays(
        cell, np.full_like(ux, cx), np.full_like(uy, cy), ux, uy, include_disk=False, lookback=0.0
    )
    tol = _CLOSURE_TOLERANCE * spec.width
    early = (hits.kind == HitKind.NONE) | (hits.distance < distance - tol)
    bad = np.flatnonzero(early)
    if bad.size:
        x, y = points[bad[0]]
        raise NotStarShaped((float(x), float(y)))


def _corner_points(spec: CellSpec) -> tuple[Point, ...]:
    tol = _CLOSURE_TOLERANCE * spec.width
    corners: list[Point] = []
    for piece in _pieces(spec):
        for point in piece:
            if all(math.dist(point, q) > tol for q in corners):
                corners.append(point)
    return tuple(corners)


def build_cell(spec: CellSpec, *, tolerances: Tolerances | None = None, strict: bool = True) -> Cell:
    """Validate ``spec`` against the three cell conditions.

    With ``strict=False`` the dispersing test is skipped and the result is
    marked unvalidated; this admits degenerate test cells such as an arc
    concentric with the disk.
    """
    tol = tolerances or Tolerances.load()
    if spec.d <= 0.0:
        raise DiskTouchesWall(spec.d)
    _check_closed(spec)
    if strict:
        _check_dispersing(spec, max(16, tol.boundary_samples // max(1, len(spec.arcs))))
    _check_disk_clearance(spec)
    cell = Cell(
        spec=spec,
        corner_points=_corner_points(spec),
        validated=strict,
        corner_radius=tol.corner * spec.width,
    )
    _check_star_shaped(cell, tol.boundary_samples)
    _logger.debug("Built cell with %d arcs (validated=%s)", len(spec.arcs), strict)
    return cell
