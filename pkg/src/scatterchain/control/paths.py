"""Admissible paths: piecewise-straight curves with specular wall vertices.

Vertices are stored in global chain coordinates together with the cell
they lie in. Segments crossing interior openings are not broken; the
openings between cells are transparent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ..config import Tolerances
from ..dynamics import Side, next_flight
from ..dynamics.kinematics import contact_normal
from ..geometry import LEFT, Chain, HitKind, Point


class VertexKind(str, Enum):
    START = "start"
    WALL = "wall"
    DISK = "disk"
    OPENING = "opening"
    END = "end"


@dataclass(frozen=True)
class PathVertex:
    point: Point
    kind: VertexKind
    cell_index: int


@dataclass(frozen=True)
class AdmissiblePath:
    vertices: tuple[PathVertex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("A path needs at least two vertices")

    @property
    def segments(self) -> list[tuple[Point, Point]]:
        return [(a.point, b.point) for a, b in zip(self.vertices, self.vertices[1:])]

    @property
    def directions(self) -> list[Point]:
        out = []
        for (x0, y0), (x1, y1) in self.segments:
            norm = math.hypot(x1 - x0, y1 - y0)
            out.append(((x1 - x0) / norm, (y1 - y0) / norm))
        return out

    @property
    def length(self) -> float:
        return math.fsum(math.dist(a, b) for a, b in self.segments)

    @property
    def disk_vertices(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.kind is VertexKind.DISK]

    def completion_time(self, speed: float) -> float:
        """``|γ|/speed``, exact for paths without disk vertices."""
        return self.length / speed

    def then(self, other: AdmissiblePath) -> AdmissiblePath:
        """Concatenate two paths sharing the joining vertex."""
        if math.dist(self.vertices[-1].point, other.vertices[0].point) > 1e-12 * (
            1.0 + abs(self.vertices[-1].point[0])
        ):
            raise ValueError("Paths do not meet")
        return AdmissiblePath(self.vertices[:-1] + other.vertices)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _trace_segment(chain: Chain, cell_index: int, start: Point, end: Point):
    """Follow the straight line ``start → end`` through transparent openings."""
    q, j = start, cell_index
    v = (end[0] - start[0], end[1] - start[1])
    for _ in range(chain.n_cells + 1):
        flight = next_flight(chain, j, q, v)
        if flight is None:
            return None, j
        hit = flight.hit
        interior = hit.kind is HitKind.OPENING and not (
            (hit.index == LEFT and j == 1) or (hit.index != LEFT and j == chain.n_cells)
        )
        if not interior:
            return flight, j
        q = flight.point
        j = j - 1 if hit.index == LEFT else j + 1
    return None, j


def check_path(
    chain: Chain, path: AdmissiblePath, *, tolerances: Tolerances | None = None
) -> list[str]:
    """Violations of the admissibility conditions; an empty list means admissible."""
    tol = tolerances or Tolerances.load()
    spec = chain.cell.spec
    match_tol = 1e-8 * spec.width
    problems: list[str] = []
    vertices = path.vertices
    directions = path.directions

    for i, (a, b) in enumerate(zip(vertices, vertices[1:])):
        if math.dist(a.point, b.point) <= match_tol:
            problems.append(f"segment {i} is degenerate")
            continue
        flight, cell_index = _trace_segment(chain, a.cell_index, a.point, b.point)
        if flight is None or math.dist(flight.point, b.point) > match_tol:
            problems.append(f"segment {i} does not reach vertex {i + 1} first")
            continue
        if flight.hit.corner:
            problems.append(f"vertex {i + 1} is within the corner tolerance")
        if cell_index != b.cell_index:
            problems.append(f"vertex {i + 1} lies in cell {cell_index}, not {b.cell_index}")
        expected = {
            HitKind.ARC: (VertexKind.WALL,),
            HitKind.DISK: (VertexKind.DISK, VertexKind.END),
            HitKind.OPENING: (VertexKind.OPENING, VertexKind.END),
        }.get(flight.hit.kind, ())
        if b.kind not in expected:
            problems.append(f"vertex {i + 1} is a {b.kind.value} but the segment meets {flight.hit.kind.name}")

    for i, vertex in enumerate(vertices[1:-1], start=1):
        u_in, u_out = directions[i - 1], directions[i]
        if vertex.kind is VertexKind.OPENING:
            problems.append(f"interior vertex {i} lies on an opening")
        elif vertex.kind is VertexKind.WALL:
            local = (vertex.point[0] - chain.offset(vertex.cell_index), vertex.point[1])
            normal = _wall_normal(chain, local)
            if normal is None:
                problems.append(f"wall vertex {i} is not on an arc")
                continue
            dot = u_in[0] * normal[0] + u_in[1] * normal[1]
            rx, ry = u_in[0] - 2 * dot * normal[0], u_in[1] - 2 * dot * normal[1]
            if math.hypot(rx - u_out[0], ry - u_out[1]) > 1e-7:
                problems.append(f"wall vertex {i} is not specular")
        elif vertex.kind is VertexKind.DISK:
            normal = contact_normal(chain, vertex.cell_index, vertex.point)
            n_in = -(u_in[0] * normal[0] + u_in[1] * normal[1])
            n_out = u_out[0] * normal[0] + u_out[1] * normal[1]
            if n_in < tol.tangent or n_out < tol.tangent:
                problems.append(f"disk vertex {i} is tangent")
    end = vertices[-1]
    if end.kind is VertexKind.OPENING and not _is_outer_opening(chain, end):
        problems.append("final opening is not a bath opening")
    return problems


def _wall_normal(chain: Chain, local: Point) -> Point | None:
    best = None
    for arc in chain.cell.spec.arcs:
        gap = abs(math.dist(local, arc.center) - arc.radius)
        if gap < 1e-8 * chain.width and (best is None or gap < best[0]):
            best = (gap, arc)
    if best is None:
        return None
    arc = best[1]
    return ((local[0] - arc.center[0]) / arc.radius, (local[1] - arc.center[1]) / arc.radius)


def _is_outer_opening(chain: Chain, vertex: PathVertex) -> bool:
    x = vertex.point[0]
    tol = 1e-9 * chain.width
    return abs(x) <= tol or abs(x - chain.length) <= tol


def opening_side(chain: Chain, point: Point) -> Side:
    return Side.LEFT if point[0] < 0.5 * chain.length else Side.RIGHT
