"""Rejections raised while building or querying cells.

Each rejection names the cell condition it violates: 1 (boundary made of
closed, dispersing arcs and the two openings), 2 (disk clear of the
boundary) or 3 (boundary star-shaped around the disk center).
"""

from __future__ import annotations

from .._errors import ScatterChainError

Point = tuple[float, float]


class GeometryError(ScatterChainError):
    """Base exception for geometry errors."""

    condition: int | None = None


class NonClosedBoundary(GeometryError):
    """Arc and opening endpoints do not chain into a single closed curve."""

    condition = 1

    def __init__(self, gap: float, point: Point) -> None:
        self.gap = gap
        self.point = point
        super().__init__(
            f"Boundary is not closed: endpoint {point} is {gap:.3g} away from its neighbour."
        )


class NonDispersingArc(GeometryError):
    condition = 1

    def __init__(self, arc_index: int, point: Point) -> None:
        self.arc_index = arc_index
        self.point = point
        super().__init__(
            f"Arc {arc_index} is not dispersing: the cell lies on its center side at {point}."
        )


class DiskTouchesWall(GeometryError):
    condition = 2

    def __init__(self, clearance: float) -> None:
        self.clearance = clearance
        super().__init__(f"Disk meets the cell boundary (clearance {clearance:.3g}).")


class NotStarShaped(GeometryError):
    condition = 3

    def __init__(self, point: Point) -> None:
        self.point = point
        super().__init__(
            f"Segment from the disk center to boundary point {point} crosses the boundary twice."
        )


class InvalidArcIndex(GeometryError):
    def __init__(self, index: int, count: int) -> None:
        self.index = index
        self.count = count
        super().__init__(f"Arc index {index} out of range 1..{count}.")
