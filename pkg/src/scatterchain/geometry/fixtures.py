"""Reference cells built from a few construction parameters.

Arcs are specified by their two endpoints and a radius; the center is put
on the side of the chord away from the disk, which makes the arc
dispersing. Running this module's constructors is the single source of the
fixture geometries used by tests and scenario files.

``four_arc``
    L=4, a=1/4, r=1/2. Arcs join each opening end to the points
    ``(2, ±3/2)`` with radius 3. Every disk point sees some arc center
    unobstructed, so the cell is 1-controllable. With the opening narrower
    than the disk, each half of the boundary needs two dispersing arcs to
    close, so four is the fewest arcs for this opening size.

``tailed``
    L=4, a=0.6, r=1/2. A nearly flat wall (radius 50) runs from each left
    opening end to ``(0, ±3/2)`` and a radius-10 arc closes the boundary to
    the right opening. The flat walls form a tail whose arc centers are only
    visible through the left opening, so the disk side facing the tail is
    not illuminated.

``concentric``
    L=4, a=1/4, r=1/2. Two arcs of the circle centered at the disk center
    through the opening ends. Not dispersing; build with ``strict=False``.
"""

from __future__ import annotations

import math

from .angles import TWO_PI
from .cell import ArcSpec, CellSpec, Point


def arc_through(start: Point, end: Point, radius: float, interior: Point) -> ArcSpec:
    """Minor arc of the given radius joining ``start`` and ``end``, bulging toward ``interior``."""
    (x0, y0), (x1, y1) = start, end
    chord = math.dist(start, end)
    if not 0.0 < chord < 2.0 * radius:
        raise ValueError(f"No arc of radius {radius} joins {start} and {end}")
    mx, my = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    px, py = -(y1 - y0) / chord, (x1 - x0) / chord
    if px * (interior[0] - mx) + py * (interior[1] - my) > 0.0:
        px, py = -px, -py
    h = math.sqrt(radius * radius - 0.25 * chord * chord)
    cx, cy = mx + h * px, my + h * py
    a0 = math.atan2(y0 - cy, x0 - cx)
    a1 = math.atan2(y1 - cy, x1 - cx)
    sweep = (a1 - a0) % TWO_PI
    if sweep > math.pi:
        a0, sweep = a1, TWO_PI - sweep
    return ArcSpec(center=(cx, cy), radius=radius, angular_span=(a0, a0 + sweep))


def _mirror(arc: ArcSpec) -> ArcSpec:
    a0, a1 = arc.angular_span
    return ArcSpec(center=(arc.center[0], -arc.center[1]), radius=arc.radius, angular_span=(-a1, -a0))


def four_arc_spec(width: float = 4.0, a: float = 0.25, r: float = 0.5, radius: float = 3.0) -> CellSpec:
    center = (0.5 * width, 0.0)
    top = (0.5 * width, 1.5)
    upper_left = arc_through((0.0, a), top, radius, center)
    upper_right = arc_through(top, (width, a), radius, center)
    return CellSpec(
        width=width,
        opening_half_height=a,
        disk_radius=r,
        arcs=(upper_left, upper_right, _mirror(upper_left), _mirror(upper_right)),
    )


def tailed_spec(width: float = 4.0, a: float = 0.6, r: float = 0.5) -> CellSpec:
    center = (0.5 * width, 0.0)
    tail = arc_through((0.0, a), (0.0, 1.5), 50.0, center)
    roof = arc_through((0.0, 1.5), (width, a), 10.0, center)
    return CellSpec(
        width=width,
        opening_half_height=a,
        disk_radius=r,
        arcs=(tail, roof, _mirror(tail), _mirror(roof)),
    )


def concentric_spec(width: float = 4.0, a: float = 0.25, r: float = 0.5) -> CellSpec:
    half = 0.5 * width
    radius = math.hypot(half, a)
    opening_angle = math.atan2(a, -half)
    upper = ArcSpec(
        center=(half, 0.0), radius=radius, angular_span=(math.atan2(a, half), opening_angle)
    )
    return CellSpec(width=width, opening_half_height=a, disk_radius=r, arcs=(upper, _mirror(upper)))


FIXTURES = {
    "four-arc": four_arc_spec,
    "tailed": tailed_spec,
    "concentric": concentric_spec,
}
