"""Admissible routes: from a disk point to a bath opening, and between openings.

Routes hop over the sampled disk of each cell until a disk point with a
clear line to the wanted opening is reached. Hops between nodes follow
:func:`choose_hop`, so every route is also a plan the closed-loop planner
can realize.
"""

from __future__ import annotations

import functools
import logging
import math

import numpy as np

from ..config import PlannerSettings, Tolerances
from ..dynamics import Side
from ..geometry import (
    LEFT,
    RIGHT,
    TWO_PI,
    Cell,
    Chain,
    HitKind,
    Point,
    cast_ray,
    disk_normal,
    is_one_controllable,
    return_trip,
)
from ._errors import NotOneControllable, SearchExhausted
from .hops import HopGraph, choose_hop, hop_graph
from .paths import AdmissiblePath, PathVertex, VertexKind

_logger = logging.getLogger(__name__)

_MIN_OUTWARD = 1e-3
_AT_NODE = 1e-9


@functools.lru_cache(maxsize=16)
def _verdict(cell: Cell) -> float | None:
    verdict = is_one_controllable(cell)
    return verdict.witness


def require_controllable(cell: Cell) -> None:
    """Raise :class:`NotOneControllable` unless the illuminated segments cover the disk."""
    witness = _verdict(cell)
    if witness is not None:
        raise NotOneControllable(witness)


def exit_targets(graph: HopGraph, side: Side) -> frozenset[int]:
    """Nodes facing the opening on ``side``: π for the left one, 0 for the right one."""
    return frozenset({graph.samples // 2}) if side is Side.LEFT else frozenset({0})


def direct_exit(cell: Cell, theta: float, side: Side) -> Point | None:
    """Direction from the disk point ``theta`` to the centre of the ``side`` opening, if unobstructed."""
    spec = cell.spec
    px, py = cell.disk_point(theta)
    tx = 0.0 if side is Side.LEFT else spec.width
    dx, dy = tx - px, -py
    norm = math.hypot(dx, dy)
    u = (dx / norm, dy / norm)
    n = disk_normal(theta)
    if u[0] * n[0] + u[1] * n[1] < _MIN_OUTWARD:
        return None
    hit = cast_ray(cell, px, py, *u)
    expected = LEFT if side is Side.LEFT else RIGHT
    if hit is None or hit.kind is not HitKind.OPENING or hit.index != expected or hit.corner:
        return None
    return u


def _hops(
    cell: Cell,
    theta: float,
    side: Side,
    graph: HopGraph,
    tol: Tolerances,
    rng: np.random.Generator | None,
    direct: bool,
) -> tuple[list[tuple[Point, Point]], float]:
    """Wall and landing points of the hops from ``theta`` out through ``side``.

    With ``direct`` the route stops at the first disk point with a clear line
    to the opening centre, otherwise at the node facing the opening.
    """
    targets = exit_targets(graph, side)
    node = math.pi if side is Side.LEFT else 0.0
    hops: list[tuple[Point, Point]] = []
    for _ in range(graph.samples):
        if direct and direct_exit(cell, theta, side) is not None:
            return hops, theta
        if not direct and abs(math.remainder(theta - node, TWO_PI)) < _AT_NODE:
            return hops, theta
        hop = choose_hop(graph, theta, targets, rng=rng, tolerances=tol)
        trip = return_trip(cell, theta, hop.alpha, tolerances=tol)
        if trip is None:
            raise SearchExhausted(theta, graph.samples)
        _logger.debug("Route hop %.6f → %.6f via arc %d", theta, trip.theta, trip.arc + 1)
        hops.append((trip.wall_point, cell.disk_point(trip.theta)))
        theta = trip.theta
    raise SearchExhausted(theta, graph.samples)


def route(
    cell: Cell,
    theta: float,
    side: Side,
    *,
    direct: bool = True,
    rng: np.random.Generator | None = None,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
) -> tuple[list[tuple[Point, Point]], float]:
    """Hops from ``theta`` toward ``side``.

    When the search runs dry the disk grid is doubled, at most
    ``settings.hop_refine`` times.
    """
    tol = tolerances or Tolerances.load()
    cfg = settings or PlannerSettings.load()
    require_controllable(cell)
    samples = cfg.hop_samples
    for attempt in range(cfg.hop_refine + 1):
        graph = hop_graph(cell, samples, settings=cfg, tolerances=tol)
        try:
            return _hops(cell, theta, side, graph, tol, rng, direct)
        except SearchExhausted:
            if attempt == cfg.hop_refine:
                raise
            samples *= 2
            _logger.warning("No route from θ=%.6f; refining the disk grid to %d nodes", theta, samples)
    raise SearchExhausted(theta, samples)


def plan_exit_path(
    cell: Cell,
    theta: float,
    side: Side = Side.LEFT,
    *,
    rng: np.random.Generator | None = None,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
) -> AdmissiblePath:
    """Admissible path from the disk point ``theta`` out through the opening on ``side``.

    Coordinates are those of the cell itself (a one-cell chain).
    """
    hops, _ = route(cell, theta, side, rng=rng, settings=settings, tolerances=tolerances)
    vertices = [PathVertex(cell.disk_point(theta), VertexKind.START, 1)]
    for wall, landing in hops:
        vertices.append(PathVertex(wall, VertexKind.WALL, 1))
        vertices.append(PathVertex(landing, VertexKind.DISK, 1))
    exit_x = 0.0 if side is Side.LEFT else cell.spec.width
    vertices.append(PathVertex((exit_x, 0.0), VertexKind.END, 1))
    return AdmissiblePath(tuple(vertices))


def _crossing(
    chain: Chain,
    j: int,
    theta: float,
    heading: Side,
    settings: PlannerSettings | None,
    tol: Tolerances | None,
) -> list[PathVertex]:
    offset = chain.offset(j)
    hops, _ = route(chain.cell, theta, heading, direct=False, settings=settings, tolerances=tol)
    vertices = []
    for wall, landing in hops:
        vertices.append(PathVertex((wall[0] + offset, wall[1]), VertexKind.WALL, j))
        vertices.append(PathVertex((landing[0] + offset, landing[1]), VertexKind.DISK, j))
    return vertices


def plan_opening_to_opening(
    chain: Chain,
    from_side: Side,
    to: Side | int,
    *,
    angle: float = 0.0,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
) -> AdmissiblePath:
    """Admissible path entering through ``from_side`` and ending at ``to``.

    ``to`` is a bath side or a disk index; a path to a disk ends at the
    disk point facing the entry bath. The entry segment leaves the opening
    centre at ``angle`` to the horizontal; every cell is left along its
    axis, so the exit segment is orthogonal to the opening.
    """
    cell, spec = chain.cell, chain.cell.spec
    require_controllable(cell)
    forward = from_side is Side.LEFT
    heading = Side.RIGHT if forward else Side.LEFT
    step = 1 if forward else -1
    first = 1 if forward else chain.n_cells
    if isinstance(to, Side):
        if to is from_side:
            raise ValueError("Start and end openings must differ")
        last = chain.n_cells if forward else 1
    else:
        if not 1 <= to <= chain.n_cells:
            raise ValueError(f"Disk index {to} is outside 1..{chain.n_cells}")
        last = to - step

    origin = (0.0, 0.0) if forward else (chain.length, 0.0)
    u = (math.cos(angle), math.sin(angle)) if forward else (-math.cos(angle), math.sin(angle))
    hit = cast_ray(cell, 0.0 if forward else spec.width, 0.0, *u)
    if hit is None or hit.kind is not HitKind.DISK or hit.corner:
        raise SearchExhausted(angle, 1)
    entry = (hit.x + chain.offset(first), hit.y)
    vertices = [PathVertex(origin, VertexKind.START, first)]
    if not isinstance(to, Side) and to == first:
        vertices.append(PathVertex(entry, VertexKind.END, first))
        return AdmissiblePath(tuple(vertices))

    vertices.append(PathVertex(entry, VertexKind.DISK, first))
    theta = chain.disk_angle(first, *entry)
    j = first
    while True:
        vertices.extend(_crossing(chain, j, theta, heading, settings, tolerances))
        if j == last:
            break
        j += step
        theta = math.pi if forward else 0.0
        vertices.append(PathVertex(chain.disk_point(j, theta), VertexKind.DISK, j))

    if isinstance(to, Side):
        end = (chain.length, 0.0) if to is Side.RIGHT else (0.0, 0.0)
        vertices.append(PathVertex(end, VertexKind.END, last))
    else:
        facing = math.pi if forward else 0.0
        vertices.append(PathVertex(chain.disk_point(to, facing), VertexKind.END, to))
    return AdmissiblePath(tuple(vertices))
