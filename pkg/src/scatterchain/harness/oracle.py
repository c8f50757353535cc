"""Brute-force illumination by dense sampling, independent of the bisection in ``geometry``.

Each sampled disk point is joined to the arc centre along the outward
line; the point is lit when the first boundary crossing of that ray is on
the arc itself, away from corners.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..geometry import TWO_PI, AngularIntervalSet, Cell

_logger = logging.getLogger(__name__)


def _first_crossings(cell: Cell, px, py, ux, uy) -> tuple[np.ndarray, np.ndarray]:
    """Distance to and label of the first boundary crossing (arc index, or -1 for openings)."""
    spec = cell.spec
    floor = 1e-10 * spec.width
    best = np.full(px.shape, np.inf)
    label = np.full(px.shape, -2, dtype=np.int64)
    for k, arc in enumerate(spec.arcs):
        wx, wy = px - arc.center[0], py - arc.center[1]
        b = ux * wx + uy * wy
        c = wx * wx + wy * wy - arc.radius**2
        disc = b * b - c
        root = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
        for s in (-b - root, -b + root):
            with np.errstate(invalid="ignore"):
                psi = np.arctan2(py + s * uy - arc.center[1], px + s * ux - arc.center[0])
                on_arc = np.mod(psi - arc.angular_span[0], TWO_PI) <= arc.width
                take = (s > floor) & on_arc & (s < best)
            best = np.where(take, s, best)
            label = np.where(take, k, label)
    a = spec.opening_half_height
    for x_open in (0.0, spec.width):
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (x_open - px) / ux
            take = (s > floor) & (np.abs(py + s * uy) <= a) & (s < best)
        best = np.where(take, s, best)
        label = np.where(take, -1, label)
    return best, label


def mc_illumination_oracle(cell: Cell, samples: int = 100_000, k: int | None = None) -> AngularIntervalSet:
    """Empirical ``I_k`` (or the union over all arcs when ``k`` is None) at ``samples`` disk angles."""
    if samples < 1:
        raise ValueError(f"Need at least one sample, got {samples}")
    spec = cell.spec
    step = TWO_PI / samples
    thetas = step * (np.arange(samples) + 0.5)
    nx, ny = np.cos(thetas), -np.sin(thetas)
    px = 0.5 * spec.width + spec.disk_radius * nx
    py = spec.disk_radius * ny
    corners = np.array(cell.corner_points) if cell.corner_points else np.empty((0, 2))

    lit = np.zeros(samples, dtype=bool)
    arcs = range(len(spec.arcs)) if k is None else [k - 1]
    for k0 in arcs:
        cx, cy = spec.arcs[k0].center
        wx, wy = cx - px, cy - py
        norm = np.hypot(wx, wy)
        along = (wx * nx + wy * ny) / norm
        sign = np.where(along < 0.0, -1.0, 1.0)
        ux, uy = sign * wx / norm, sign * wy / norm
        dist, label = _first_crossings(cell, px, py, ux, uy)
        hx, hy = px + dist * ux, py + dist * uy
        clear = np.ones(samples, dtype=bool)
        for qx, qy in corners:
            with np.errstate(invalid="ignore"):
                clear &= ~(np.hypot(hx - qx, hy - qy) < cell.corner_radius)
        lit |= (label == k0) & clear & (np.abs(along) > 0.0)

    if lit.all():
        return AngularIntervalSet.full()
    if not lit.any():
        return AngularIntervalSet.empty()
    intervals = []
    start = None
    for i, on in enumerate(lit):
        if on and start is None:
            start = i
        elif not on and start is not None:
            intervals.append((start * step, i * step))
            start = None
    if start is not None:
        intervals.append((start * step, samples * step))
    result = AngularIntervalSet.from_intervals(intervals, slack=0.5 * step)
    _logger.debug("Oracle: %d lit samples of %d, %d interval(s)", int(lit.sum()), samples, len(result))
    return result
