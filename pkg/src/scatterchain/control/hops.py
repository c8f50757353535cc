"""Single-reflection hops between disk points and the hop graph over a sampled disk.

A hop leaves the disk at ``θ`` in direction ``α``, reflects once on an arc
and lands at ``R(θ, α)``. Around each fixed-point direction ``α_k(θ)`` the
landing angle is a continuous monotone function of ``α``; that branch's
image is the set of angles reachable in one hop through arc ``k``.
"""

from __future__ import annotations

import functools
import logging
import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..config import PlannerSettings, Tolerances
from ..geometry import TWO_PI, Cell, return_map_many, return_trip, signed_angle
from ._errors import RootNotBracketed, SearchExhausted

_logger = logging.getLogger(__name__)

_MAX_ALPHA = 1.5
_MAX_STEP = 0.5


class _OffBranch(ValueError):
    pass


@dataclass(frozen=True)
class Branch:
    """Monotone piece of the return map from ``theta`` through arc ``arc`` (zero-based).

    ``offsets`` are unwrapped landing angles relative to ``theta``, sampled
    at the increasing directions ``alphas``.
    """

    theta: float
    arc: int
    alphas: np.ndarray
    offsets: np.ndarray

    @property
    def image(self) -> tuple[float, float]:
        return float(self.offsets.min()), float(self.offsets.max())

    def covers(self, lo: float, hi: float, margin: float) -> bool:
        a, b = self.image
        return a + margin <= lo and hi <= b - margin

    def offset_of(self, target: float, margin: float) -> float | None:
        """Unwrapped offset of the absolute angle ``target`` inside the image, if any."""
        a, b = self.image
        base = signed_angle(target - self.theta)
        for turn in (0, 1, -1, 2, -2):
            offset = base + turn * TWO_PI
            if a + margin <= offset <= b - margin:
                return offset
        return None

    def bracket(self, offset: float) -> tuple[float, float]:
        values = self.offsets
        for i in range(len(values) - 1):
            lo, hi = sorted((values[i], values[i + 1]))
            if lo <= offset <= hi:
                return float(self.alphas[i]), float(self.alphas[i + 1])
        raise RootNotBracketed(offset, *self.image)


def fixed_point_directions(cell: Cell, thetas: np.ndarray, k0: int) -> np.ndarray:
    """Vectorized ``α_k``: direction along the line to ``c_k``, oriented outward."""
    arc = cell.arcs[k0]
    cx, _ = cell.spec.disk_center
    r = cell.spec.disk_radius
    nx, ny = np.cos(thetas), -np.sin(thetas)
    tx, ty = -np.sin(thetas), -np.cos(thetas)
    wx, wy = arc.center[0] - (cx + r * nx), arc.center[1] - r * ny
    along = wx * nx + wy * ny
    across = wx * tx + wy * ty
    flip = np.where(along < 0.0, -1.0, 1.0)
    return np.arctan2(flip * across, flip * along)


def _branch(theta: float, k0: int, alphas: np.ndarray, landing: np.ndarray, arcs: np.ndarray) -> Branch | None:
    center = len(alphas) // 2
    valid = ~np.isnan(landing) & (arcs == k0) & (np.abs(alphas) < _MAX_ALPHA)
    if not valid[center]:
        return None
    offsets = {center: signed_angle(float(landing[center]) - theta)}
    sign = 0.0
    for direction in (1, -1):
        j = center
        while 0 <= j + direction < len(alphas) and valid[j + direction]:
            step = signed_angle(float(landing[j + direction] - landing[j])) * direction
            if step == 0.0 or abs(step) > _MAX_STEP:
                break
            if sign == 0.0:
                sign = math.copysign(1.0, step)
            elif math.copysign(1.0, step) != sign:
                break
            offsets[j + direction] = offsets[j] + step * direction
            j += direction
    if len(offsets) < 2:
        return None
    keys = sorted(offsets)
    return Branch(
        theta=theta,
        arc=k0,
        alphas=alphas[keys].copy(),
        offsets=np.array([offsets[k] for k in keys]),
    )


def _alpha_grid(centers: np.ndarray, half_count: int) -> np.ndarray:
    steps = np.arange(-half_count, half_count + 1) * (_MAX_ALPHA / half_count)
    return centers[..., None] + steps


def sweep(cell: Cell, theta: float, *, settings: PlannerSettings | None = None,
          tolerances: Tolerances | None = None) -> list[Branch]:
    """Branches of the return map leaving the disk point ``theta``."""
    cfg = settings or PlannerSettings.load()
    tol = tolerances or Tolerances.load()
    branches = []
    thetas = np.array([theta])
    for k0 in range(len(cell.arcs)):
        alphas = _alpha_grid(fixed_point_directions(cell, thetas, k0), cfg.alpha_samples)[0]
        landing, arcs = return_map_many(cell, np.full_like(alphas, theta), alphas, tangent_tol=tol.tangent)
        branch = _branch(theta, k0, alphas, landing, arcs)
        if branch is not None:
            branches.append(branch)
    return branches


def invert(cell: Cell, branch: Branch, offset: float, *, tolerances: Tolerances | None = None) -> float:
    """Direction on ``branch`` whose hop lands at ``branch.theta + offset``."""
    tol = tolerances or Tolerances.load()
    target = branch.theta + offset
    lo, hi = branch.bracket(offset)

    def residual(alpha: float) -> float:
        trip = return_trip(cell, branch.theta, alpha, tolerances=tol)
        if trip is None or trip.arc != branch.arc:
            raise _OffBranch(alpha)
        return signed_angle(trip.theta - target)

    try:
        f_lo, f_hi = residual(lo), residual(hi)
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        if f_lo * f_hi > 0.0:
            raise RootNotBracketed(target, f_lo, f_hi)
        return float(brentq(residual, lo, hi, xtol=tol.root_xtol))
    except _OffBranch as exc:
        raise RootNotBracketed(target, lo, hi) from exc


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------


class HopGraph:
    """Reachability between ``samples`` equally spaced disk angles, 0 and π included."""

    def __init__(self, cell: Cell, samples: int, *, settings: PlannerSettings | None = None,
                 tolerances: Tolerances | None = None) -> None:
        if samples % 2:
            raise ValueError("The sample count must be even so that π is a node")
        self.cell = cell
        self.samples = samples
        self.settings = settings or PlannerSettings.load()
        self.tolerances = tolerances or Tolerances.load()
        self.spacing = TWO_PI / samples
        self.thetas = self.spacing * np.arange(samples)
        self.images: list[list[tuple[float, float]]] = [[] for _ in range(samples)]
        self._build()
        self._distances: dict[frozenset[int], np.ndarray] = {}

    def _build(self) -> None:
        cell, cfg = self.cell, self.settings
        successors: list[set[int]] = [set() for _ in range(self.samples)]
        for k0 in range(len(cell.arcs)):
            alphas = _alpha_grid(fixed_point_directions(cell, self.thetas, k0), cfg.alpha_samples)
            thetas = np.broadcast_to(self.thetas[:, None], alphas.shape)
            landing, arcs = return_map_many(cell, thetas, alphas, tangent_tol=self.tolerances.tangent)
            for i, theta in enumerate(self.thetas):
                branch = _branch(float(theta), k0, alphas[i], landing[i], arcs[i])
                if branch is None:
                    continue
                lo, hi = branch.image
                lo, hi = lo + self.spacing, hi - self.spacing
                if hi < lo:
                    continue
                self.images[i].append((lo, hi))
                first = math.ceil((theta + lo) / self.spacing)
                last = math.floor((theta + hi) / self.spacing)
                successors[i].update(m % self.samples for m in range(first, last + 1))
        self.successors = [sorted(s) for s in successors]
        predecessors: list[list[int]] = [[] for _ in range(self.samples)]
        for i, nxt in enumerate(self.successors):
            for m in nxt:
                predecessors[m].append(i)
        self.predecessors = predecessors
        _logger.debug(
            "Hop graph: %d nodes, %d edges", self.samples, sum(len(s) for s in self.successors)
        )

    def node(self, theta: float) -> int:
        return int(round((theta % TWO_PI) / self.spacing)) % self.samples

    def angle(self, node: int) -> float:
        return float(self.thetas[node % self.samples])

    def distances(self, targets: frozenset[int]) -> np.ndarray:
        """Hop counts to ``targets`` (``-1`` where unreachable), by reverse breadth-first search."""
        cached = self._distances.get(targets)
        if cached is not None:
            return cached
        dist = np.full(self.samples, -1, dtype=np.int64)
        queue = deque()
        for t in targets:
            dist[t] = 0
            queue.append(t)
        while queue:
            m = queue.popleft()
            for i in self.predecessors[m]:
                if dist[i] < 0:
                    dist[i] = dist[m] + 1
                    queue.append(i)
        self._distances[targets] = dist
        return dist

    def covering_nodes(self, lo: float, hi: float) -> frozenset[int]:
        """Nodes having a branch whose image contains the absolute interval ``[lo, hi]``."""
        found = set()
        for i, images in enumerate(self.images):
            theta = self.angle(i)
            for a, b in images:
                for turn in (0, 1, -1):
                    if theta + a <= lo + turn * TWO_PI and hi + turn * TWO_PI <= theta + b:
                        found.add(i)
        return frozenset(found)


@functools.lru_cache(maxsize=8)
def _cached_graph(cell: Cell, samples: int, settings: PlannerSettings, tolerances: Tolerances) -> HopGraph:
    return HopGraph(cell, samples, settings=settings, tolerances=tolerances)


def hop_graph(
    cell: Cell,
    samples: int,
    *,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
) -> HopGraph:
    """Shared graph for ``cell``, one per sample count and settings."""
    return _cached_graph(
        cell, samples, settings or PlannerSettings.load(), tolerances or Tolerances.load()
    )


@dataclass(frozen=True)
class Hop:
    branch: Branch
    alpha: float
    node: int
    target: float
    remaining: int


def choose_hop(
    graph: HopGraph,
    theta: float,
    targets: frozenset[int],
    *,
    rng: np.random.Generator | None = None,
    tolerances: Tolerances | None = None,
) -> Hop:
    """Best single hop from an arbitrary ``theta`` toward ``targets``.

    The landing node minimizes the remaining hop count; ``rng`` breaks ties
    at random instead of by the smallest turn.
    """
    dist = graph.distances(targets)
    candidates: list[tuple[int, float, Branch, int]] = []
    for branch in sweep(graph.cell, theta, settings=graph.settings, tolerances=tolerances):
        lo, hi = branch.image
        first = math.ceil((theta + lo + graph.spacing) / graph.spacing)
        last = math.floor((theta + hi - graph.spacing) / graph.spacing)
        for m in range(first, last + 1):
            node = m % graph.samples
            if dist[node] >= 0:
                candidates.append((int(dist[node]), abs(m * graph.spacing - theta), branch, m))
    if not candidates:
        raise SearchExhausted(theta, graph.samples)
    best = min(c[0] for c in candidates)
    pool = [c for c in candidates if c[0] == best]
    if rng is not None:
        pick = pool[int(rng.integers(len(pool)))]
    else:
        pick = min(pool, key=lambda c: c[1])
    remaining, _, branch, m = pick
    offset = m * graph.spacing - theta
    alpha = invert(graph.cell, branch, offset, tolerances=tolerances)
    return Hop(branch, alpha, m % graph.samples, graph.angle(m), remaining)
