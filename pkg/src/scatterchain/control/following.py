"""Drive a tracer along an admissible path."""

from __future__ import annotations

import logging
import math
from dataclasses import replace

import numpy as np

from ..config import PlannerSettings, Tolerances
from ..dynamics import Injection, Role, SystemState, contact_normal
from ._errors import SchedulingConflict
from .drivers import omega_for_direction
from .paths import AdmissiblePath, VertexKind, check_path, opening_side
from .planner import Planner
from .schedule import ExpectedHit, InjectionSchedule
from .timeline import Timeline

_logger = logging.getLogger(__name__)


def follow_path(
    state: SystemState,
    path: AdmissiblePath,
    v0: float,
    *,
    particle: str | None = None,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
    rng: np.random.Generator | None = None,
) -> InjectionSchedule:
    """Schedule the support that makes a tracer realize ``path``.

    Without ``particle`` a tracer of speed ``v0`` is injected at the path's
    first vertex, which must be the centre of a bath opening; otherwise the
    named resident of ``state`` is steered from where it is. The completion
    time (exit, or the contact at a disk end vertex) is stored in
    ``notes["completion"]``.
    """
    tol = tolerances or Tolerances.load()
    chain = state.chain
    problems = check_path(chain, path, tolerances=tol)
    if problems:
        raise ValueError(f"Path is not admissible: {problems[0]}")
    if not v0 > 0.0:
        raise ValueError(f"Tracer speed must be positive, got {v0!r}")

    tl = Timeline(state, tolerances=tol)
    planner = Planner(tl, settings=settings, tolerances=tol, rng=rng)
    vertices = path.vertices
    if particle is None:
        first = vertices[0]
        side = opening_side(chain, first.point)
        ux, uy = path.directions[0]
        particle = tl.label("tracer")
        tl.inject(Injection(state.t, side, first.point[1], (v0 * ux, v0 * uy), Role.TRACER, particle))
        tl.advance_to(state.t)
    elif tl.sim.track(particle) is None:
        raise ValueError(f"No particle {particle!r} in the state")

    match = tol.vertex * chain.width
    completion = math.inf
    for i, vertex in enumerate(vertices[1:], start=1):
        if vertex.kind is not VertexKind.DISK and vertex.kind is not VertexKind.END:
            continue
        contact = tl.contact(particle)
        if vertex.kind is VertexKind.END and contact is None:
            completion = tl.exit_time(particle)
            break
        if contact is None or math.dist(contact.point, vertex.point) > match:
            raise SchedulingConflict(tl.now, f"{particle!r} strayed from path vertex {i}")
        if vertex.kind is VertexKind.END:
            completion = contact.time
            break
        nxt = vertices[i + 1].point
        dx, dy = nxt[0] - contact.point[0], nxt[1] - contact.point[1]
        norm = math.hypot(dx, dy)
        u = (dx / norm, dy / norm)
        omega = omega_for_direction(
            contact.v, contact_normal(chain, contact.disk, contact.point), u, tolerances=tol
        )
        index = tl.record_hit(ExpectedHit(particle, contact.disk, contact.time, omega))
        planner.steer(particle, contact, u, side=planner.side_for(contact.disk), serves=index)

    if vertices[-1].kind is VertexKind.END and not math.isfinite(completion):
        raise SchedulingConflict(tl.now, f"{particle!r} never completed the path")
    horizon = max(completion, tl.run_out(completion))
    _logger.info(
        "Path with %d disk vertices followed by %r, completion %.6g, %d injections",
        len(path.disk_vertices), particle, completion, len(tl.sim.injections),
    )
    schedule = tl.schedule(horizon=horizon)
    return replace(schedule, notes={**schedule.notes, "completion": completion})
