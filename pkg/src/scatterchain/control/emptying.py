"""Empty the chain: repatriate every particle to a bath and bring all disks to rest at angle 0."""

from __future__ import annotations

import logging
import math
from dataclasses import replace

import numpy as np

from ..config import PlannerSettings, Tolerances
from ..dynamics import DiskState, Side, SystemState, contact_normal
from ._errors import InadmissibleState, SchedulingConflict, SearchExhausted
from .admissibility import check_admissible
from .drivers import omega_for_direction
from .planner import Planner
from .routes import require_controllable
from .schedule import ExpectedHit, InjectionSchedule
from .timeline import Timeline

_logger = logging.getLogger(__name__)


def _at_rest(disk: DiskState) -> bool:
    return disk.phi == 0.0 and disk.omega == 0.0


def _repatriate(tl: Timeline, planner: Planner, tracers: set[str]) -> None:
    """Steer the resident particles, earliest disk contact first, until all have left."""
    chain = tl.chain
    budget = max(1, len(tracers)) * chain.n_cells * planner.graph.samples
    for _ in range(budget):
        pending = []
        for pid in tl.particles():
            if pid not in tracers:
                continue
            contact = tl.contact(pid)
            if contact is not None:
                pending.append((contact.time, pid, contact))
        if not pending:
            return
        _, pid, contact = min(pending, key=lambda entry: (entry[0], entry[1]))
        side = planner.side_for(contact.disk)
        targets, leave = planner.toward(side)
        bath = planner.bath_point(side) if contact.disk == planner.bath_disk(side) else None
        u, _ = planner.decide(contact.disk, contact, targets, leave, bath)
        normal = contact_normal(chain, contact.disk, contact.point)
        omega = omega_for_direction(contact.v, normal, u, tolerances=tl.tolerances)
        index = tl.record_hit(ExpectedHit(pid, contact.disk, contact.time, omega))
        planner.steer(pid, contact, u, side=side, serves=index)
    raise SearchExhausted(math.nan, budget)


def _movie(
    state: SystemState, settings: PlannerSettings, tol: Tolerances, rng: np.random.Generator
) -> tuple[InjectionSchedule, float]:
    tl = Timeline(state, tolerances=tol)
    planner = Planner(tl, settings=settings, tolerances=tol, rng=rng)
    _repatriate(tl, planner, {p.id for p in state.particles})
    tl.run_out()
    cleared = tl.now
    # Cleanup from the far end: units for disk j only disturb disks below j.
    for j in range(state.chain.n_cells, 0, -1):
        if _at_rest(tl.disk_state(j)):
            continue
        planner.control_disk(
            j, DiskState(), tl.now, settings.phase_window, side=Side.LEFT, restore=False
        )
        tl.run_out()
    total = tl.now
    schedule = tl.schedule(horizon=total)
    _logger.info(
        "Chain emptied at T=%.6g (particles gone at %.6g) with %d injections",
        total, cleared, len(schedule),
    )
    return replace(schedule, notes={"T": total, "cleared": cleared}), total


def empty_system(
    state: SystemState,
    *,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
) -> tuple[InjectionSchedule, float]:
    """Schedule bringing ``state`` to the ground state; returns it with the time ``T`` reached.

    Conflicting interleavings are retried with randomly perturbed hop choices.
    """
    cfg = settings or PlannerSettings.load()
    tol = tolerances or Tolerances.load()
    report = check_admissible(state, tolerances=tol)
    if not report.ok:
        raise InadmissibleState(report)
    if state.is_empty and all(_at_rest(d) for d in state.disks):
        return InjectionSchedule(horizon=state.t), state.t
    require_controllable(state.chain.cell)

    failure: SchedulingConflict | None = None
    for attempt in range(cfg.path_retries + 1):
        rng = np.random.default_rng(cfg.seed + attempt)
        try:
            return _movie(state, cfg, tol, rng)
        except SchedulingConflict as exc:
            failure = exc
            _logger.warning("Emptying attempt %d failed (%s); retrying with new paths", attempt + 1, exc)
    assert failure is not None
    raise failure
