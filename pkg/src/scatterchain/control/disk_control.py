"""Set the state of any disk of the chain from one bath."""

from __future__ import annotations

import logging

from ..config import PlannerSettings, Tolerances
from ..dynamics import DiskState, Side, SystemState
from ._errors import InfeasibleDelta, SchedulingConflict
from .drivers import set_disk_state
from .planner import Planner
from .routes import require_controllable
from .schedule import InjectionSchedule
from .timeline import Timeline

_logger = logging.getLogger(__name__)


def _check_quiet(tl: Timeline, end: float) -> None:
    for pid in tl.particles():
        contact = tl.contact(pid)
        if contact is not None and contact.time < end:
            raise SchedulingConflict(contact.time, f"resident {pid!r} hits disk {contact.disk} in the window")


def control_disk(
    state: SystemState,
    j: int,
    phi: float,
    omega: float,
    delta: float,
    *,
    side: Side = Side.LEFT,
    restore: bool = True,
    settings: PlannerSettings | None = None,
    tolerances: Tolerances | None = None,
) -> InjectionSchedule:
    """Schedule leaving disk ``j`` at ``(phi, omega)`` at time ``state.t + delta``.

    Support enters through the ``side`` bath. Every disk between that bath
    and ``j`` ends where it would have been without the call, unless
    ``restore`` is off. Disks beyond ``j`` are never touched.
    """
    chain = state.chain
    if not 1 <= j <= chain.n_cells:
        raise ValueError(f"Disk index {j} is outside 1..{chain.n_cells}")
    if not delta > 0.0:
        raise InfeasibleDelta(delta, 0.0, "the window must be positive")
    tol = tolerances or Tolerances.load()
    end = state.t + delta
    target = DiskState(phi, omega)
    tl = Timeline(state, tolerances=tol)
    _check_quiet(tl, end)

    bath = 1 if side is Side.LEFT else chain.n_cells
    if j == bath:
        return set_disk_state(
            chain, state.disks[j - 1], target, delta, t0=state.t, side=side, tolerances=tol
        )

    require_controllable(chain.cell)
    planner = Planner(tl, settings=settings, tolerances=tol)
    planner.control_disk(j, target, state.t, delta, side=side, restore=restore)
    tl.run_out(end)
    schedule = tl.schedule(horizon=end)
    _logger.info("Disk %d controlled from the %s bath with %d injections", j, side.value, len(schedule))
    return schedule
