"""Admissibility of a state: every particle's first disk hit is well defined."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..config import Tolerances
from ..dynamics import DynamicsError, Particle, SystemState, UndefinedEvent, UndefinedKind, contact_normal
from ..geometry import cast_ray
from ._errors import SchedulingConflict
from .timeline import Contact, coast, exit_time


@dataclass(frozen=True)
class Violation:
    """One failed condition: ``item`` numbers the condition, 1 to 5."""

    item: int
    particle: str
    message: str


@dataclass(frozen=True)
class AdmissibilityReport:
    violations: tuple[Violation, ...] = ()
    first_hits: tuple[tuple[str, float], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok


def _inside(state: SystemState, p: Particle) -> bool:
    chain = state.chain
    spec = chain.cell.spec
    if not 1 <= p.cell_index <= chain.n_cells:
        return False
    x, y = p.q[0] - chain.offset(p.cell_index), p.q[1]
    if not 0.0 < x < spec.width:
        return False
    if math.hypot(x - spec.disk_center[0], y) <= spec.disk_radius:
        return False
    # A point inside the star-shaped cell sees the boundary along every ray.
    return all(cast_ray(chain.cell, x, y, ux, uy) is not None for ux, uy in ((1, 0), (-1, 0), (0, 1), (0, -1)))


def _first_event(state: SystemState, p: Particle, horizon: float, tol: Tolerances) -> tuple[Contact | None, Violation | None]:
    chain = state.chain
    try:
        contact = coast(chain, p.cell_index, p.q, p.v, state.t, particle=p.id, tangent_tol=tol.tangent)
        if contact is None:
            leave = exit_time(chain, p.cell_index, p.q, p.v, state.t, particle=p.id, tangent_tol=tol.tangent)
            if leave > horizon:
                return None, Violation(2, p.id, f"neither hits a disk nor exits by t={horizon!r}")
            return None, None
    except UndefinedEvent as exc:
        item = 5 if exc.kind is UndefinedKind.CORNER else 3
        return None, Violation(item, p.id, str(exc))
    except (DynamicsError, SchedulingConflict) as exc:
        return None, Violation(2, p.id, str(exc))
    if contact.time > horizon:
        return None, Violation(2, p.id, f"first disk hit at t={contact.time!r} is past t={horizon!r}")
    normal = contact_normal(chain, contact.disk, contact.point)
    vn = contact.v[0] * normal[0] + contact.v[1] * normal[1]
    if -vn < tol.tangent * math.hypot(*contact.v):
        return contact, Violation(3, p.id, f"tangent hit on disk {contact.disk}: v_n={vn!r}")
    return contact, None


def check_admissible(
    state: SystemState, t_max: float = math.inf, *, tolerances: Tolerances | None = None
) -> AdmissibilityReport:
    """Check each particle alone up to its first disk hit or exit.

    Conditions: (1) the particle starts inside a cell with nonzero velocity,
    (2) it hits a disk or exits by ``state.t + t_max``, (3) its first disk
    hit is not tangent, (4) first disk hits of different particles are
    separated in time, (5) no flight ends near a corner.
    """
    tol = tolerances or Tolerances.load()
    horizon = state.t + t_max
    violations: list[Violation] = []
    hits: list[tuple[str, float]] = []
    for p in state.particles:
        if not _inside(state, p):
            violations.append(Violation(1, p.id, f"position {p.q} is not inside cell {p.cell_index}"))
            continue
        if p.speed == 0.0:
            violations.append(Violation(1, p.id, "particle is at rest"))
            continue
        contact, problem = _first_event(state, p, horizon, tol)
        if problem is not None:
            violations.append(problem)
        elif contact is not None:
            hits.append((p.id, contact.time))
    for (a, ta), (b, tb) in itertools.combinations(sorted(hits, key=lambda h: h[1]), 2):
        if abs(tb - ta) < tol.time * max(1.0, abs(ta), abs(tb)):
            violations.append(Violation(4, b, f"first disk hit coincides with {a!r} at t={tb!r}"))
    return AdmissibilityReport(tuple(violations), tuple(hits))
