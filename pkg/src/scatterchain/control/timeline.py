"""A planning timeline: a live simulation that plans can be appended to and rolled back.

Plans are built against the realized state of the system, so every
prediction is the replay itself. Nested plans run inside :class:`Atomic`
blocks; a failed attempt rolls the timeline back to its savepoint.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator
from contextlib import ContextDecorator, contextmanager
from dataclasses import dataclass, field

import numpy as np

from ..config import Tolerances
from ..dynamics import (
    DiskState,
    Event,
    EventKind,
    Injection,
    Simulation,
    SystemState,
    next_flight,
    resolve,
)
from ..geometry import Chain, HitKind, Point
from ._errors import SchedulingConflict, WindowTooShort
from .schedule import DriverWindow, ExpectedHit, InjectionSchedule

_logger = logging.getLogger(__name__)

_MAX_BOUNCES = 10_000


@dataclass(frozen=True)
class Contact:
    """Predicted disk contact: incoming velocity ``v`` at ``point`` on disk ``disk``."""

    time: float
    disk: int
    point: Point
    v: Point


def _free_flight(
    chain: Chain, cell_index: int, q: Point, v: Point, t: float, particle: str, tangent_tol: float
) -> tuple[Contact | None, float]:
    for _ in range(_MAX_BOUNCES):
        flight = next_flight(chain, cell_index, q, v)
        if flight is None or math.isinf(flight.dt):
            return None, math.inf
        when = t + flight.dt
        if flight.hit.kind is HitKind.DISK:
            return Contact(when, flight.cell_index, flight.point, v), math.inf
        outcome = resolve(chain, flight, v, None, time=when, particle=particle, tangent_tol=tangent_tol)
        if outcome.exit_side is not None:
            return None, when
        q, v, t, cell_index = flight.point, outcome.v, when, outcome.cell_index
    raise SchedulingConflict(t, f"particle {particle!r} bounces without reaching a disk")


def coast(
    chain: Chain,
    cell_index: int,
    q: Point,
    v: Point,
    t: float,
    *,
    particle: str = "",
    tangent_tol: float = 1e-9,
) -> Contact | None:
    """Next disk contact of a free particle, or ``None`` if it leaves the chain first.

    Walls and interior openings are resolved with the simulator's own
    functions, so the prediction matches the replay bit for bit.
    """
    return _free_flight(chain, cell_index, q, v, t, particle, tangent_tol)[0]


def exit_time(
    chain: Chain,
    cell_index: int,
    q: Point,
    v: Point,
    t: float,
    *,
    particle: str = "",
    tangent_tol: float = 1e-9,
) -> float:
    """Time a free particle leaves the chain; ``inf`` if it meets a disk first."""
    return _free_flight(chain, cell_index, q, v, t, particle, tangent_tol)[1]


@dataclass
class TimelineState:
    """Nesting bookkeeping for :class:`Atomic` blocks and deadlines."""

    depth: int = 0
    savepoints: list[str] = field(default_factory=list)
    deadlines: list[float] = field(default_factory=list)


class Savepoint:
    """Captured timeline: the simulation, the annotations made so far and the hop RNG."""

    def __init__(self, timeline: Timeline, name: str) -> None:
        self.name = name
        self._sim = timeline.sim.fork()
        self._hits = len(timeline.hits)
        self._windows = len(timeline.windows)
        self._last_disk_time = timeline.last_disk_time
        self._rng = None if timeline.rng is None else timeline.rng.bit_generator.state

    def restore(self, timeline: Timeline) -> None:
        timeline.sim = self._sim.fork()
        del timeline.hits[self._hits :]
        del timeline.windows[self._windows :]
        timeline.last_disk_time = self._last_disk_time
        if timeline.rng is not None and self._rng is not None:
            timeline.rng.bit_generator.state = self._rng


def _savepoint_name(depth: int) -> str:
    return f"plan_sp_{depth}"


class Atomic(ContextDecorator):
    """Roll the timeline back to the block's entry state when the block raises."""

    def __init__(self, timeline: Timeline) -> None:
        self.timeline = timeline
        self._savepoint: Savepoint | None = None

    def __enter__(self) -> Atomic:
        state = self.timeline.state
        state.depth += 1
        name = _savepoint_name(state.depth)
        state.savepoints.append(name)
        self._savepoint = Savepoint(self.timeline, name)
        return self

    def __exit__(self, exc_type, exc, tb) -> bool | None:
        state = self.timeline.state
        try:
            if exc_type is not None and self._savepoint is not None:
                self._savepoint.restore(self.timeline)
                _logger.debug("Rolled back %s: %s", self._savepoint.name, exc)
        finally:
            if state.savepoints:
                state.savepoints.pop()
            if state.depth > 0:
                state.depth -= 1
        return False


class Timeline:
    """Closed-loop planning surface over a running :class:`Simulation`."""

    def __init__(
        self,
        state: SystemState,
        *,
        tolerances: Tolerances | None = None,
        rng: np.random.Generator | None = None,
    ) -> None:
        self.tolerances = tolerances or Tolerances.load()
        # Hop tie-breaks draw from here; savepoints rewind it with the simulation.
        self.rng = rng
        self.start = state.t
        self.initial = state
        self.sim = Simulation(state, tolerances=self.tolerances)
        self.hits: list[ExpectedHit] = []
        self.windows: list[DriverWindow] = []
        self.last_disk_time = -math.inf
        self.state = TimelineState()
        self._labels = itertools.count(1)

    @property
    def chain(self) -> Chain:
        return self.sim.chain

    @property
    def now(self) -> float:
        return self.sim.t

    @property
    def deadline(self) -> float:
        return min(self.state.deadlines, default=math.inf)

    def label(self, prefix: str) -> str:
        return f"{prefix}-{next(self._labels)}"

    def savepoint(self) -> Savepoint:
        return Savepoint(self, _savepoint_name(self.state.depth + 1))

    def rollback(self, savepoint: Savepoint) -> None:
        savepoint.restore(self)

    @contextmanager
    def within(self, deadline: float) -> Iterator[None]:
        """Events processed inside the block must happen before ``deadline``."""
        self.state.deadlines.append(deadline)
        try:
            yield
        finally:
            self.state.deadlines.pop()

    # -- queries ------------------------------------------------------------

    def disk_state(self, j: int, t: float | None = None) -> DiskState:
        state = self.sim.state_at(self.now if t is None else t)
        return state.disks[j - 1]

    def contact(self, pid: str) -> Contact | None:
        """Next disk contact of particle ``pid`` from its current record."""
        track = self.sim.track(pid)
        if track is None:
            return None
        return coast(
            self.chain, track.cell_index, track.q, track.v, track.t_ref,
            particle=pid, tangent_tol=self.tolerances.tangent,
        )

    def exit_time(self, pid: str) -> float:
        track = self.sim.track(pid)
        if track is None:
            return self.now
        return exit_time(
            self.chain, track.cell_index, track.q, track.v, track.t_ref,
            particle=pid, tangent_tol=self.tolerances.tangent,
        )

    def particles(self) -> list[str]:
        return sorted(tr.id for tr in self.sim.tracks())

    # -- mutation -----------------------------------------------------------

    def inject(self, injection: Injection) -> None:
        self.sim.add_injection(injection)

    def _step(self) -> Event:
        when = self.sim.next_time()
        if when >= self.deadline:
            raise WindowTooShort(self.now, self.deadline, when)
        event = self.sim.step()
        if event.kind is EventKind.DISK_HIT:
            self.last_disk_time = event.time
        return event

    def advance_to(self, t: float) -> None:
        """Process every event up to and including ``t``."""
        while self.sim.next_time() <= t:
            self._step()

    def wait_until(self, t: float) -> None:
        """Like :meth:`advance_to`, and the clock reads ``t`` afterwards even if nothing happened."""
        self.advance_to(t)
        if t > self.sim.t:
            self.sim.t = t

    def advance_through(self, pid: str, contact: Contact) -> Event:
        """Process events until particle ``pid`` has made the predicted disk contact."""
        tol = self.tolerances.time * max(1.0, abs(contact.time))
        while True:
            if self.sim.next_time() > contact.time + tol:
                raise SchedulingConflict(contact.time, f"predicted contact of {pid!r} did not occur")
            event = self._step()
            if event.particle == pid and event.kind is EventKind.DISK_HIT:
                if event.disk != contact.disk:
                    raise SchedulingConflict(event.time, f"{pid!r} hit disk {event.disk}, not {contact.disk}")
                return event

    def run_out(self, horizon: float = math.inf) -> float:
        """Advance until no particle is left or only events past ``horizon`` remain; returns the time."""
        while self.sim.tracks() and self.sim.next_time() <= horizon:
            if math.isinf(self.sim.next_time()):
                break
            self._step()
        return self.now

    # -- results ------------------------------------------------------------

    def record_hit(self, hit: ExpectedHit) -> int:
        self.hits.append(hit)
        return len(self.hits) - 1

    def record_window(self, window: DriverWindow) -> None:
        self.windows.append(window)

    def schedule(self, horizon: float | None = None) -> InjectionSchedule:
        return InjectionSchedule(
            injections=self.sim.injections,
            expected_hits=tuple(self.hits),
            windows=tuple(self.windows),
            horizon=self.now if horizon is None else horizon,
        )


def atomic(timeline: Timeline) -> Atomic:
    """Context manager / decorator rolling ``timeline`` back on error.

    Usage::

        with atomic(timeline):
            place_unit(...)
    """
    return Atomic(timeline)
