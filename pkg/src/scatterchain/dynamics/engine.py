"""Event-driven simulation of the chain under the collision rules."""

from __future__ import annotations

import bisect
import copy
import heapq
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

from ..config import Tolerances
from ..geometry import HitKind
from ._errors import NoEventWithinHorizon, ScheduleError, UndefinedEvent, UndefinedKind
from .events import Event, EventKind
from .kinematics import Flight, injection_point, next_flight, resolve
from .state import DiskState, Injection, Particle, Role, SystemState

_logger = logging.getLogger(__name__)


@dataclass
class Track:
    """Mutable per-particle record: reference point, velocity and the cached next flight."""

    id: str
    role: Role
    cell_index: int
    q: tuple[float, float]
    v: tuple[float, float]
    t_ref: float
    flight: Flight | None = None
    version: int = 0

    def position(self, t: float) -> tuple[float, float]:
        dt = t - self.t_ref
        return (self.q[0] + self.v[0] * dt, self.q[1] + self.v[1] * dt)


def _injections_of(schedule: object) -> list[Injection]:
    if schedule is None:
        return []
    items = getattr(schedule, "injections", schedule)
    return list(items)  # type: ignore[arg-type]


class Simulation:
    """Mutable run of the flow; one instance per replay, never shared."""

    def __init__(
        self,
        state: SystemState,
        schedule: Iterable[Injection] | object = (),
        *,
        tolerances: Tolerances | None = None,
    ) -> None:
        self.chain = state.chain
        self.tol = tolerances or Tolerances.load()
        self.t = state.t
        self.disks: list[DiskState] = list(state.disks)
        self._disk_clock = state.t
        self.trace: list[Event] = []
        self._tracks: dict[str, Track] = {}
        self._heap: list[tuple[float, int, str, int]] = []
        self._seq = 0
        self._injections = self._validated(_injections_of(schedule))
        self._next_injection = 0
        for particle in state.particles:
            self._add(particle.id, particle.role, particle.cell_index, particle.q, particle.v, state.t)

    # -- setup ----------------------------------------------------------------

    def _validated(self, injections: Sequence[Injection]) -> list[Injection]:
        previous = self.t
        for injection in injections:
            if injection.time < previous:
                raise ScheduleError(
                    f"Injection at t={injection.time!r} is out of order or before t={self.t!r}"
                )
            if abs(injection.y) >= self.chain.cell.spec.opening_half_height:
                raise ScheduleError(f"Injection ordinate {injection.y!r} is outside the opening")
            previous = injection.time
        return list(injections)

    def _add(
        self, pid: str, role: Role, cell_index: int, q: tuple[float, float], v: tuple[float, float], t: float
    ) -> None:
        if pid in self._tracks:
            raise ScheduleError(f"Duplicate particle id {pid!r}")
        track = Track(pid, role, cell_index, q, v, t)
        self._tracks[pid] = track
        self._schedule(track)

    def _schedule(self, track: Track) -> None:
        track.version += 1
        track.flight = next_flight(self.chain, track.cell_index, track.q, track.v)
        if track.flight is not None:
            when = track.t_ref + track.flight.dt
            self._seq += 1
            heapq.heappush(self._heap, (when, self._seq, track.id, track.version))

    # -- planning hooks ----------------------------------------------------------

    @property
    def injections(self) -> tuple[Injection, ...]:
        return tuple(self._injections)

    def track(self, pid: str) -> Track | None:
        return self._tracks.get(pid)

    def tracks(self) -> list[Track]:
        return list(self._tracks.values())

    def add_injection(self, injection: Injection) -> None:
        """Queue ``injection``; it may not precede the current time."""
        if injection.time < self.t:
            raise ScheduleError(f"Injection at t={injection.time!r} precedes t={self.t!r}")
        self._validated([injection])
        times = [inj.time for inj in self._injections]
        position = max(bisect.bisect_right(times, injection.time), self._next_injection)
        self._injections.insert(position, injection)

    def fork(self) -> Simulation:
        """Independent copy sharing only immutable data."""
        other = copy.copy(self)
        other.disks = list(self.disks)
        other.trace = list(self.trace)
        other._tracks = {pid: replace(tr) for pid, tr in self._tracks.items()}
        other._heap = list(self._heap)
        other._injections = list(self._injections)
        return other

    # -- event selection ------------------------------------------------------

    def _peek_hit(self) -> tuple[float, Track] | None:
        while self._heap:
            when, _, pid, version = self._heap[0]
            track = self._tracks.get(pid)
            if track is None or track.version != version:
                heapq.heappop(self._heap)
                continue
            return when, track
        return None

    def _time_tolerance(self, t: float) -> float:
        return self.tol.time * max(1.0, abs(t))

    def _check_simultaneous(self, when: float, track: Track) -> None:
        flight = track.flight
        assert flight is not None
        if flight.hit.kind is not HitKind.DISK:
            return
        for other in self._tracks.values():
            if other is track or other.flight is None:
                continue
            of = other.flight
            if of.hit.kind is HitKind.DISK and of.cell_index == flight.cell_index:
                if abs(other.t_ref + of.dt - when) < self._time_tolerance(when):
                    raise UndefinedEvent(
                        UndefinedKind.SIMULTANEOUS_DISK_HIT,
                        when,
                        track.id,
                        f"with {other.id!r} on disk {flight.cell_index}",
                    )

    def _advance_disks(self, t: float) -> None:
        dt = t - self._disk_clock
        if dt != 0.0:
            self.disks = [d.advanced(dt) for d in self.disks]
            self._disk_clock = t

    # -- stepping -------------------------------------------------------------

    def next_time(self) -> float:
        candidates = []
        peeked = self._peek_hit()
        if peeked is not None:
            candidates.append(peeked[0])
        if self._next_injection < len(self._injections):
            candidates.append(self._injections[self._next_injection].time)
        return min(candidates) if candidates else math.inf

    def step(self) -> Event:
        """Process the earliest pending event; collisions win ties with injections."""
        peeked = self._peek_hit()
        pending = (
            self._injections[self._next_injection]
            if self._next_injection < len(self._injections)
            else None
        )
        if peeked is None and pending is None:
            raise NoEventWithinHorizon(math.inf)
        if pending is not None and (peeked is None or pending.time < peeked[0]):
            return self._inject(pending)
        assert peeked is not None
        when, track = peeked
        heapq.heappop(self._heap)
        return self._collide(when, track)

    def _inject(self, injection: Injection) -> Event:
        self._next_injection += 1
        pid = injection.label or f"inj-{self._next_injection}"
        cell_index, q = injection_point(self.chain, injection.side, injection.y)
        self.t = injection.time
        self._advance_disks(injection.time)
        self._add(pid, injection.role, cell_index, q, injection.v, injection.time)
        event = Event(
            time=injection.time,
            kind=EventKind.INJECTION,
            particle=pid,
            cell_index=cell_index,
            point=q,
            v_before=injection.v,
            v_after=injection.v,
            side=injection.side,
        )
        self.trace.append(event)
        return event

    def _collide(self, when: float, track: Track) -> Event:
        flight = track.flight
        assert flight is not None
        self._check_simultaneous(when, track)
        self.t = when
        self._advance_disks(when)
        j = flight.cell_index
        disk_before = self.disks[j - 1] if flight.hit.kind is HitKind.DISK else None
        outcome = resolve(
            self.chain,
            flight,
            track.v,
            disk_before,
            time=when,
            particle=track.id,
            tangent_tol=self.tol.tangent,
        )
        kind = {
            HitKind.ARC: EventKind.WALL_HIT,
            HitKind.DISK: EventKind.DISK_HIT,
        }.get(flight.hit.kind, EventKind.CELL_TRANSFER)
        if outcome.exit_side is not None:
            kind = EventKind.EXIT
        if outcome.disk is not None:
            self.disks[j - 1] = outcome.disk
        event = Event(
            time=when,
            kind=kind,
            particle=track.id,
            cell_index=outcome.cell_index,
            point=flight.point,
            v_before=track.v,
            v_after=outcome.v,
            arc=flight.hit.index if kind is EventKind.WALL_HIT else None,
            disk=j if kind is EventKind.DISK_HIT else None,
            side=outcome.exit_side,
            disk_before=disk_before,
            disk_after=outcome.disk,
        )
        self.trace.append(event)
        if outcome.exit_side is not None:
            del self._tracks[track.id]
        else:
            track.q = flight.point
            track.v = outcome.v
            track.t_ref = when
            track.cell_index = outcome.cell_index
            self._schedule(track)
        return event

    def run_until(self, horizon: float) -> None:
        while self.next_time() <= horizon:
            event = self.step()
            _logger.debug("%s %s at t=%r", event.kind.value, event.particle, event.time)

    def state_at(self, t: float) -> SystemState:
        """Snapshot at ``t`` (no later than the next pending event); the run is not changed."""
        dt = t - self._disk_clock
        disks = tuple(d.advanced(dt) if dt != 0.0 else d for d in self.disks)
        particles = tuple(
            Particle(tr.id, tr.cell_index, tr.position(t), tr.v, tr.role)
            for tr in sorted(self._tracks.values(), key=lambda tr: tr.id)
        )
        return SystemState(t=t, chain=self.chain, particles=particles, disks=disks)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def next_event(
    state: SystemState, horizon: float, *, tolerances: Tolerances | None = None
) -> Event:
    """Earliest event after ``state.t`` and no later than ``horizon``; the state is not changed."""
    sim = Simulation(state, tolerances=tolerances)
    if sim.next_time() > horizon:
        raise NoEventWithinHorizon(horizon)
    return sim.step()


def simulate(
    state: SystemState,
    schedule: Iterable[Injection] | object,
    T: float,
    *,
    tolerances: Tolerances | None = None,
) -> tuple[SystemState, list[Event]]:
    """Advance ``state`` to time ``T`` applying ``schedule``; returns the final state and trace."""
    sim = Simulation(state, schedule, tolerances=tolerances)
    late = [inj for inj in sim.injections if inj.time > T]
    if late:
        raise ScheduleError(f"Injection at t={late[0].time!r} is after the horizon T={T!r}")
    sim.run_until(T)
    final = sim.state_at(T)
    _logger.info("Simulated to t=%r: %d events, %d particles left", T, len(sim.trace), len(final.particles))
    return final, sim.trace
