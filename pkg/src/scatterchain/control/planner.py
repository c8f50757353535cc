"""Closed-loop planner over a :class:`Timeline`.

A *unit* is the support that gives one disk a requested spin: a driver
for the disk next to the entry bath, otherwise a controller particle that
crosses the cells in between, hopping on each disk, and hits the leftmost
(or rightmost) point of the target disk with the requested tangential
speed. Every hop of a controller is itself steered by a nested unit placed
in the window before that hop's contact, so plans nest like savepoints.
Units are fitted to their windows by doubling the speed factor ``λ``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..config import PlannerSettings, Tolerances
from ..dynamics import (
    DiskState,
    DynamicsError,
    Event,
    Injection,
    Role,
    Side,
    apply_disk_collision,
    contact_normal,
    injection_point,
    split_velocity,
)
from ..geometry import LEFT, RIGHT, HitKind, Point, cast_ray, direction_at, disk_normal, signed_angle
from ._errors import (
    LambdaOverflow,
    NoLineOfSight,
    RootNotBracketed,
    SchedulingConflict,
    SearchExhausted,
    SynthesisError,
    WindowTooShort,
)
from .drivers import _SAFETY, driver_delta_bound, omega_for_direction, solve_phase_omega, synth_driver
from .hops import choose_hop, hop_graph, invert, sweep
from .schedule import DriverWindow
from .timeline import Contact, Timeline, atomic, coast

_logger = logging.getLogger(__name__)

# A contact this close to a graph node counts as having reached it.
_ARRIVAL = 1e-6
_LOUD_LAMBDA = 2.0**20
_MIN_OUTWARD = 0.2
# Relative drift allowed between a rehearsed controller contact and the replayed one.
_CONTACT_SLIP = 1e-10


class _Miss(SynthesisError):
    pass


@dataclass(frozen=True)
class UnitResult:
    """Realized outcome of a unit: the disk took ``omega`` at ``contact``.

    ``end`` is the unit's last disk contact and ``exit`` the time its last
    particle leaves the chain.
    """

    disk: int
    contact: float
    omega: float
    start: float
    end: float
    exit: float
    lam: float

    @property
    def finish(self) -> float:
        return max(self.end, self.exit)


def _unit(p: Point, q: Point) -> Point:
    dx, dy = q[0] - p[0], q[1] - p[1]
    norm = math.hypot(dx, dy)
    return (dx / norm, dy / norm)


class Planner:
    def __init__(
        self,
        timeline: Timeline,
        *,
        settings: PlannerSettings | None = None,
        tolerances: Tolerances | None = None,
        rng: np.random.Generator | None = None,
    ) -> None:
        self.tl = timeline
        self.settings = settings or PlannerSettings.load()
        self.tol = tolerances or timeline.tolerances
        self.chain = timeline.chain
        self.cell = self.chain.cell
        if rng is not None:
            timeline.rng = rng
        self.graph = hop_graph(
            self.cell, self.settings.hop_samples, settings=self.settings, tolerances=self.tol
        )
        self._zero = frozenset({0})
        self._pi = frozenset({self.graph.samples // 2})
        self._windows: dict[Side, tuple[float, frozenset[int]]] = {}
        self._hints: dict[tuple[int, Side], float] = {}

    @property
    def rng(self) -> np.random.Generator | None:
        return self.tl.rng

    # -- orientation ----------------------------------------------------------

    def side_for(self, disk: int) -> Side:
        """The bath with fewer cells between it and ``disk``."""
        return Side.LEFT if disk - 1 <= self.chain.n_cells - disk else Side.RIGHT

    def bath_disk(self, side: Side) -> int:
        return 1 if side is Side.LEFT else self.chain.n_cells

    def bath_point(self, side: Side) -> Point:
        return (0.0, 0.0) if side is Side.LEFT else (self.chain.length, 0.0)

    def toward(self, side: Side) -> tuple[frozenset[int], Point]:
        """Hop targets and leaving direction for a particle heading to bath ``side``."""
        return (self._pi, (-1.0, 0.0)) if side is Side.LEFT else (self._zero, (1.0, 0.0))

    def _cells(self, disk: int, side: Side) -> list[int]:
        if side is Side.LEFT:
            return list(range(1, disk))
        return list(range(self.chain.n_cells, disk, -1))

    # -- steering -------------------------------------------------------------

    def steer(
        self, pid: str, contact: Contact, u: Point, *, side: Side | None = None, serves: int | None = None
    ) -> Event:
        """Give the contact's disk the spin that sends ``pid`` along ``u``, then let it happen."""
        normal = contact_normal(self.chain, contact.disk, contact.point)
        omega = omega_for_direction(contact.v, normal, u, tolerances=self.tol)
        current = self.tl.disk_state(contact.disk).omega
        if abs(current - omega) > 1e-15 * max(1.0, abs(omega)):
            # Support opens strictly after the previous event, which may be the previous tracer hit.
            gap = contact.time - self.tl.now
            self.tl.wait_until(self.tl.now + min(self.settings.min_window, 0.5 * gap))
            start = self.tl.now
            if serves is not None and serves > 0 and not self.tl.hits[serves - 1].time < start:
                raise SchedulingConflict(start, f"support for hit {serves} would open with hit {serves - 1}")
            result = self.place_unit(contact.disk, omega, contact.time, side=side or self.side_for(contact.disk))
            if serves is not None:
                self.tl.record_window(DriverWindow(start, result.end, contact.disk, result.contact, serves))
        return self.tl.advance_through(pid, contact)

    def decide(
        self, j: int, contact: Contact, targets: frozenset[int], leave: Point, bath: Point | None = None
    ) -> tuple[Point, bool]:
        """Next leaving direction on the way to ``targets``; ``True`` once the route is done."""
        theta = self.chain.disk_angle(j, *contact.point)
        if bath is not None:
            u = _unit(contact.point, bath)
            if self._clear_exit(j, contact, u):
                return u, True
        node = self.graph.node(theta)
        if node in targets and abs(signed_angle(theta - self.graph.angle(node))) < _ARRIVAL:
            return leave, True
        hop = choose_hop(self.graph, theta, targets, rng=self.rng, tolerances=self.tol)
        _logger.debug("Hop on disk %d: θ=%.6f → %.6f (%d left)", j, theta, hop.target, hop.remaining)
        return direction_at(theta, hop.alpha), False

    def _clear_exit(self, j: int, contact: Contact, u: Point) -> bool:
        normal = contact_normal(self.chain, j, contact.point)
        if u[0] * normal[0] + u[1] * normal[1] < _MIN_OUTWARD:
            return False
        offset = self.chain.offset(j)
        hit = cast_ray(self.cell, contact.point[0] - offset, contact.point[1], *u)
        if hit is None or hit.kind is not HitKind.OPENING or hit.corner:
            return False
        if j == 1 and hit.index == LEFT:
            return True
        return j == self.chain.n_cells and hit.index == RIGHT

    def travel(self, pid: str, j: int, targets: frozenset[int], leave: Point, side: Side, *, bath: Point | None = None) -> None:
        """Steer ``pid`` hop by hop on disk ``j`` until it leaves along ``leave`` (or out to ``bath``)."""
        for _ in range(self.graph.samples):
            contact = self.tl.contact(pid)
            if contact is None or contact.disk != j:
                raise SchedulingConflict(self.tl.now, f"{pid!r} did not return to disk {j}")
            u, done = self.decide(j, contact, targets, leave, bath)
            self.steer(pid, contact, u, side=side)
            if done:
                return
        raise SearchExhausted(self.chain.disk_angle(j, *contact.point), self.graph.samples)

    # -- units ------------------------------------------------------------------

    def place_unit(self, disk: int, omega: float, deadline: float, *, side: Side) -> UnitResult:
        """Set ``disk`` spinning at ``omega`` using the window between now and ``deadline``."""
        start = self.tl.now
        width = deadline - start
        if width < self.settings.min_window:
            raise SchedulingConflict(start, f"window {width!r} before disk {disk} contact is too short")
        limit = start + self.settings.window_fill * width
        if disk == self.bath_disk(side):
            with self.tl.within(limit):
                current = self.tl.disk_state(disk).omega
                plan = synth_driver(
                    self.chain, current, omega, limit - start, side=side, t0=start,
                    label=self.tl.label("driver"),
                )
                return self._run_driver(plan)
        return self._fit(
            disk, side, limit - start, limit, lambda lam: self._controller(disk, omega, side, lam, start)
        )

    def place_unit_at(
        self, disk: int, omega: float, contact: float, slot: tuple[float, float], *, side: Side
    ) -> UnitResult:
        """Like :meth:`place_unit`, with the disk contact at ``contact`` and all activity inside ``slot``."""
        lo, hi = slot
        if disk == self.bath_disk(side):
            with self.tl.within(hi):
                current = self.tl.disk_state(disk).omega
                half = min(contact - lo, hi - contact)
                a = self.cell.spec.opening_half_height
                hat = min(2.0 * half, _SAFETY * driver_delta_bound(a, omega, current))
                t0 = contact - 0.5 * hat
                self.tl.advance_to(t0)
                plan = synth_driver(
                    self.chain, current, omega, 4.0 * half, side=side, delta_hat=hat, t0=t0,
                    label=self.tl.label("driver"),
                )
                return self._run_driver(plan)

        def attempt(lam: float) -> UnitResult:
            self.tl.advance_to(lo)
            rehearsal = self.tl.savepoint()
            hints = dict(self._hints)
            dry = self._controller(disk, omega, side, lam, lo)
            self.tl.rollback(rehearsal)
            self._hints = hints
            t_inj = contact - (dry.contact - dry.start)
            finish = contact + (dry.finish - dry.contact)
            if t_inj < lo or finish >= hi:
                raise WindowTooShort(lo, hi, finish)
            result = self._controller(disk, omega, side, lam, t_inj)
            if abs(result.contact - contact) > _CONTACT_SLIP * max(1.0, abs(contact)):
                raise SchedulingConflict(
                    result.contact, f"disk {disk} contact moved from the planned {contact!r}"
                )
            return result

        return self._fit(disk, side, hi - lo, hi, attempt)

    def _fit(
        self, disk: int, side: Side, width: float, limit: float, attempt: Callable[[float], UnitResult]
    ) -> UnitResult:
        hint = self._hints.get((disk, side))
        lam = 1.0
        if hint is not None and hint > width:
            lam = 2.0 ** max(0, math.floor(math.log2(hint / width)) - 1)
        failure: Exception | None = None
        while lam <= self.settings.lambda_cap:
            try:
                with atomic(self.tl), self.tl.within(limit):
                    result = attempt(lam)
            except LambdaOverflow:
                raise
            except (SynthesisError, DynamicsError) as exc:
                failure = exc
                lam *= 2.0
                if lam == _LOUD_LAMBDA:
                    _logger.warning("Speed factor for disk %d passed %g (%s)", disk, lam, exc)
                continue
            self._hints[(disk, side)] = lam * width
            _logger.debug("Unit for disk %d fitted at λ=%g", disk, lam)
            return result
        raise LambdaOverflow(self.settings.lambda_cap, disk) from failure

    def _run_driver(self, plan) -> UnitResult:
        pid = plan.injection.label
        self.tl.inject(plan.injection)
        self.tl.advance_to(plan.injection.time)
        contact = self.tl.contact(pid)
        if contact is None or contact.disk != plan.disk:
            raise NoLineOfSight(
                injection_point(self.chain, plan.injection.side, plan.injection.y)[1],
                plan.contact_point,
                "the realized flight",
            )
        event = self.tl.advance_through(pid, contact)
        assert event.disk_after is not None
        return UnitResult(
            disk=plan.disk,
            contact=event.time,
            omega=event.disk_after.omega,
            start=plan.injection.time,
            end=event.time,
            exit=self.tl.exit_time(pid),
            lam=1.0,
        )

    def _controller(self, disk: int, omega: float, side: Side, lam: float, t_inj: float) -> UnitResult:
        sign = 1.0 if side is Side.LEFT else -1.0
        pid = self.tl.label("controller")
        speed = lam * self.settings.controller_speed
        self.tl.advance_to(t_inj)
        self.tl.inject(Injection(t_inj, side, 0.0, (sign * speed, 0.0), role=Role.CONTROLLER, label=pid))
        self.tl.advance_to(t_inj)

        cells = self._cells(disk, side)
        onward, _ = self.toward(Side.RIGHT if side is Side.LEFT else Side.LEFT)
        for j in cells[:-1]:
            self.travel(pid, j, onward, (sign, 0.0), side)
        self._approach(pid, cells[-1], disk, omega, side)

        contact = self.tl.contact(pid)
        if contact is None or contact.disk != disk:
            raise SchedulingConflict(self.tl.now, f"controller {pid!r} missed disk {disk}")
        event = self.tl.advance_through(pid, contact)
        assert event.disk_after is not None

        home, leave = self.toward(side)
        for j in reversed(cells):
            bath = self.bath_point(side) if j == cells[0] else None
            self.travel(pid, j, home, leave, side, bath=bath)
        return UnitResult(
            disk=disk,
            contact=event.time,
            omega=event.disk_after.omega,
            start=t_inj,
            end=self.tl.last_disk_time,
            exit=self.tl.exit_time(pid),
            lam=lam,
        )

    # -- final approach ---------------------------------------------------------

    def _aim_point(self, disk: int, side: Side) -> Point:
        return self.chain.leftmost(disk) if side is Side.LEFT else self.chain.rightmost(disk)

    def approach_window(self, side: Side) -> tuple[float, frozenset[int]]:
        """Half-width of the launch window facing the next disk, and the nodes whose hops cover it."""
        cached = self._windows.get(side)
        if cached is not None:
            return cached
        spec = self.cell.spec
        center = 0.0 if side is Side.LEFT else math.pi
        target = (spec.width + spec.d, 0.0) if side is Side.LEFT else (-spec.d, 0.0)
        offsets = np.linspace(-0.5 * math.pi, 0.5 * math.pi, 721)
        ok = [self._sight(center + o, target, side) for o in offsets]
        middle = len(offsets) // 2
        if not ok[middle]:
            raise SearchExhausted(center, len(offsets))
        reach = 0
        while middle + reach + 1 < len(ok) and ok[middle + reach + 1] and ok[middle - reach - 1]:
            reach += 1
        half = self.settings.window_fill * abs(offsets[middle + reach] - offsets[middle])
        for _ in range(4):
            nodes = self.graph.covering_nodes(center - half, center + half)
            if nodes:
                self._windows[side] = (half, nodes)
                _logger.debug("Approach window ±%.4f rad, %d launch nodes", half, len(nodes))
                return half, nodes
            half *= 0.5
        raise SearchExhausted(center, self.graph.samples)

    def _sight(self, theta: float, target: Point, side: Side) -> bool:
        cell, spec = self.cell, self.cell.spec
        p = cell.disk_point(theta)
        u = _unit(p, target)
        n = disk_normal(theta)
        if u[0] * n[0] + u[1] * n[1] < _MIN_OUTWARD:
            return False
        hit = cast_ray(cell, p[0], p[1], *u)
        expected = RIGHT if side is Side.LEFT else LEFT
        if hit is None or hit.kind is not HitKind.OPENING or hit.index != expected or hit.corner:
            return False
        x0 = 0.0 if side is Side.LEFT else spec.width
        landing = (target[0] - spec.width, 0.0) if side is Side.LEFT else (target[0] + spec.width, 0.0)
        hit = cast_ray(cell, x0, hit.y, *u)
        if hit is None or hit.kind is not HitKind.DISK or hit.corner:
            return False
        return math.dist((hit.x, hit.y), landing) < 1e-9 * spec.width

    def _approach(self, pid: str, j: int, disk: int, omega: float, side: Side) -> None:
        half, nodes = self.approach_window(side)
        for _ in range(self.graph.samples):
            contact = self.tl.contact(pid)
            if contact is None or contact.disk != j:
                raise SchedulingConflict(self.tl.now, f"{pid!r} did not return to disk {j}")
            theta = self.chain.disk_angle(j, *contact.point)
            node = self.graph.node(theta)
            if node in nodes and abs(signed_angle(theta - self.graph.angle(node))) < _ARRIVAL:
                break
            hop = choose_hop(self.graph, theta, nodes, rng=self.rng, tolerances=self.tol)
            self.steer(pid, contact, direction_at(theta, hop.alpha), side=side)
        else:
            raise SearchExhausted(theta, self.graph.samples)

        aim = self._aim_point(disk, side)
        alpha = self._solve_launch(contact, theta, j, disk, omega, half, aim, side)
        self.steer(pid, contact, direction_at(theta, alpha), side=side)
        landing = self.tl.contact(pid)
        if landing is None or landing.disk != j:
            raise SchedulingConflict(self.tl.now, f"{pid!r} left the launch window")
        self.steer(pid, landing, _unit(landing.point, aim), side=side)

    def _solve_launch(
        self, contact: Contact, theta: float, j: int, disk: int, omega: float, half: float, aim: Point, side: Side
    ) -> float:
        """Launch direction at ``theta`` whose hop and shot arrive at ``aim`` with tangential speed ``omega``."""
        chain, tol = self.chain, self.tol
        normal = contact_normal(chain, j, contact.point)

        def arrival(alpha: float) -> float:
            u = direction_at(theta, alpha)
            v1, _ = apply_disk_collision(contact.v, DiskState(0.0, omega_for_direction(contact.v, normal, u)), normal)
            second = coast(chain, j, contact.point, v1, contact.time, tangent_tol=tol.tangent)
            if second is None or second.disk != j:
                raise _Miss("hop left the disk")
            n2 = contact_normal(chain, j, second.point)
            shot = _unit(second.point, aim)
            v2, _ = apply_disk_collision(second.v, DiskState(0.0, omega_for_direction(second.v, n2, shot)), n2)
            third = coast(chain, j, second.point, v2, second.time, tangent_tol=tol.tangent)
            if third is None or third.disk != disk:
                raise _Miss("shot missed the target disk")
            return split_velocity(third.v, contact_normal(chain, disk, third.point))[1]

        center = 0.0 if side is Side.LEFT else math.pi
        reach = [math.inf, -math.inf]
        for branch in sweep(self.cell, theta, settings=self.settings, tolerances=tol):
            base = branch.offset_of(center, half)
            if base is None:
                continue
            try:
                ends = sorted((invert(self.cell, branch, base - half, tolerances=tol),
                               invert(self.cell, branch, base + half, tolerances=tol)))
                values = [arrival(a) for a in ends]
            except (SynthesisError, DynamicsError):
                continue
            reach = [min(reach[0], *values), max(reach[1], *values)]
            if (values[0] - omega) * (values[1] - omega) > 0.0:
                continue
            try:
                return float(brentq(lambda a: arrival(a) - omega, ends[0], ends[1], xtol=tol.root_xtol))
            except (SynthesisError, DynamicsError):
                continue
        raise RootNotBracketed(omega, reach[0], reach[1])

    # -- phase setting --------------------------------------------------------------

    def phase_set(
        self, disk: int, target: DiskState, slot: tuple[float, float], t_end: float, *, side: Side
    ) -> tuple[UnitResult, UnitResult]:
        """Two units in ``slot`` leaving ``disk`` at ``target`` at time ``t_end``.

        The contacts fall in the middle of each half of the slot.
        """
        lo, hi = slot
        self.tl.advance_to(lo)
        current = self.tl.disk_state(disk, lo)
        h = hi - lo
        c1, c2 = lo + 0.25 * h, lo + 0.75 * h
        omega_1 = solve_phase_omega(
            current.phi, current.omega, target.phi, target.omega, c1 - lo, c2 - lo, t_end - lo,
            tolerances=self.tol,
        )
        first = self.place_unit_at(disk, omega_1, c1, (lo, lo + 0.5 * h), side=side)
        second = self.place_unit_at(disk, target.omega, c2, (lo + 0.5 * h, hi), side=side)
        for result in (first, second):
            self.tl.record_window(DriverWindow(result.start, result.finish, disk, result.contact))
        _logger.info(
            "Disk %d set to (%.6g, %.6g) with contacts at %.6g and %.6g",
            disk, target.phi, target.omega, first.contact, second.contact,
        )
        return first, second

    def control_disk(
        self, disk: int, target: DiskState, start: float, delta: float, *, side: Side, restore: bool = True
    ) -> None:
        """Set ``disk`` to ``target`` at ``start + delta``; other disks on the bath side are restored."""
        end = start + delta
        self.tl.advance_to(start)
        before = self.tl.sim.state_at(start).disks
        if disk == self.bath_disk(side):
            self.phase_set(disk, target, (start, end), end, side=side)
            return
        self.phase_set(disk, target, (start, start + 0.5 * delta), end, side=side)
        if not restore:
            return
        others = self._cells(disk, side)[::-1]
        width = 0.5 * delta / len(others)
        for i, k in enumerate(others):
            lo = start + 0.5 * delta + i * width
            snap = before[k - 1]
            goal = DiskState(snap.phi + snap.omega * delta, snap.omega)
            self.phase_set(k, goal, (lo, lo + width), end, side=side)
