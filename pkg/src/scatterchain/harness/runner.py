"""Run one scenario goal, replay what it synthesizes and measure the residuals."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from pathlib import Path

from ..config import Tolerances
from ..control import control_disk, empty_system
from ..dynamics import Event, EventKind, SystemState, energy, reverse, simulate
from ..geometry import GeometryError, illuminate, is_one_controllable, signed_angle
from .oracle import mc_illumination_oracle
from .report import VerificationReport
from .scenario import (
    CheckGeometryGoal,
    ControlDiskGoal,
    IlluminateGoal,
    InjectionModel,
    ReverseCheckGoal,
    Scenario,
    SimulateGoal,
    SynthesizeEmptyGoal,
    save_scenario,
)
from .trace import export_xlsx, write_trace

_logger = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-3


# ---------------------------------------------------------------------------
# Trace verification
# ---------------------------------------------------------------------------


def _speed2(v: tuple[float, float]) -> float:
    return v[0] * v[0] + v[1] * v[1]


def trace_residuals(events: Sequence[Event], initial: SystemState | None = None) -> dict[str, float]:
    """Largest relative violations of energy balance and continuity along a trace.

    ``energy``: kinetic plus rotational energy across each event.
    ``velocity``/``position``: each particle's record against its previous event.
    ``disk``: each disk's state against its previous hit (or ``initial``).
    """
    worst = defaultdict(float)
    last: dict[str, Event] = {}
    disks: dict[int, tuple[float, float, float]] = {}
    if initial is not None:
        disks = {j: (initial.t, d.phi, d.omega) for j, d in enumerate(initial.disks, start=1)}

    for event in events:
        before = _speed2(event.v_before)
        after = _speed2(event.v_after)
        if event.kind is EventKind.DISK_HIT and event.disk_before and event.disk_after:
            before += event.disk_before.omega**2
            after += event.disk_after.omega**2
        worst["energy"] = max(worst["energy"], abs(after - before) / max(1.0, before))

        prev = last.get(event.particle)
        if prev is not None:
            dt = event.time - prev.time
            scale = max(1.0, math.sqrt(_speed2(prev.v_after)))
            dv = math.dist(prev.v_after, event.v_before) / scale
            expected = (prev.point[0] + prev.v_after[0] * dt, prev.point[1] + prev.v_after[1] * dt)
            dq = math.dist(expected, event.point) / max(1.0, abs(event.point[0]))
            worst["velocity"] = max(worst["velocity"], dv)
            worst["position"] = max(worst["position"], dq)
        last[event.particle] = event

        if event.kind is EventKind.DISK_HIT and event.disk is not None and event.disk_before:
            seen = disks.get(event.disk)
            if seen is not None:
                t0, phi, omega = seen
                dphi = abs(signed_angle(phi + omega * (event.time - t0) - event.disk_before.phi))
                domega = abs(omega - event.disk_before.omega) / max(1.0, abs(omega))
                worst["disk"] = max(worst["disk"], dphi, domega)
            after_state = event.disk_after or event.disk_before
            disks[event.disk] = (event.time, after_state.phi, after_state.omega)
    for name in ("energy", "velocity", "position", "disk"):
        worst.setdefault(name, 0.0)
    return dict(worst)


def verify_trace(
    events: Sequence[Event], *, initial: SystemState | None = None, tolerance: float = TRACE_TOLERANCE
) -> VerificationReport:
    report = VerificationReport(goal={"kind": "verify"})
    for name, value in trace_residuals(events, initial).items():
        report.record(f"trace_{name}", value, tolerance)
    report.details["events"] = len(events)
    return report


def _energy_balance(initial: SystemState, final: SystemState, events: Sequence[Event]) -> float:
    injected = sum(_speed2(e.v_after) for e in events if e.kind is EventKind.INJECTION)
    exited = sum(_speed2(e.v_after) for e in events if e.kind is EventKind.EXIT)
    start = energy(initial) + injected
    return abs(energy(final) + exited - start) / max(1.0, start)


# ---------------------------------------------------------------------------
# Goals
# ---------------------------------------------------------------------------


class Runner:
    """Executes a scenario's goal; files go to ``out`` when given."""

    def __init__(self, scenario: Scenario, *, out: Path | None = None, xlsx: bool = False) -> None:
        self.scenario = scenario
        self.out = out
        self.xlsx = xlsx
        self.tol = Tolerances.load()
        self.name = scenario.name or "scenario"
        self.report = VerificationReport(
            scenario=self.name, goal=scenario.goal.model_dump(mode="json")
        )

    def run(self) -> VerificationReport:
        goal = self.scenario.goal
        handler = {
            CheckGeometryGoal: self.check_geometry,
            IlluminateGoal: self.illuminate,
            SimulateGoal: self.simulate,
            SynthesizeEmptyGoal: self.synthesize_empty,
            ControlDiskGoal: self.control_disk,
            ReverseCheckGoal: self.reverse_check,
        }[type(goal)]
        handler(goal)
        if self.out is not None:
            self.report.save(self.out / f"{self.name}.report.json")
        _logger.info(self.report.summary())
        return self.report

    # -- helpers ------------------------------------------------------------

    def _chain(self):
        return self.scenario.geometry.build(self.tol)

    def _record_trace(self, initial: SystemState, events: Sequence[Event]) -> None:
        for name, value in trace_residuals(events, initial).items():
            self.report.record(f"trace_{name}", value, TRACE_TOLERANCE)
        self.report.details["events"] = len(events)
        if self.out is not None:
            self.report.trace_digest = write_trace(events, self.out / f"{self.name}.trace.csv")
            if self.xlsx:
                export_xlsx(events, self.out / f"{self.name}.trace.xlsx")

    # -- goals --------------------------------------------------------------

    def check_geometry(self, goal: CheckGeometryGoal) -> None:
        try:
            chain = self._chain()
        except GeometryError as exc:
            self.report.record(f"condition_{exc.condition}", 1.0, 0.0)
            self.report.details["error"] = str(exc)
            return
        verdict = is_one_controllable(chain.cell, tolerances=self.tol)
        self.report.record("geometry_violation", 0.0, 0.0)
        self.report.details.update(
            validated=chain.cell.validated,
            one_controllable=bool(verdict),
            witness=verdict.witness,
        )

    def illuminate(self, goal: IlluminateGoal) -> None:
        cell = self._chain().cell
        arcs = [goal.arc] if goal.arc is not None else list(range(1, len(cell.arcs) + 1))
        lit = {}
        for k in arcs:
            exact = illuminate(cell, k, tolerances=self.tol)
            sampled = mc_illumination_oracle(cell, goal.oracle_samples, k)
            self.report.record(f"oracle_gap_{k}", exact.symmetric_difference_measure(sampled), ORACLE_TOLERANCE)
            lit[str(k)] = [list(iv) for iv in exact]
        verdict = is_one_controllable(cell, tolerances=self.tol)
        self.report.details.update(
            illuminated=lit,
            one_controllable=bool(verdict),
            uncovered=[list(iv) for iv in verdict.coverage.complement()],
            witness=verdict.witness,
        )

    def simulate(self, goal: SimulateGoal) -> None:
        chain = self._chain()
        initial = self.scenario.initial_state(chain)
        final, events = simulate(initial, self.scenario.injections(), initial.t + goal.T, tolerances=self.tol)
        self.report.record("energy_balance", _energy_balance(initial, final, events), TRACE_TOLERANCE)
        self.report.details.update(particles_left=len(final.particles), t=final.t)
        self._record_trace(initial, events)

    def synthesize_empty(self, goal: SynthesizeEmptyGoal) -> None:
        chain = self._chain()
        initial = self.scenario.initial_state(chain)
        schedule, T = empty_system(initial, tolerances=self.tol)
        final, events = simulate(initial, schedule.injections, T, tolerances=self.tol)
        self.report.record("particles_left", len(final.particles), 0)
        self.report.record("max_abs_phi", max((abs(signed_angle(d.phi)) for d in final.disks), default=0.0), 1e-6)
        self.report.record("max_abs_omega", max((abs(d.omega) for d in final.disks), default=0.0), 1e-8)
        self.report.record("windows_out_of_order", len(schedule.ordering_violations()), 0)
        self.report.details.update(T=T, injections=len(schedule), tracer_hits=len(schedule.expected_hits))
        self._record_trace(initial, events)
        self._save_replay(schedule.injections, T - initial.t)

    def control_disk(self, goal: ControlDiskGoal) -> None:
        chain = self._chain()
        initial = self.scenario.initial_state(chain)
        schedule = control_disk(
            initial, goal.disk, goal.phi, goal.omega, goal.delta, side=goal.side, tolerances=self.tol
        )
        end = initial.t + goal.delta
        final, events = simulate(initial, schedule.injections, end, tolerances=self.tol)
        disk = final.disks[goal.disk - 1]
        self.report.record("target_phi", abs(signed_angle(disk.phi - goal.phi)), 1e-6)
        self.report.record("target_omega", abs(disk.omega - goal.omega), 1e-8)
        others = 0.0
        for j, (before, after) in enumerate(zip(initial.disks, final.disks), start=1):
            if j != goal.disk:
                drift = abs(signed_angle(before.phi + before.omega * goal.delta - after.phi))
                others = max(others, drift, abs(before.omega - after.omega))
        self.report.record("other_disks", others, 1e-8)
        self.report.record("particle_count", abs(len(final.particles) - len(initial.particles)), 0)
        self.report.details.update(injections=len(schedule))
        self._record_trace(initial, events)
        self._save_replay(schedule.injections, goal.delta)

    def reverse_check(self, goal: ReverseCheckGoal) -> None:
        chain = self._chain()
        initial = self.scenario.initial_state(chain)
        forward, events = simulate(initial, (), initial.t + goal.T, tolerances=self.tol)
        back, _ = simulate(reverse(forward), (), forward.t + goal.T, tolerances=self.tol)
        returned = reverse(back)
        self.report.record("exited", len(initial.particles) - len(returned.particles), 0)
        width = chain.width
        start = {p.id: p for p in initial.particles}
        dq = dv = 0.0
        for p in returned.particles:
            q0 = start[p.id]
            dq = max(dq, math.dist(p.q, q0.q) / width)
            dv = max(dv, math.dist(p.v, q0.v) / max(1.0, q0.speed))
        dd = max(
            (max(abs(signed_angle(a.phi - b.phi)), abs(a.omega - b.omega))
             for a, b in zip(initial.disks, returned.disks)),
            default=0.0,
        )
        self.report.record("position", dq, 1e-8)
        self.report.record("velocity", dv, 1e-8)
        self.report.record("disks", dd, 1e-8)
        self._record_trace(initial, events)

    def _save_replay(self, injections, duration: float) -> None:
        if self.out is None:
            return
        replay = self.scenario.model_copy(
            update={
                "name": f"{self.name}-replay",
                "goal": SimulateGoal(T=duration),
                "schedule": tuple(
                    InjectionModel(time=i.time, side=i.side, y=i.y, v=i.v, role=i.role, label=i.label)
                    for i in injections
                ),
            }
        )
        save_scenario(replay, self.out / f"{self.name}.replay.json")


def run_scenario(scenario: Scenario, *, out: Path | None = None, xlsx: bool = False) -> VerificationReport:
    return Runner(scenario, out=out, xlsx=xlsx).run()
