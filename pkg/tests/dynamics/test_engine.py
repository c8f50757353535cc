"""Tests for the event-driven simulator."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from scatterchain.dynamics import (
    DiskState,
    EventKind,
    Injection,
    NoEventWithinHorizon,
    Particle,
    ScheduleError,
    Side,
    Simulation,
    SystemState,
    UndefinedEvent,
    UndefinedKind,
    energy,
    next_event,
    reverse,
    simulate,
)
from scatterchain.harness import trace_residuals


def _one(chain, q, v, disks=()):
    return SystemState(0.0, chain, particles=(Particle("p", 1, q, v),), disks=disks)


class TestSingleParticle:
    def test_head_on_bounce_and_exit(self, chain1):
        final, events = simulate(_one(chain1, (0.5, 0.0), (1.0, 0.0)), (), 5.0)
        assert [e.kind for e in events] == [EventKind.DISK_HIT, EventKind.EXIT]
        hit, leave = events
        assert hit.time == pytest.approx(1.0)
        assert hit.disk == 1
        assert hit.v_after == pytest.approx((-1.0, 0.0))
        assert leave.time == pytest.approx(2.5)
        assert leave.side is Side.LEFT
        assert final.is_empty
        assert final.t == 5.0

    def test_spin_is_handed_to_the_particle(self, chain1):
        state = _one(chain1, (0.5, 0.0), (1.0, 0.0), disks=(DiskState(0.0, 0.1),))
        _, events = simulate(state, (), 1.0)
        hit = events[-1]
        assert hit.v_after == pytest.approx((-1.0, 0.1))
        assert hit.disk_before.omega == pytest.approx(0.1)
        assert hit.disk_after.omega == pytest.approx(0.0)
        assert hit.disk_before.phi == pytest.approx(0.1)

    def test_disks_drift_between_events(self, chain1):
        final, _ = simulate(SystemState(0.0, chain1, disks=(DiskState(0.0, 0.5),)), (), 2.0)
        assert final.disks[0].phi == pytest.approx(1.0)

    def test_wall_hits_carry_arc_index(self, resident):
        _, events = simulate(resident, (), 3.0)
        walls = [e for e in events if e.kind is EventKind.WALL_HIT]
        assert walls
        assert all(0 <= e.arc < 4 for e in walls)


class TestInjections:
    def test_injected_particle_returns_to_its_bath(self, chain1):
        schedule = [Injection(1.0, Side.LEFT, 0.0, (1.0, 0.0), label="d")]
        final, events = simulate(SystemState.ground(chain1), schedule, 10.0)
        assert [e.kind for e in events] == [EventKind.INJECTION, EventKind.DISK_HIT, EventKind.EXIT]
        assert events[1].time == pytest.approx(2.5)
        assert events[2].time == pytest.approx(4.0)
        assert all(e.particle == "d" for e in events)
        assert final.is_empty

    def test_right_bath_enters_last_cell(self, chain3):
        schedule = [Injection(0.0, Side.RIGHT, 0.0, (-1.0, 0.0))]
        _, events = simulate(SystemState.ground(chain3), schedule, 2.0)
        assert events[0].point == (12.0, 0.0)
        assert events[0].cell_index == 3
        assert events[1].disk == 3

    def test_unlabelled_injections_get_ids(self, chain1):
        schedule = [Injection(0.0, Side.LEFT, 0.0, (1.0, 0.0))]
        _, events = simulate(SystemState.ground(chain1), schedule, 0.5)
        assert events[0].particle == "inj-1"

    def test_out_of_order_schedule(self, chain1):
        schedule = [Injection(2.0, Side.LEFT, 0.0, (1.0, 0.0)), Injection(1.0, Side.LEFT, 0.0, (1.0, 0.0))]
        with pytest.raises(ScheduleError, match="out of order"):
            simulate(SystemState.ground(chain1), schedule, 5.0)

    def test_ordinate_outside_opening(self, chain1):
        with pytest.raises(ScheduleError, match="outside the opening"):
            simulate(SystemState.ground(chain1), [Injection(0.0, Side.LEFT, 0.3, (1.0, 0.0))], 5.0)

    def test_injection_after_horizon(self, chain1):
        with pytest.raises(ScheduleError, match="after the horizon"):
            simulate(SystemState.ground(chain1), [Injection(6.0, Side.LEFT, 0.0, (1.0, 0.0))], 5.0)

    def test_cannot_inject_into_the_past(self, chain1):
        sim = Simulation(SystemState(3.0, chain1))
        with pytest.raises(ScheduleError, match="precedes"):
            sim.add_injection(Injection(1.0, Side.LEFT, 0.0, (1.0, 0.0)))


class TestUndefinedEvents:
    def test_simultaneous_disk_hits(self, chain1):
        state = SystemState(
            0.0,
            chain1,
            particles=(
                Particle("a", 1, (0.5, 0.1), (1.0, 0.0)),
                Particle("b", 1, (0.5, -0.1), (1.0, 0.0)),
            ),
        )
        with pytest.raises(UndefinedEvent) as exc:
            simulate(state, (), 2.0)
        assert exc.value.kind is UndefinedKind.SIMULTANEOUS_DISK_HIT
        assert exc.value.time == pytest.approx(1.0 + 0.5 - math.sqrt(0.24), rel=1e-9)

    def test_corner_hit(self, chain1):
        # Straight at the upper left corner of the opening.
        state = _one(chain1, (1.0, 0.0), (-1.0, 0.25))
        with pytest.raises(UndefinedEvent) as exc:
            simulate(state, (), 5.0)
        assert exc.value.kind is UndefinedKind.CORNER


class TestNextEvent:
    def test_empty_state_has_no_event(self, chain1):
        with pytest.raises(NoEventWithinHorizon):
            next_event(SystemState.ground(chain1), 10.0)

    def test_does_not_mutate(self, chain1):
        state = _one(chain1, (0.5, 0.0), (1.0, 0.0))
        event = next_event(state, 10.0)
        assert event.kind is EventKind.DISK_HIT
        assert state.particles[0].q == (0.5, 0.0)

    def test_horizon_too_short(self, chain1):
        with pytest.raises(NoEventWithinHorizon):
            next_event(_one(chain1, (0.5, 0.0), (1.0, 0.0)), 0.5)


class TestFork:
    def test_fork_is_independent(self, resident):
        sim = Simulation(resident)
        other = sim.fork()
        sim.run_until(2.0)
        assert other.t == 0.0
        assert other.trace == []
        other.run_until(2.0)
        assert other.trace == sim.trace


launch = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)


class TestProperties:
    @given(angle=launch, spin=st.floats(min_value=-2.0, max_value=2.0))
    @settings(max_examples=40, deadline=None)
    def test_energy_is_conserved_along_the_trace(self, chain2, angle, spin):
        state = SystemState(
            0.0,
            chain2,
            particles=(Particle("p", 1, (0.8, 0.1), (math.cos(angle), math.sin(angle))),),
            disks=(DiskState(0.0, spin), DiskState(1.0, -spin)),
        )
        try:
            final, events = simulate(state, (), 15.0)
        except UndefinedEvent:
            assume(False)
        residuals = trace_residuals(events, state)
        assert residuals["energy"] < 1e-12
        assert residuals["position"] < 1e-9
        exited = sum(e.v_after[0] ** 2 + e.v_after[1] ** 2 for e in events if e.kind is EventKind.EXIT)
        assert energy(final) + exited == pytest.approx(energy(state), rel=1e-12)

    @given(angle=launch, spin=st.floats(min_value=-1.0, max_value=1.0))
    @settings(max_examples=30, deadline=None)
    def test_time_reversal_returns_to_start(self, chain1, angle, spin):
        state = SystemState(
            0.0,
            chain1,
            particles=(Particle("p", 1, (0.8, 0.1), (math.cos(angle), math.sin(angle))),),
            disks=(DiskState(0.3, spin),),
        )
        try:
            forward, _ = simulate(state, (), 4.0)
            assume(len(forward.particles) == 1)
            back, _ = simulate(reverse(forward), (), 8.0)
        except UndefinedEvent:
            assume(False)
        returned = reverse(back)
        assert len(returned.particles) == 1
        assert returned.particles[0].q == pytest.approx(state.particles[0].q, abs=1e-8)
        assert returned.particles[0].v == pytest.approx(state.particles[0].v, abs=1e-8)
        assert returned.disks[0].omega == pytest.approx(spin, abs=1e-8)
        assert math.remainder(returned.disks[0].phi - 0.3, 2 * math.pi) == pytest.approx(0.0, abs=1e-8)


def _stream(chain, count: int, seed: int) -> list[Injection]:
    """``count`` injections alternating between the baths, half a time unit apart."""
    rng = np.random.default_rng(seed)
    a = chain.cell.spec.opening_half_height
    stream = []
    for i in range(count):
        side = Side.LEFT if i % 2 == 0 else Side.RIGHT
        heading = rng.uniform(-1.2, 1.2)
        speed = rng.uniform(0.5, 2.0)
        v_x = speed * math.cos(heading) * (1.0 if side is Side.LEFT else -1.0)
        y = float(rng.uniform(-0.8 * a, 0.8 * a))
        stream.append(Injection(0.5 * (i + 1), side, y, (v_x, speed * math.sin(heading))))
    return stream


@pytest.mark.slow
class TestLongRuns:
    def test_energy_balance_over_many_events(self, chain3):
        disks = (DiskState(0.0, 0.7), DiskState(1.0, -0.4), DiskState(2.0, 0.2))
        initial = SystemState(0.0, chain3, disks=disks)
        for seed in range(5):
            stream = _stream(chain3, 4_000, seed)
            try:
                final, events = simulate(initial, stream, stream[-1].time + 50.0)
            except UndefinedEvent:
                continue
            break
        else:
            pytest.fail("every stream met an undefined event")
        assert len(events) >= 10_000
        injected = math.fsum(inj.v[0] ** 2 + inj.v[1] ** 2 for inj in stream)
        exits = [e.v_after for e in events if e.kind is EventKind.EXIT]
        exited = math.fsum(vx**2 + vy**2 for vx, vy in exits)
        balance = energy(initial) + injected
        assert abs(energy(final) + exited - balance) / balance < 1e-8
        assert trace_residuals(events, initial)["energy"] < 1e-12
