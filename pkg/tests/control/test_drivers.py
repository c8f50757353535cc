"""Tests for driver planning and two-driver disk setting."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scatterchain.control import (
    DegenerateWindow,
    InfeasibleDelta,
    NearTangent,
    driver_delta_bound,
    omega_for_direction,
    required_disk_omega,
    set_disk_state,
    solve_phase_omega,
    synth_driver,
)
from scatterchain.dynamics import DiskState, EventKind, Side, SystemState, simulate
from scatterchain.geometry import signed_angle

values = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


class TestBounds:
    def test_delta_bound(self):
        assert driver_delta_bound(0.25, 1.0, -2.0) == pytest.approx(0.25)
        assert math.isinf(driver_delta_bound(0.25, 0.0, 0.0))

    def test_required_omega(self):
        assert required_disk_omega(2.0, math.pi / 4) == pytest.approx(2.0)
        assert required_disk_omega(1.0, 0.0) == 0.0

    def test_tangent_exit_rejected(self):
        with pytest.raises(NearTangent):
            required_disk_omega(1.0, math.pi / 2)

    def test_normal_speed_must_be_positive(self):
        with pytest.raises(ValueError):
            required_disk_omega(0.0, 0.1)

    def test_omega_for_direction_reflects_head_on(self):
        omega = omega_for_direction((1.0, 0.0), (-1.0, 0.0), (-1.0, 0.0))
        assert omega == pytest.approx(0.0, abs=1e-15)


class TestPhaseOmega:
    @given(phi_hat=values, omega_hat=values, phi=values, omega=values)
    def test_phase_is_reached(self, phi_hat, omega_hat, phi, omega):
        w1 = solve_phase_omega(phi_hat, omega_hat, phi, omega, 1.0, 3.0, 4.0)
        reached = phi_hat + omega_hat * 1.0 + w1 * 2.0 + omega * 1.0
        assert signed_angle(reached - phi) == pytest.approx(0.0, abs=1e-9)
        assert abs(w1) <= math.pi / 2 + 1e-12

    def test_degenerate_window(self):
        with pytest.raises(DegenerateWindow):
            solve_phase_omega(0.0, 0.0, 1.0, 0.0, 2.0, 2.0, 4.0)


class TestSynthDriver:
    def test_left_driver_sets_first_disk(self, chain3):
        plan = synth_driver(chain3, 0.0, 0.4, 1.0)
        assert plan.delta_hat == pytest.approx(0.5)
        assert plan.v_x == pytest.approx(6.0)
        assert plan.injection.y == pytest.approx(-0.1)
        final, events = simulate(SystemState.ground(chain3), [plan.injection], 1.0)
        assert final.is_empty
        assert final.disks[0].omega == pytest.approx(0.4)
        assert final.disks[1] == DiskState()
        hit = next(e for e in events if e.kind is EventKind.DISK_HIT)
        assert hit.time == pytest.approx(plan.contact_time)
        assert events[-1].time == pytest.approx(plan.exit_time)
        assert events[-1].side is Side.LEFT

    def test_right_driver_sets_last_disk(self, chain3):
        plan = synth_driver(chain3, 0.0, -0.3, 1.0, side=Side.RIGHT)
        assert plan.disk == 3
        final, _ = simulate(SystemState.ground(chain3), [plan.injection], 1.0)
        assert final.is_empty
        assert final.disks[2].omega == pytest.approx(-0.3)

    def test_explicit_delta_hat_must_fit(self, chain1):
        with pytest.raises(InfeasibleDelta):
            synth_driver(chain1, 0.0, 0.4, 1.0, delta_hat=1.5)
        with pytest.raises(InfeasibleDelta, match="opening"):
            synth_driver(chain1, 0.0, 4.0, 1.0, delta_hat=0.5)

    def test_window_must_be_positive(self, chain1):
        with pytest.raises(InfeasibleDelta):
            synth_driver(chain1, 0.0, 0.4, 0.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_random_plans_replay_exactly(self, chain2, seed):
        rng = np.random.default_rng(seed)
        omega_hat, omega_target = map(float, rng.uniform(-2.0, 2.0, size=2))
        delta, t0 = float(rng.uniform(0.5, 4.0)), float(rng.uniform(0.1, 3.0))
        side = Side.LEFT if rng.random() < 0.5 else Side.RIGHT
        plan = synth_driver(chain2, omega_hat, omega_target, delta, side=side, t0=t0)
        disks = [DiskState(rng.uniform(-math.pi, math.pi), 0.0) for _ in range(2)]
        disks[plan.disk - 1] = DiskState(disks[plan.disk - 1].phi, omega_hat)
        state = SystemState(0.0, chain2, disks=tuple(disks))
        final, events = simulate(state, [plan.injection], t0 + delta)
        assert final.is_empty
        exact = pytest.approx(omega_target, rel=1e-12, abs=1e-12)
        assert final.disks[plan.disk - 1].omega == exact
        hit = next(e for e in events if e.kind is EventKind.DISK_HIT)
        assert hit.time == pytest.approx(plan.contact_time, rel=1e-12)
        assert events[-1].time == pytest.approx(plan.exit_time, rel=1e-12)
        assert events[-1].side is side


class TestSetDiskState:
    @pytest.mark.parametrize("side, disk", [(Side.LEFT, 1), (Side.RIGHT, 2)])
    def test_reaches_target(self, chain2, side, disk):
        target = DiskState(1.0, 0.3)
        schedule = set_disk_state(chain2, DiskState(), target, 4.0, side=side)
        assert len(schedule) == 2
        final, _ = simulate(SystemState.ground(chain2), schedule.injections, 4.0)
        assert final.is_empty
        reached = final.disks[disk - 1]
        assert signed_angle(reached.phi - target.phi) == pytest.approx(0.0, abs=1e-9)
        assert reached.omega == pytest.approx(target.omega, abs=1e-12)

    def test_windows_do_not_overlap(self, chain1):
        schedule = set_disk_state(chain1, DiskState(), DiskState(2.0, -0.5), 4.0)
        first, second = schedule.windows
        assert first.end < second.start
        assert first.start < first.contact < first.end

    def test_offset_start(self, chain1):
        start = SystemState(2.0, chain1, disks=(DiskState(0.5, 0.1),))
        schedule = set_disk_state(chain1, start.disks[0], DiskState(3.0, 0.0), 4.0, t0=2.0)
        final, _ = simulate(start, schedule.injections, 6.0)
        assert signed_angle(final.disks[0].phi - 3.0) == pytest.approx(0.0, abs=1e-9)
        assert final.disks[0].omega == pytest.approx(0.0, abs=1e-12)

    def test_simultaneous_entry_variant(self, chain1):
        schedule = set_disk_state(
            chain1, DiskState(), DiskState(0.3, 0.2), 2.0, delta_hats=(0.4, 0.8)
        )
        assert {inj.time for inj in schedule.injections} == {0.0}
        final, _ = simulate(SystemState.ground(chain1), schedule.injections, 2.0)
        assert signed_angle(final.disks[0].phi - 0.3) == pytest.approx(0.0, abs=1e-9)
        assert final.disks[0].omega == pytest.approx(0.2, abs=1e-12)

    def test_nothing_to_do(self, chain1):
        schedule = set_disk_state(chain1, DiskState(0.0, 0.25), DiskState(1.0, 0.25), 4.0)
        assert schedule.is_empty
        assert schedule.horizon == 4.0

    def test_bad_hats(self, chain1):
        with pytest.raises(InfeasibleDelta):
            set_disk_state(chain1, DiskState(), DiskState(1.0, 0.0), 1.0, delta_hats=(0.6, 0.4))
