"""Tests for emptying a chain down to the ground state."""

import math

import numpy as np
import pytest

from scatterchain.control import InadmissibleState, check_admissible, empty_system
from scatterchain.dynamics import DiskState, Particle, SystemState, simulate
from scatterchain.geometry import Chain, signed_angle

_SETTLED = 1e-8


def _random_state(chain: Chain, n: int, seed: int) -> SystemState:
    """``n`` residents inside the open strip around the disk axis, disks spinning."""
    rng = np.random.default_rng(seed)
    width = chain.cell.spec.width
    while True:
        particles = []
        while len(particles) < n:
            j = int(rng.integers(1, chain.n_cells + 1))
            x, y = rng.uniform(0.3, width - 0.3), rng.uniform(-0.2, 0.2)
            if math.hypot(x - 0.5 * width, y) < 0.55:
                continue
            speed, heading = rng.uniform(0.5, 1.5), rng.uniform(-math.pi, math.pi)
            particles.append(
                Particle(
                    f"r{len(particles) + 1}",
                    j,
                    (chain.offset(j) + x, y),
                    (speed * math.cos(heading), speed * math.sin(heading)),
                )
            )
        disks = tuple(
            DiskState(rng.uniform(-math.pi, math.pi), rng.uniform(-1.0, 1.0)) for _ in range(chain.n_cells)
        )
        state = SystemState(0.0, chain, particles=tuple(particles), disks=disks)
        if check_admissible(state).ok:
            return state


def _assert_emptied(state: SystemState) -> None:
    schedule, T = empty_system(state)
    assert not schedule.ordering_violations()
    final, _ = simulate(state, schedule.injections, T)
    assert final.particles == ()
    for disk in final.disks:
        assert abs(disk.omega) <= _SETTLED
        assert abs(signed_angle(disk.phi)) <= _SETTLED


class TestEmptySystem:
    def test_ground_state_needs_nothing(self, chain1):
        schedule, T = empty_system(SystemState.ground(chain1, t=3.0))
        assert schedule.is_empty
        assert T == 3.0

    def test_inadmissible_state(self, chain1):
        state = SystemState(0.0, chain1, particles=(Particle("p", 1, (2.0, 0.0), (1.0, 0.0)),))
        with pytest.raises(InadmissibleState):
            empty_system(state)

    @pytest.mark.slow
    def test_single_resident(self, resident):
        schedule, T = empty_system(resident)
        assert T == schedule.notes["T"]
        assert schedule.notes["cleared"] <= T
        assert not schedule.ordering_violations()
        final, events = simulate(resident, schedule.injections, T)
        assert final.particles == ()
        for disk in final.disks:
            assert disk.omega == pytest.approx(0.0, abs=_SETTLED)
            assert signed_angle(disk.phi) == pytest.approx(0.0, abs=_SETTLED)
        assert any(e.particle == "p1" for e in events)


@pytest.mark.slow
class TestRandomStates:
    def test_generator_is_admissible(self, chain2):
        state = _random_state(chain2, 2, seed=0)
        assert len(state.particles) == 2
        assert check_admissible(state).ok

    @pytest.mark.parametrize("seed", [11, 12, 13])
    def test_two_cells_two_residents(self, chain2, seed):
        _assert_emptied(_random_state(chain2, 2, seed))

    @pytest.mark.parametrize(("n", "seed"), [(1, 21), (2, 22), (3, 23)])
    def test_three_cells(self, chain3, n, seed):
        _assert_emptied(_random_state(chain3, n, seed))
