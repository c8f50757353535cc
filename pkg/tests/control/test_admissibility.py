"""Tests for the admissibility check of system states."""

import pytest

from scatterchain.control import check_admissible
from scatterchain.dynamics import Particle, SystemState


def _state(chain, *particles):
    return SystemState(0.0, chain, particles=particles)


class TestCheckAdmissible:
    def test_ground_state(self, chain1):
        report = check_admissible(SystemState.ground(chain1))
        assert report.ok
        assert report.first is None

    def test_head_on_particle(self, chain1):
        report = check_admissible(_state(chain1, Particle("p", 1, (0.5, 0.0), (1.0, 0.0))))
        assert report
        assert report.first_hits == (("p", pytest.approx(1.0)),)

    def test_particle_inside_disk(self, chain1):
        report = check_admissible(_state(chain1, Particle("p", 1, (2.0, 0.1), (1.0, 0.0))))
        assert report.first.item == 1
        assert report.first.particle == "p"

    def test_particle_in_missing_cell(self, chain1):
        report = check_admissible(_state(chain1, Particle("p", 2, (4.5, 0.0), (1.0, 0.0))))
        assert report.first.item == 1

    def test_particle_at_rest(self, chain1):
        report = check_admissible(_state(chain1, Particle("p", 1, (0.5, 0.0), (0.0, 0.0))))
        assert report.first.item == 1
        assert "rest" in report.first.message

    def test_first_hit_past_horizon(self, chain1):
        state = _state(chain1, Particle("p", 1, (0.5, 0.0), (1.0, 0.0)))
        report = check_admissible(state, t_max=0.5)
        assert report.first.item == 2

    def test_exit_is_fine(self, chain1):
        state = _state(chain1, Particle("p", 1, (1.0, 0.0), (-1.0, 0.0)))
        assert check_admissible(state, t_max=2.0).ok
        assert check_admissible(state, t_max=0.5).first.item == 2

    def test_coinciding_first_hits(self, chain1):
        state = _state(
            chain1,
            Particle("a", 1, (0.5, 0.1), (1.0, 0.0)),
            Particle("b", 1, (0.5, -0.1), (1.0, 0.0)),
        )
        report = check_admissible(state)
        assert [v.item for v in report.violations] == [4]
