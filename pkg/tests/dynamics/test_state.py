"""Tests for disks, injections and system states."""

import math

import pytest

from scatterchain.dynamics import DiskState, Injection, Particle, Side, SystemState, energy, reverse


class TestDiskState:
    def test_angle_is_reduced(self):
        assert DiskState(7.0, 1.0).phi == pytest.approx(7.0 - 2 * math.pi)

    def test_advanced(self):
        disk = DiskState(0.5, -0.25).advanced(2.0)
        assert disk.phi == pytest.approx(0.0, abs=1e-15)
        assert disk.omega == -0.25

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            DiskState(math.nan, 0.0)


class TestInjection:
    def test_must_point_inward(self):
        with pytest.raises(ValueError, match="does not point into"):
            Injection(0.0, Side.LEFT, 0.0, (-1.0, 0.0))
        with pytest.raises(ValueError):
            Injection(0.0, Side.RIGHT, 0.0, (1.0, 0.0))

    def test_must_be_finite(self):
        with pytest.raises(ValueError, match="finite"):
            Injection(math.inf, Side.LEFT, 0.0, (1.0, 0.0))


class TestSystemState:
    def test_ground_state(self, chain3):
        ground = SystemState.ground(chain3)
        assert ground.is_empty
        assert ground.disks == (DiskState(),) * 3
        assert energy(ground) == 0.0

    def test_disk_count_must_match(self, chain3):
        with pytest.raises(ValueError, match="Expected 3 disks"):
            SystemState(0.0, chain3, disks=(DiskState(),))

    def test_particle_ids_unique(self, chain1):
        p = Particle("a", 1, (0.5, 0.0), (1.0, 0.0))
        with pytest.raises(ValueError, match="unique"):
            SystemState(0.0, chain1, particles=(p, p))

    def test_energy_and_reverse(self, chain1):
        state = SystemState(
            0.0, chain1, particles=(Particle("a", 1, (0.5, 0.0), (3.0, 4.0)),), disks=(DiskState(1.0, 2.0),)
        )
        assert energy(state) == pytest.approx(29.0)
        flipped = reverse(state)
        assert flipped.particles[0].v == (-3.0, -4.0)
        assert flipped.disks[0] == DiskState(1.0, -2.0)
        assert energy(flipped) == energy(state)
        assert reverse(flipped) == state
