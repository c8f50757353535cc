"""Tests for ray casting, the return map and illuminated segments."""

import math

import numpy as np
import pytest

from scatterchain.geometry import (
    LEFT,
    TWO_PI,
    AngularIntervalSet,
    HitKind,
    InvalidArcIndex,
    angle_from_normal,
    cast_ray,
    cast_rays,
    fixed_point_direction,
    illuminate,
    is_one_controllable,
    return_map,
    return_map_many,
    return_trip,
    signed_angle,
)


class TestRayCasting:
    def test_axis_ray_meets_disk(self, four_arc_cell):
        hit = cast_ray(four_arc_cell, 0.0, 0.0, 1.0, 0.0)
        assert hit.kind is HitKind.DISK
        assert hit.distance == pytest.approx(1.5)
        assert not hit.corner

    def test_ray_from_disk_leaves_through_opening(self, four_arc_cell):
        hit = cast_ray(four_arc_cell, 1.5, 0.0, -1.0, 0.0)
        assert hit.kind is HitKind.OPENING
        assert hit.index == LEFT
        assert (hit.x, hit.y) == pytest.approx((0.0, 0.0))

    def test_disk_can_be_ignored(self, four_arc_cell):
        hit = cast_ray(four_arc_cell, 0.0, 0.0, 1.0, 0.0, include_disk=False)
        assert hit.kind is HitKind.OPENING

    def test_vectorized_agrees_with_scalar(self, four_arc_cell):
        rng = np.random.default_rng(7)
        angles = rng.uniform(0.0, TWO_PI, 200)
        ox, oy = np.full(200, 0.8), np.full(200, 0.1)
        ux, uy = np.cos(angles), np.sin(angles)
        hits = cast_rays(four_arc_cell, ox, oy, ux, uy)
        for i in range(200):
            one = cast_ray(four_arc_cell, 0.8, 0.1, float(ux[i]), float(uy[i]))
            assert one is not None
            assert int(hits.kind[i]) == int(one.kind)
            assert float(hits.distance[i]) == pytest.approx(one.distance, rel=1e-12)


class TestReturnMap:
    def test_concentric_radial_ray_comes_back(self, concentric_cell):
        assert return_map(concentric_cell, math.pi / 2, 0.0) == pytest.approx(math.pi / 2)

    def test_grazing_directions_are_undefined(self, four_arc_cell):
        assert return_trip(four_arc_cell, 1.0, math.pi / 2) is None

    def test_ray_into_opening_is_undefined(self, four_arc_cell):
        assert return_map(four_arc_cell, math.pi, 0.0) is None

    def test_fixed_point_direction_returns_to_start(self, four_arc_cell):
        lit = illuminate(four_arc_cell, 1)
        theta = lit.midpoint_of_largest()
        alpha = fixed_point_direction(four_arc_cell, theta, 1)
        trip = return_trip(four_arc_cell, theta, alpha)
        assert trip is not None
        assert trip.arc == 0
        assert trip.theta == pytest.approx(theta, abs=1e-9)

    @pytest.mark.parametrize("theta, alpha", [(1.2, 0.3), (1.9, -0.2), (4.4, 0.1)])
    def test_reversed_trip_lands_at_start(self, four_arc_cell, theta, alpha):
        trip = return_trip(four_arc_cell, theta, alpha)
        if trip is None:
            pytest.skip("direction leaves the disk-arc-disk class")
        lx, ly = four_arc_cell.disk_point(trip.theta)
        wx, wy = trip.wall_point
        back = angle_from_normal(trip.theta, wx - lx, wy - ly)
        assert return_map(four_arc_cell, trip.theta, back) == pytest.approx(theta, abs=1e-9)

    def test_vectorized_map_matches_scalar(self, four_arc_cell):
        thetas = np.linspace(0.0, TWO_PI, 40, endpoint=False)
        alphas = np.full_like(thetas, 0.2)
        landing, arcs = return_map_many(four_arc_cell, thetas, alphas)
        for theta, out, arc in zip(thetas, landing, arcs):
            trip = return_trip(four_arc_cell, float(theta), 0.2)
            if trip is None:
                assert math.isnan(out)
                assert arc == -1
            else:
                assert out == pytest.approx(trip.theta, abs=1e-12)
                assert arc == trip.arc


class TestIllumination:
    def test_invalid_arc_index(self, four_arc_cell):
        with pytest.raises(InvalidArcIndex, match="1..4"):
            illuminate(four_arc_cell, 5)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_segments_are_proper(self, four_arc_cell, k):
        lit = illuminate(four_arc_cell, k)
        assert 0.0 < lit.measure < TWO_PI

    def test_mirror_arcs_light_mirror_segments(self, four_arc_cell):
        upper, lower = illuminate(four_arc_cell, 1), illuminate(four_arc_cell, 3)
        assert upper.measure == pytest.approx(lower.measure, abs=1e-6)

    def test_four_arc_is_one_controllable(self, four_arc_cell):
        verdict = is_one_controllable(four_arc_cell)
        assert verdict
        assert verdict.witness is None
        assert verdict.coverage.covers_circle()

    def test_tailed_cell_has_a_dark_side(self, tailed_cell):
        verdict = is_one_controllable(tailed_cell)
        assert not verdict
        assert verdict.witness is not None
        assert verdict.witness not in verdict.coverage

    def test_two_arcs_are_never_enough(self, concentric_cell):
        assert not is_one_controllable(concentric_cell)

    def test_uncontrollable_cells_name_a_witness(self, concentric_cell):
        verdict = is_one_controllable(concentric_cell)
        assert isinstance(verdict.witness, float)

    def test_covering_pair_still_gets_a_witness(self, concentric_cell, monkeypatch):
        segments = {
            1: AngularIntervalSet.from_intervals([(0.0, 4.0)]),
            2: AngularIntervalSet.from_intervals([(3.5, TWO_PI + 0.5)]),
        }
        monkeypatch.setattr(
            "scatterchain.geometry.illumination.illuminate", lambda cell, k, tolerances=None: segments[k]
        )
        verdict = is_one_controllable(concentric_cell)
        assert not verdict
        assert verdict.coverage.covers_circle()
        assert isinstance(verdict.witness, float)
        assert sum(verdict.witness in segment for segment in segments.values()) == 1


def _near_edge(lit: AngularIntervalSet, theta: float, margin: float) -> bool:
    return any(abs(signed_angle(theta - end)) < margin for piece in lit for end in piece)


@pytest.mark.slow
class TestFixedPoints:
    @pytest.mark.parametrize("cell_name", ["four_arc_cell", "tailed_cell"])
    def test_segments_are_the_fixed_point_set(self, request, cell_name):
        cell = request.getfixturevalue(cell_name)
        thetas = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
        for k in range(1, len(cell.arcs) + 1):
            lit = illuminate(cell, k)
            for theta in map(float, thetas):
                if _near_edge(lit, theta, 1e-4):
                    continue
                trip = return_trip(cell, theta, fixed_point_direction(cell, theta, k))
                returns = (
                    trip is not None and trip.arc == k - 1 and abs(signed_angle(trip.theta - theta)) < 1e-7
                )
                assert returns == (theta in lit), (k, theta)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_map_pushes_away_from_the_fixed_point(self, four_arc_cell, k):
        theta = illuminate(four_arc_cell, k).midpoint_of_largest()
        alpha_k = fixed_point_direction(four_arc_cell, theta, k)
        for eps in (1e-4, 1e-3, 1e-2):
            above = return_trip(four_arc_cell, theta, alpha_k + eps)
            below = return_trip(four_arc_cell, theta, alpha_k - eps)
            assert above is not None and below is not None
            assert signed_angle(above.theta - theta) > 0.0
            assert signed_angle(below.theta - theta) < 0.0

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_map_is_monotone_around_the_fixed_point(self, four_arc_cell, k):
        theta = illuminate(four_arc_cell, k).midpoint_of_largest()
        alpha_k = fixed_point_direction(four_arc_cell, theta, k)
        offsets = []
        for alpha in alpha_k + np.linspace(-0.02, 0.02, 41):
            trip = return_trip(four_arc_cell, theta, float(alpha))
            assert trip is not None and trip.arc == k - 1
            offsets.append(signed_angle(trip.theta - theta))
        assert np.all(np.diff(offsets) > 0.0)
