"""Tests for the sampling illumination oracle."""

import pytest

from scatterchain.geometry import illuminate
from scatterchain.harness import mc_illumination_oracle


class TestOracle:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_agrees_with_bisection(self, four_arc_cell, k):
        exact = illuminate(four_arc_cell, k)
        sampled = mc_illumination_oracle(four_arc_cell, 20_000, k)
        assert exact.symmetric_difference_measure(sampled) < 1e-2

    def test_union_contains_each_arc(self, four_arc_cell):
        union = mc_illumination_oracle(four_arc_cell, 20_000)
        single = mc_illumination_oracle(four_arc_cell, 20_000, 1)
        assert single.difference(union).measure < 1e-9

    def test_needs_samples(self, four_arc_cell):
        with pytest.raises(ValueError):
            mc_illumination_oracle(four_arc_cell, 0)


@pytest.mark.slow
class TestDenseOracle:
    @pytest.mark.parametrize("cell_name", ["four_arc_cell", "tailed_cell"])
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_matches_within_a_milliradian(self, request, cell_name, k):
        cell = request.getfixturevalue(cell_name)
        exact = illuminate(cell, k)
        sampled = mc_illumination_oracle(cell, 100_000, k)
        assert exact.symmetric_difference_measure(sampled) < 1e-3
