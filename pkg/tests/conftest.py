"""Shared cells, chains and config isolation for the test suite."""

from __future__ import annotations

import math

import pytest
from hypothesis import HealthCheck, settings

from scatterchain.config import Tolerances, override_config
from scatterchain.dynamics import Particle, SystemState
from scatterchain.geometry import Cell, Chain, build_cell
from scatterchain.geometry.fixtures import concentric_spec, four_arc_spec, tailed_spec

DEFAULTS = Tolerances()

# The autouse config fixture is stateless between examples.
settings.register_profile("scatterchain", suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("scatterchain")


@pytest.fixture(autouse=True)
def _isolated_config():
    """Keep process environment variables out of every test."""
    with override_config() as repo:
        yield repo


@pytest.fixture(scope="session")
def four_arc_cell() -> Cell:
    return build_cell(four_arc_spec(), tolerances=DEFAULTS)


@pytest.fixture(scope="session")
def tailed_cell() -> Cell:
    return build_cell(tailed_spec(), tolerances=DEFAULTS)


@pytest.fixture(scope="session")
def concentric_cell() -> Cell:
    return build_cell(concentric_spec(), tolerances=DEFAULTS, strict=False)


@pytest.fixture(scope="session")
def chain1(four_arc_cell) -> Chain:
    return Chain(four_arc_cell, 1)


@pytest.fixture(scope="session")
def chain2(four_arc_cell) -> Chain:
    return Chain(four_arc_cell, 2)


@pytest.fixture(scope="session")
def chain3(four_arc_cell) -> Chain:
    return Chain(four_arc_cell, 3)


@pytest.fixture
def resident(chain1) -> SystemState:
    """One particle heading up-right from the left part of a single cell."""
    angle = 0.4
    return SystemState(
        t=0.0,
        chain=chain1,
        particles=(Particle("p1", 1, (0.7, 0.05), (math.cos(angle), math.sin(angle))),),
    )
