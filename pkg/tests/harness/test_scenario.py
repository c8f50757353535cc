"""Tests for scenario parsing, validation errors and persistence."""

import json

import pytest

from scatterchain.harness import (
    ScenarioError,
    SimulateGoal,
    dump_scenario,
    load_scenario,
    parse_scenario,
    save_scenario,
)

HEAD_ON = {
    "name": "head-on",
    "geometry": {"fixture": "four-arc"},
    "initial": {"particles": [{"id": "p", "cell": 1, "q": [0.5, 0.0], "v": [1.0, 0.0]}]},
    "goal": {"kind": "simulate", "T": 3.0},
}


def _text(**changes) -> str:
    return json.dumps({**HEAD_ON, **changes})


class TestParse:
    def test_minimal(self):
        scenario = parse_scenario(_text())
        assert isinstance(scenario.goal, SimulateGoal)
        assert scenario.goal.T == 3.0
        assert scenario.rng_seed == 0

    def test_initial_state(self):
        scenario = parse_scenario(_text(geometry={"fixture": "four-arc", "n_cells": 2}))
        state = scenario.initial_state(scenario.geometry.build())
        assert state.chain.n_cells == 2
        assert [p.id for p in state.particles] == ["p"]
        assert len(state.disks) == 2

    def test_schedule(self):
        text = _text(schedule=[{"time": 0.5, "side": "left", "y": 0.1, "v": [1.0, 0.0], "label": "d"}])
        injection = parse_scenario(text).injections()[0]
        assert injection.label == "d"
        assert injection.y == 0.1

    def test_concentric_fixture_builds(self):
        scenario = parse_scenario(_text(geometry={"fixture": "concentric"}))
        assert not scenario.geometry.build().cell.validated


class TestErrors:
    def test_unknown_tolerance(self):
        with pytest.raises(ScenarioError, match="bogus"):
            parse_scenario(_text(tolerances={"bogus": 1.0}))

    def test_known_tolerance(self):
        assert parse_scenario(_text(tolerances={"corner": 1e-6, "hop_samples": 256})).tolerances["corner"] == 1e-6

    def test_fixture_with_explicit_parameters(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(_text(geometry={"fixture": "four-arc", "width": 4.0}))
        assert exc.value.location == "geometry"

    def test_particle_cell_below_range(self):
        initial = {"particles": [{"id": "p", "cell": 0, "q": [0.5, 0.0], "v": [1.0, 0.0]}]}
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(_text(initial=initial))
        assert exc.value.location == "initial.particles.0.cell"

    def test_particle_cell_above_range(self):
        initial = {"particles": [{"id": "p", "cell": 3, "q": [0.5, 0.0], "v": [1.0, 0.0]}]}
        with pytest.raises(ScenarioError, match="initial.particles.0.cell is 3"):
            parse_scenario(_text(initial=initial))

    def test_unknown_goal(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(_text(goal={"kind": "teleport"}))
        assert exc.value.location == "goal"

    def test_extra_field(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(_text(colour="blue"))
        assert exc.value.location == "colour"

    def test_invalid_json(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario("{not json", path="broken.json")
        assert exc.value.path == "broken.json"
        assert exc.value.location == ""

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read file"):
            load_scenario(tmp_path / "absent.json")


class TestPersistence:
    def test_dump_and_parse(self):
        scenario = parse_scenario(_text(tolerances={"time": 1e-11}))
        assert parse_scenario(dump_scenario(scenario)).model_dump() == scenario.model_dump()

    def test_save_and_load(self, tmp_path):
        scenario = parse_scenario(_text())
        path = tmp_path / "head-on.json"
        save_scenario(scenario, path)
        assert load_scenario(path).model_dump() == scenario.model_dump()
