"""Tests for the scatterchain command line and its exit codes."""

from __future__ import annotations

import json
from dataclasses import replace

import pytest
from click.testing import CliRunner

from scatterchain.commands.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, EXIT_UNDEFINED, cli, run_cli
from scatterchain.harness import read_trace, write_trace

ONE = {"id": "p", "cell": 1, "q": [0.5, 0.0], "v": [1.0, 0.0]}


@pytest.fixture
def write_scenario(tmp_path):
    def write(name: str, goal: dict, *, particles=(ONE,), geometry=None) -> str:
        document = {
            "geometry": geometry or {"fixture": "four-arc"},
            "initial": {"particles": list(particles)},
            "goal": goal,
        }
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write


class TestScenarioCommands:
    def test_check_geometry(self, write_scenario):
        path = write_scenario("cell", {"kind": "check-geometry"})
        assert run_cli(["check-geometry", "--scenario", path]) == EXIT_PASS

    def test_run_uses_the_scenario_goal(self, write_scenario):
        path = write_scenario("cell", {"kind": "check-geometry"})
        assert run_cli(["run", "--scenario", path]) == EXIT_PASS

    def test_open_boundary_fails(self, write_scenario):
        geometry = {"width": 4.0, "opening_half_height": 0.25, "disk_radius": 0.5}
        path = write_scenario("open", {"kind": "check-geometry"}, particles=(), geometry=geometry)
        assert run_cli(["check-geometry", "--scenario", path]) == EXIT_FAIL

    def test_simulate_writes_files(self, write_scenario, tmp_path):
        path = write_scenario("head-on", {"kind": "simulate", "T": 3.0})
        out = tmp_path / "out"
        assert run_cli(["simulate", "--scenario", path, "--out", str(out)]) == EXIT_PASS
        assert (out / "head-on.trace.csv").exists()
        assert json.loads((out / "head-on.report.json").read_text(encoding="utf-8"))["passed"] is True

    def test_until_overrides_the_goal(self, write_scenario, tmp_path):
        path = write_scenario("head-on", {"kind": "simulate", "T": 3.0})
        out = tmp_path / "out"
        assert run_cli(["simulate", "--scenario", path, "--until", "0.5", "--out", str(out)]) == EXIT_PASS
        report = json.loads((out / "head-on.report.json").read_text(encoding="utf-8"))
        assert report["goal"]["T"] == 0.5

    def test_simultaneous_hits_are_undefined(self, write_scenario):
        particles = (
            {"id": "a", "cell": 1, "q": [0.5, 0.1], "v": [1.0, 0.0]},
            {"id": "b", "cell": 1, "q": [0.5, -0.1], "v": [1.0, 0.0]},
        )
        path = write_scenario("pair", {"kind": "simulate", "T": 2.0}, particles=particles)
        assert run_cli(["simulate", "--scenario", path]) == EXIT_UNDEFINED

    def test_worst_code_wins(self, write_scenario, tmp_path):
        path = write_scenario("cell", {"kind": "check-geometry"})
        missing = str(tmp_path / "absent.json")
        assert run_cli(["check-geometry", "--scenario", path, "--scenario", missing]) == EXIT_INPUT


class TestInputErrors:
    def test_missing_scenario(self, tmp_path):
        assert run_cli(["check-geometry", "--scenario", str(tmp_path / "absent.json")]) == EXIT_INPUT

    def test_invalid_scenario(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"geometry": {}}', encoding="utf-8")
        assert run_cli(["check-geometry", "--scenario", str(path)]) == EXIT_INPUT

    @pytest.mark.parametrize("pair", ["bogus=1", "corner", "corner="])
    def test_bad_tolerance(self, write_scenario, pair):
        path = write_scenario("cell", {"kind": "check-geometry"})
        assert run_cli(["check-geometry", "--scenario", path, "--tolerance", pair]) == EXIT_INPUT

    def test_tolerance_that_does_not_cast(self, write_scenario):
        path = write_scenario("cell", {"kind": "check-geometry"})
        assert run_cli(["check-geometry", "--scenario", path, "--tolerance", "corner=tiny"]) == EXIT_INPUT

    def test_missing_scenario_option(self):
        assert run_cli(["simulate"]) == EXIT_INPUT


class TestVerify:
    @pytest.fixture
    def trace(self, write_scenario, tmp_path):
        path = write_scenario("head-on", {"kind": "simulate", "T": 3.0})
        out = tmp_path / "out"
        assert run_cli(["simulate", "--scenario", path, "--out", str(out)]) == EXIT_PASS
        return out / "head-on.trace.csv"

    def test_clean_trace(self, trace):
        assert run_cli(["verify", str(trace)]) == EXIT_PASS

    def test_tampered_trace(self, trace, tmp_path):
        events = read_trace(trace)
        events[-1] = replace(events[-1], time=events[-1].time + 0.1)
        tampered = tmp_path / "tampered.csv"
        write_trace(events, tampered)
        assert run_cli(["verify", str(tampered), "--out", str(tmp_path / "v")]) == EXIT_FAIL
        assert (tmp_path / "v" / "tampered.verify.json").exists()

    def test_missing_trace(self, tmp_path):
        assert run_cli(["verify", str(tmp_path / "absent.csv")]) == EXIT_INPUT


class TestHelp:
    def test_lists_commands(self):
        result = CliRunner().invoke(cli, ["--help"])
        assert result.exit_code == 0
        for name in ("check-geometry", "illuminate", "simulate", "synthesize-empty", "control-disk", "verify"):
            assert name in result.output
