"""Tests for the ``config()`` lookup function."""

import pytest

from scatterchain.config import (
    UNDEFINED,
    Choices,
    ConfigCastError,
    FakeConfigRepository,
    Layer,
    UndefinedValueError,
    config,
)


def _repo(**kwargs) -> FakeConfigRepository:
    return FakeConfigRepository(**kwargs)


class TestBasicLookup:
    def test_required_key_missing_raises(self):
        with pytest.raises(UndefinedValueError, match="tangent"):
            config("tangent", repo=_repo())

    def test_scenario_value(self):
        assert config("tangent", repo=_repo(scenario={"tangent": 1e-8})) == 1e-8

    def test_default_used_when_missing(self):
        assert config("nope", default=0.5, repo=_repo()) == 0.5

    def test_default_none_is_valid(self):
        assert config("nope", default=None, repo=_repo()) is None

    def test_undefined_sentinel_is_falsy(self):
        assert not UNDEFINED
        assert repr(UNDEFINED) == "UNDEFINED"

    def test_layers_can_be_filled_later(self):
        repo = _repo()
        repo.set(Layer.SCENARIO, "angle", 1e-8)
        assert repo.get(Layer.SCENARIO, "angle") == 1e-8
        assert repo.get(Layer.OVERRIDE, "angle") is None
        assert config("angle", repo=repo) == 1e-8


class TestCasting:
    def test_cast_float_from_flag_string(self):
        assert config("time", cast=float, repo=_repo(overrides={"time": "1e-10"})) == 1e-10

    def test_default_not_cast(self):
        assert config("missing", default=42, cast=str, repo=_repo()) == 42

    def test_cast_failure_names_key(self):
        with pytest.raises(ConfigCastError, match="angular_samples") as exc:
            config("angular_samples", cast=int, repo=_repo(overrides={"angular_samples": "many"}))
        assert exc.value.value == "many"

    def test_cast_choices_invalid(self):
        with pytest.raises(ConfigCastError, match="not a valid choice"):
            config("log", cast=Choices(["debug", "info"]), repo=_repo(overrides={"log": "loud"}))


class TestPrecedence:
    def test_env_beats_override(self):
        repo = _repo(env={"TOL_TIME": "1e-9"}, overrides={"time": "1e-10"})
        assert config("time", env="TOL_TIME", cast=float, repo=repo) == 1e-9

    def test_override_beats_scenario(self):
        repo = _repo(overrides={"time": 1e-10}, scenario={"time": 1e-11})
        assert config("time", repo=repo) == 1e-10

    def test_scenario_used_when_override_missing(self):
        assert config("time", repo=_repo(scenario={"time": 1e-11})) == 1e-11

    def test_env_ignored_without_env_name(self):
        repo = _repo(env={"time": "1"}, scenario={"time": 2})
        assert config("time", repo=repo) == 2
