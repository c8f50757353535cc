"""Scenario files: a geometry, an initial state, a goal and tolerance overrides.

Scenarios are JSON documents validated by pydantic. Validation errors are
reported with the dotted location of the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..config import PlannerSettings, Tolerances
from ..dynamics import DiskState, Injection, Particle, Role, Side, SystemState
from ..geometry import ArcSpec, Cell, CellSpec, Chain, build_cell
from ..geometry.fixtures import FIXTURES
from ._errors import ScenarioError


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# ---------------------------------------------------------------------------
# Geometry and state
# ---------------------------------------------------------------------------


class ArcModel(_Model):
    center: tuple[float, float]
    radius: float = Field(gt=0)
    angular_span: tuple[float, float]


class GeometryModel(_Model):
    """A named fixture, or an explicit cell."""

    fixture: Literal["four-arc", "tailed", "concentric"] | None = None
    width: float | None = Field(default=None, gt=0)
    opening_half_height: float | None = Field(default=None, gt=0)
    disk_radius: float | None = Field(default=None, gt=0)
    arcs: tuple[ArcModel, ...] = ()
    n_cells: int = Field(default=1, ge=1)
    strict: bool = True

    @model_validator(mode="after")
    def _one_source(self) -> GeometryModel:
        explicit = (self.width, self.opening_half_height, self.disk_radius)
        if self.fixture is None and any(v is None for v in explicit):
            raise ValueError("give either a fixture name or width, opening_half_height and disk_radius")
        if self.fixture is not None and (self.arcs or any(v is not None for v in explicit)):
            raise ValueError("a fixture cannot be combined with explicit cell parameters")
        return self

    def cell_spec(self) -> CellSpec:
        if self.fixture is not None:
            return FIXTURES[self.fixture]()
        assert self.width is not None and self.opening_half_height is not None
        assert self.disk_radius is not None
        return CellSpec(
            width=self.width,
            opening_half_height=self.opening_half_height,
            disk_radius=self.disk_radius,
            arcs=tuple(ArcSpec(a.center, a.radius, a.angular_span) for a in self.arcs),
        )

    def build(self, tolerances: Tolerances | None = None) -> Chain:
        strict = self.strict and self.fixture != "concentric"
        cell: Cell = build_cell(self.cell_spec(), tolerances=tolerances, strict=strict)
        return Chain(cell, self.n_cells)


class ParticleModel(_Model):
    id: str
    cell: int = Field(ge=1)
    q: tuple[float, float]
    v: tuple[float, float]
    role: Role = Role.RESIDENT


class DiskModel(_Model):
    phi: float = 0.0
    omega: float = 0.0


class InjectionModel(_Model):
    time: float
    side: Side
    y: float
    v: tuple[float, float]
    role: Role = Role.DRIVER
    label: str = ""

    def to_injection(self) -> Injection:
        return Injection(self.time, self.side, self.y, self.v, self.role, self.label)


class InitialModel(_Model):
    t: float = 0.0
    particles: tuple[ParticleModel, ...] = ()
    disks: tuple[DiskModel, ...] = ()


# ---------------------------------------------------------------------------
# Goals
# ---------------------------------------------------------------------------


class SimulateGoal(_Model):
    kind: Literal["simulate"] = "simulate"
    T: float = Field(ge=0)


class CheckGeometryGoal(_Model):
    kind: Literal["check-geometry"] = "check-geometry"


class IlluminateGoal(_Model):
    kind: Literal["illuminate"] = "illuminate"
    arc: int | None = Field(default=None, ge=1)
    oracle_samples: int = Field(default=100_000, ge=10_000)


class SynthesizeEmptyGoal(_Model):
    kind: Literal["synthesize-empty"] = "synthesize-empty"


class ControlDiskGoal(_Model):
    kind: Literal["control-disk"] = "control-disk"
    disk: int = Field(ge=1)
    phi: float
    omega: float
    delta: float = Field(gt=0)
    side: Side = Side.LEFT


class ReverseCheckGoal(_Model):
    kind: Literal["reverse-check"] = "reverse-check"
    T: float = Field(ge=0)


Goal = Annotated[
    Union[
        SimulateGoal,
        CheckGeometryGoal,
        IlluminateGoal,
        SynthesizeEmptyGoal,
        ControlDiskGoal,
        ReverseCheckGoal,
    ],
    Field(discriminator="kind"),
]

GOAL_KINDS = (
    "simulate",
    "check-geometry",
    "illuminate",
    "synthesize-empty",
    "control-disk",
    "reverse-check",
)


class Scenario(_Model):
    name: str = ""
    geometry: GeometryModel
    initial: InitialModel = InitialModel()
    goal: Goal
    schedule: tuple[InjectionModel, ...] = ()
    tolerances: dict[str, float] = Field(default_factory=dict)
    rng_seed: int = 0

    @model_validator(mode="after")
    def _indices_in_range(self) -> Scenario:
        n = self.geometry.n_cells
        for i, p in enumerate(self.initial.particles):
            if p.cell > n:
                raise ValueError(f"initial.particles.{i}.cell is {p.cell}, the chain has {n} cells")
        if self.initial.disks and len(self.initial.disks) != n:
            raise ValueError(f"initial.disks has {len(self.initial.disks)} entries for {n} cells")
        if isinstance(self.goal, ControlDiskGoal) and self.goal.disk > n:
            raise ValueError(f"goal.disk is {self.goal.disk}, the chain has {n} cells")
        unknown = set(self.tolerances) - set(Tolerances.model_fields) - set(PlannerSettings.model_fields)
        if unknown:
            raise ValueError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
        return self

    def initial_state(self, chain: Chain) -> SystemState:
        init = self.initial
        return SystemState(
            t=init.t,
            chain=chain,
            particles=tuple(Particle(p.id, p.cell, p.q, p.v, p.role) for p in init.particles),
            disks=tuple(DiskState(d.phi, d.omega) for d in init.disks),
        )

    def injections(self) -> list[Injection]:
        return [inj.to_injection() for inj in self.schedule]

    def with_goal(self, goal: BaseModel) -> Scenario:
        return self.model_copy(update={"goal": goal})


def _location(error: ValidationError) -> tuple[str, str]:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first["loc"])
    return loc, first["msg"]


def parse_scenario(text: str, *, path: Path | str = "<scenario>") -> Scenario:
    try:
        return Scenario.model_validate_json(text)
    except ValidationError as exc:
        location, message = _location(exc)
        if not location and exc.errors()[0]["type"] == "json_invalid":
            message = f"{message} ({exc.errors()[0].get('ctx', {}).get('error', 'invalid JSON')})"
        raise ScenarioError(path, location, message) from exc


def load_scenario(path: Path | str) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(path, "", f"cannot read file: {exc.strerror}") from exc
    return parse_scenario(text, path=path)


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.model_dump(mode="json"), indent=2) + "\n"


def save_scenario(scenario: Scenario, path: Path | str) -> None:
    Path(path).write_text(dump_scenario(scenario), encoding="utf-8")
