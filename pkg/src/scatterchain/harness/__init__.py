"""Scenario and trace files, verification reports and the illumination oracle."""

from __future__ import annotations

from ._errors import HarnessError, ScenarioError, TraceError
from .oracle import mc_illumination_oracle
from .report import Residual, VerificationReport
from .runner import Runner, run_scenario, trace_residuals, verify_trace
from .scenario import (
    GOAL_KINDS,
    CheckGeometryGoal,
    ControlDiskGoal,
    GeometryModel,
    IlluminateGoal,
    InitialModel,
    InjectionModel,
    ParticleModel,
    ReverseCheckGoal,
    Scenario,
    SimulateGoal,
    SynthesizeEmptyGoal,
    dump_scenario,
    load_scenario,
    parse_scenario,
    save_scenario,
)
from .trace import COLUMNS, TraceRow, dumps_trace, export_xlsx, loads_trace, read_trace, write_trace

__all__ = [
    "COLUMNS",
    "CheckGeometryGoal",
    "ControlDiskGoal",
    "GOAL_KINDS",
    "GeometryModel",
    "HarnessError",
    "IlluminateGoal",
    "InitialModel",
    "InjectionModel",
    "ParticleModel",
    "Residual",
    "ReverseCheckGoal",
    "Runner",
    "Scenario",
    "ScenarioError",
    "SimulateGoal",
    "SynthesizeEmptyGoal",
    "TraceError",
    "TraceRow",
    "VerificationReport",
    "dump_scenario",
    "dumps_trace",
    "export_xlsx",
    "load_scenario",
    "loads_trace",
    "mc_illumination_oracle",
    "parse_scenario",
    "read_trace",
    "run_scenario",
    "save_scenario",
    "trace_residuals",
    "verify_trace",
    "write_trace",
]
