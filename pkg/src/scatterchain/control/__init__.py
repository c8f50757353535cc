"""Synthesis of injection schedules: drivers, controllers, routes and the emptying movie."""

from __future__ import annotations

from ._errors import (
    DegenerateWindow,
    InadmissibleState,
    InfeasibleDelta,
    LambdaOverflow,
    NearTangent,
    NoLineOfSight,
    NotOneControllable,
    RootNotBracketed,
    SchedulingConflict,
    SearchExhausted,
    SynthesisError,
    WindowTooShort,
)
from .admissibility import AdmissibilityReport, Violation, check_admissible
from .disk_control import control_disk
from .drivers import (
    DriverPlan,
    driver_delta_bound,
    omega_for_direction,
    required_disk_omega,
    set_disk_state,
    solve_phase_omega,
    synth_driver,
)
from .emptying import empty_system
from .following import follow_path
from .hops import Branch, Hop, HopGraph, choose_hop, hop_graph, invert, sweep
from .paths import AdmissiblePath, PathVertex, VertexKind, check_path
from .planner import Planner, UnitResult
from .routes import plan_exit_path, plan_opening_to_opening, require_controllable
from .schedule import DriverWindow, ExpectedHit, InjectionSchedule
from .timeline import Contact, Timeline, atomic, coast

__all__ = [
    "AdmissibilityReport",
    "AdmissiblePath",
    "Branch",
    "Contact",
    "DegenerateWindow",
    "DriverPlan",
    "DriverWindow",
    "ExpectedHit",
    "Hop",
    "HopGraph",
    "InadmissibleState",
    "InfeasibleDelta",
    "InjectionSchedule",
    "LambdaOverflow",
    "NearTangent",
    "NoLineOfSight",
    "NotOneControllable",
    "PathVertex",
    "Planner",
    "RootNotBracketed",
    "SchedulingConflict",
    "SearchExhausted",
    "SynthesisError",
    "Timeline",
    "UnitResult",
    "VertexKind",
    "Violation",
    "WindowTooShort",
    "atomic",
    "check_admissible",
    "check_path",
    "choose_hop",
    "coast",
    "control_disk",
    "driver_delta_bound",
    "empty_system",
    "follow_path",
    "hop_graph",
    "invert",
    "omega_for_direction",
    "plan_exit_path",
    "plan_opening_to_opening",
    "require_controllable",
    "required_disk_omega",
    "set_disk_state",
    "solve_phase_omega",
    "sweep",
    "synth_driver",
]
