"""``scatterchain`` command line.

Each goal subcommand runs over one or more ``--scenario`` files, writes
trace and report files to ``--out`` and exits with 0 when every report
passes, 1 on a failed verification, 2 on bad input and 3 when the flow
hits an undefined event.
"""

from __future__ import annotations

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import click

from ..config import (
    ConfigError,
    EnvironRepository,
    PlannerSettings,
    Tolerances,
    log_level,
    set_repository,
    split_assignment,
)
from .._errors import ScatterChainError
from ..dynamics import UndefinedEvent
from ..geometry import GeometryError
from ..harness import (
    CheckGeometryGoal,
    ControlDiskGoal,
    HarnessError,
    IlluminateGoal,
    ReverseCheckGoal,
    SimulateGoal,
    SynthesizeEmptyGoal,
    load_scenario,
    read_trace,
    run_scenario,
    verify_trace,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNDEFINED = 3

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Job:
    """One scenario run; plain data so it can cross a process boundary."""

    scenario: str
    goal: dict[str, Any] | None
    overrides: dict[str, Any] = field(default_factory=dict)
    out: str | None = None
    xlsx: bool = False


def _goal_for(kind: str, params: dict[str, Any]):
    model = {
        "check-geometry": CheckGeometryGoal,
        "illuminate": IlluminateGoal,
        "simulate": SimulateGoal,
        "synthesize-empty": SynthesizeEmptyGoal,
        "control-disk": ControlDiskGoal,
        "reverse-check": ReverseCheckGoal,
    }[kind]
    return model.model_validate({"kind": kind, **params})


def execute(job: Job) -> tuple[int, str]:
    """Run one job and return its exit code and a one-line summary."""
    try:
        scenario = load_scenario(job.scenario)
        set_repository(EnvironRepository(overrides=job.overrides, scenario=scenario.tolerances))
        if job.goal is not None:
            kind = job.goal["kind"]
            if scenario.goal.kind == kind:
                params = {**scenario.goal.model_dump(), **job.goal["params"]}
            else:
                params = job.goal["params"]
            params.pop("kind", None)
            scenario = scenario.with_goal(_goal_for(kind, params))
        if not scenario.name:
            scenario = scenario.model_copy(update={"name": Path(job.scenario).stem})
        out = None
        if job.out is not None:
            out = Path(job.out)
            out.mkdir(parents=True, exist_ok=True)
        report = run_scenario(scenario, out=out, xlsx=job.xlsx)
    except UndefinedEvent as exc:
        return EXIT_UNDEFINED, f"UNDEFINED {job.scenario}: {exc}"
    except (HarnessError, ConfigError, GeometryError, ValueError) as exc:
        return EXIT_INPUT, f"ERROR {job.scenario}: {exc}"
    except ScatterChainError as exc:
        return EXIT_FAIL, f"FAIL {job.scenario}: {exc}"
    finally:
        set_repository(None)
    return (EXIT_PASS if report.passed else EXIT_FAIL), report.summary()


def _parse_overrides(pairs: Sequence[str], seed: int | None) -> dict[str, Any]:
    known = set(Tolerances.model_fields) | set(PlannerSettings.model_fields)
    overrides: dict[str, Any] = {}
    for pair in pairs:
        try:
            name, value = split_assignment(pair)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--tolerance") from exc
        if name not in known:
            raise click.BadParameter(f"unknown tolerance {name!r}", param_hint="--tolerance")
        overrides[name] = value
    if seed is not None:
        overrides["seed"] = seed
    return overrides


def _run_jobs(jobs: list[Job], workers: int) -> int:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(execute, jobs))
    else:
        results = [execute(job) for job in jobs]
    for code, line in results:
        click.echo(line, err=code != EXIT_PASS)
    return max(code for code, _ in results)


def run_options(func):
    """Options shared by every scenario command."""
    options = [
        click.option(
            "--scenario", "scenarios", multiple=True, required=True,
            type=click.Path(exists=False, dir_okay=False), help="Scenario file (repeatable).",
        ),
        click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory."),
        click.option(
            "--tolerance", "tolerances", multiple=True, metavar="NAME=VALUE",
            help="Override a tolerance or planner setting (repeatable).",
        ),
        click.option("--jobs", type=click.IntRange(min=1), default=1, help="Scenarios run in parallel."),
        click.option("--seed", type=int, default=None, help="Seed for perturbed path retries."),
        click.option("--xlsx/--no-xlsx", default=False, help="Also export traces as XLSX."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _dispatch(ctx: click.Context, kind: str | None, params: dict[str, Any], **opts: Any) -> None:
    overrides = _parse_overrides(opts["tolerances"], opts["seed"])
    goal = None if kind is None else {"kind": kind, "params": params}
    jobs = [
        Job(scenario=s, goal=goal, overrides=overrides, out=opts["out"], xlsx=opts["xlsx"])
        for s in opts["scenarios"]
    ]
    ctx.exit(_run_jobs(jobs, opts["jobs"]))


def _configure_logging() -> None:
    try:
        level = log_level()
    except ConfigError as exc:
        click.echo(f"Warning: {exc}; logging at warning level", err=True)
        level = "warning"
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@click.group("scatterchain")
@click.version_option(package_name="scatterchain")
def cli() -> None:
    """Simulate, control and verify chains of billiard cells with rotating disks."""
    _configure_logging()


@cli.command("run")
@run_options
@click.pass_context
def run_command(ctx: click.Context, **opts: Any) -> None:
    """Run each scenario's own goal."""
    _dispatch(ctx, None, {}, **opts)


@cli.command("check-geometry")
@run_options
@click.pass_context
def check_geometry_command(ctx: click.Context, **opts: Any) -> None:
    """Validate the cell of each scenario and report 1-controllability."""
    _dispatch(ctx, "check-geometry", {}, **opts)


@cli.command("illuminate")
@click.option("--arc", type=click.IntRange(min=1), default=None, help="Arc index (default: all).")
@run_options
@click.pass_context
def illuminate_command(ctx: click.Context, arc: int | None, **opts: Any) -> None:
    """Illuminated disk segments, cross-checked against the sampling oracle."""
    _dispatch(ctx, "illuminate", {} if arc is None else {"arc": arc}, **opts)


@cli.command("simulate")
@click.option("--until", "T", type=float, default=None, help="Duration to simulate.")
@run_options
@click.pass_context
def simulate_command(ctx: click.Context, T: float | None, **opts: Any) -> None:
    """Simulate the initial state with the scenario's injection schedule."""
    _dispatch(ctx, "simulate", {} if T is None else {"T": T}, **opts)


@cli.command("synthesize-empty")
@run_options
@click.pass_context
def synthesize_empty_command(ctx: click.Context, **opts: Any) -> None:
    """Plan and replay a schedule emptying the chain to the ground state."""
    _dispatch(ctx, "synthesize-empty", {}, **opts)


@cli.command("control-disk")
@click.option("--disk", type=click.IntRange(min=1), default=None)
@click.option("--phi", type=float, default=None)
@click.option("--omega", type=float, default=None)
@click.option("--delta", type=float, default=None)
@click.option("--side", type=click.Choice(["left", "right"]), default=None)
@run_options
@click.pass_context
def control_disk_command(ctx: click.Context, disk, phi, omega, delta, side, **opts: Any) -> None:
    """Plan and replay a schedule setting one disk's angle and spin."""
    given = {"disk": disk, "phi": phi, "omega": omega, "delta": delta, "side": side}
    _dispatch(ctx, "control-disk", {k: v for k, v in given.items() if v is not None}, **opts)


@cli.command("reverse-check")
@click.option("--until", "T", type=float, default=None, help="Duration of each leg.")
@run_options
@click.pass_context
def reverse_check_command(ctx: click.Context, T: float | None, **opts: Any) -> None:
    """Run forward, reverse all velocities, run back and compare with the start."""
    _dispatch(ctx, "reverse-check", {} if T is None else {"T": T}, **opts)


@cli.command("verify")
@click.argument("trace", type=click.Path(dir_okay=False))
@click.option("--scenario", default=None, type=click.Path(dir_okay=False), help="Initial state for disk checks.")
@click.option("--tolerance", "tolerance", type=float, default=1e-9, help="Relative residual bound.")
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.pass_context
def verify_command(ctx: click.Context, trace: str, scenario: str | None, tolerance: float, out: str | None) -> None:
    """Recheck energy balance and continuity along a trace file."""
    try:
        events = read_trace(trace)
        initial = None
        if scenario is not None:
            loaded = load_scenario(scenario)
            initial = loaded.initial_state(loaded.geometry.build())
    except (HarnessError, OSError) as exc:
        click.echo(f"ERROR {trace}: {exc}", err=True)
        ctx.exit(EXIT_INPUT)
    report = verify_trace(events, initial=initial, tolerance=tolerance)
    report.scenario = Path(trace).stem
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        report.save(Path(out) / f"{report.scenario}.verify.json")
    click.echo(report.summary(), err=not report.passed)
    ctx.exit(EXIT_PASS if report.passed else EXIT_FAIL)


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Entry point returning the exit code instead of exiting."""
    try:
        code = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="scatterchain",
            standalone_mode=False,
        )
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except click.exceptions.Abort:
        return EXIT_INPUT
    return code if isinstance(code, int) else EXIT_PASS


def main() -> None:
    sys.exit(run_cli())
