"""Drivers: fast particles that hit a bath-side disk once to set its spin.

A driver injected at ``(0, -ε)`` with velocity ``(v_x, ω)`` meets the
leftmost disk point after ``δ̂/2`` with tangential component ``ω``; the
disk takes ``ω`` and the driver leaves with the disk's previous spin as
its vertical velocity, exiting after ``δ̂``. The right bath mirrors this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..config import Tolerances
from ..dynamics import DiskState, Injection, Role, Side, split_velocity
from ..geometry import LEFT, RIGHT, Chain, HitKind, Point, cast_ray, signed_angle
from ._errors import DegenerateWindow, InfeasibleDelta, NearTangent, NoLineOfSight
from .schedule import DriverWindow, InjectionSchedule

_SAFETY = 0.5


@dataclass(frozen=True)
class DriverPlan:
    injection: Injection
    disk: int
    contact_time: float
    contact_point: Point
    exit_time: float
    omega_target: float
    delta_hat: float
    v_x: float
    epsilon: float


def driver_delta_bound(a: float, omega: float, omega_hat: float) -> float:
    """Largest admissible ``δ̂``: both ``ω·δ̂/2`` and ``ω̂·δ̂/2`` must stay inside the opening."""
    top = max(abs(omega), abs(omega_hat))
    return math.inf if top == 0.0 else 2.0 * a / top


def required_disk_omega(
    v_n: float, alpha_out: float, *, tolerances: Tolerances | None = None
) -> float:
    """Disk spin that sends a particle with normal speed ``v_n`` off at ``alpha_out``."""
    tol = tolerances or Tolerances.load()
    if v_n <= 0.0:
        raise ValueError(f"Normal speed must be positive, got {v_n!r}")
    if not abs(alpha_out) < 0.5 * math.pi - tol.angle:
        raise NearTangent(alpha_out)
    return v_n * math.tan(alpha_out)


def omega_for_direction(
    v: Point, normal: Point, u: Point, *, tolerances: Tolerances | None = None
) -> float:
    """Spin making the collision at a contact with outward ``normal`` send ``v`` along ``u``."""
    vn, _ = split_velocity(v, normal)
    un, ut = split_velocity(u, normal)
    return required_disk_omega(-vn, math.atan2(ut, un), tolerances=tolerances)


def solve_phase_omega(
    phi_hat: float,
    omega_hat: float,
    phi: float,
    omega: float,
    first_contact: float,
    second_contact: float,
    end: float,
    *,
    tolerances: Tolerances | None = None,
) -> float:
    """Intermediate spin ``ω₁`` for a two-contact phase setting.

    Times are relative to the start of the window: the disk drifts at
    ``omega_hat`` until ``first_contact``, at ``ω₁`` until
    ``second_contact`` and at ``omega`` until ``end``, arriving at ``phi``.
    The branch with the smallest ``|ω₁|`` is returned.
    """
    tol = tolerances or Tolerances.load()
    span = second_contact - first_contact
    if span <= tol.time * max(1.0, abs(end)):
        raise DegenerateWindow(span)
    remainder = phi - phi_hat - omega_hat * first_contact - omega * (end - second_contact)
    return signed_angle(remainder) / span


def _check_sight(chain: Chain, side: Side, y: float, v: Point, contact: Point) -> None:
    spec = chain.cell.spec
    ox = 0.0 if side is Side.LEFT else spec.width
    speed = math.hypot(*v)
    hit = cast_ray(chain.cell, ox, y, v[0] / speed, v[1] / speed)
    local = (contact[0] - chain.offset(1 if side is Side.LEFT else chain.n_cells), contact[1])
    if hit is None or hit.kind is not HitKind.DISK or hit.corner:
        blocker = "nothing" if hit is None else hit.kind.name.lower()
        raise NoLineOfSight((ox, y), local, blocker)
    if math.dist((hit.x, hit.y), local) > 1e-9 * spec.width:
        raise NoLineOfSight((ox, y), local, f"disk point {(hit.x, hit.y)}")


def _check_return(chain: Chain, side: Side, contact: Point, v_out: Point) -> None:
    spec = chain.cell.spec
    j = 1 if side is Side.LEFT else chain.n_cells
    local = (contact[0] - chain.offset(j), contact[1])
    speed = math.hypot(*v_out)
    hit = cast_ray(chain.cell, local[0], local[1], v_out[0] / speed, v_out[1] / speed)
    expected = LEFT if side is Side.LEFT else RIGHT
    if hit is None or hit.kind is not HitKind.OPENING or hit.index != expected or hit.corner:
        blocker = "nothing" if hit is None else hit.kind.name.lower()
        raise NoLineOfSight(local, (0.0 if expected == LEFT else spec.width, 0.0), blocker)


def synth_driver(
    chain: Chain,
    omega_hat: float,
    omega_target: float,
    delta: float,
    *,
    side: Side = Side.LEFT,
    delta_hat: float | None = None,
    t0: float = 0.0,
    label: str = "",
) -> DriverPlan:
    """Plan one driver setting the bath-side disk from ``omega_hat`` to ``omega_target``.

    The driver is injected at ``t0`` and leaves through the same opening by
    ``t0 + δ̂`` with ``δ̂ < δ``.
    """
    spec = chain.cell.spec
    if not delta > 0.0:
        raise InfeasibleDelta(delta, 0.0, "the window must be positive")
    bound = driver_delta_bound(spec.opening_half_height, omega_target, omega_hat)
    if delta_hat is None:
        delta_hat = min(_SAFETY * delta, _SAFETY * bound)
    elif not 0.0 < delta_hat < delta:
        raise InfeasibleDelta(delta_hat, delta, "δ̂ must lie in (0, δ)")
    elif not delta_hat < bound:
        raise InfeasibleDelta(delta_hat, bound, "the exit ordinate would leave the opening")

    d = spec.d
    v_x = 2.0 * d / delta_hat
    epsilon = omega_target * delta_hat / 2.0
    if side is Side.LEFT:
        disk = 1
        y, v = -epsilon, (v_x, omega_target)
        contact = chain.leftmost(1)
        v_out = (-v_x, omega_hat)
    else:
        disk = chain.n_cells
        y, v = epsilon, (-v_x, -omega_target)
        contact = chain.rightmost(disk)
        v_out = (v_x, -omega_hat)
    _check_sight(chain, side, y, v, contact)
    _check_return(chain, side, contact, v_out)
    injection = Injection(time=t0, side=side, y=y, v=v, role=Role.DRIVER, label=label)
    return DriverPlan(
        injection=injection,
        disk=disk,
        contact_time=t0 + 0.5 * delta_hat,
        contact_point=contact,
        exit_time=t0 + delta_hat,
        omega_target=omega_target,
        delta_hat=delta_hat,
        v_x=v_x,
        epsilon=epsilon,
    )


def set_disk_state(
    chain: Chain,
    current: DiskState,
    target: DiskState,
    delta: float,
    *,
    t0: float = 0.0,
    side: Side = Side.LEFT,
    delta_hats: tuple[float, float] | None = None,
    label: str = "set",
    tolerances: Tolerances | None = None,
) -> InjectionSchedule:
    """Two drivers leaving the bath-side disk at ``target`` at time ``t0 + delta``.

    Without ``delta_hats`` the contacts fall at ``δ/4`` and ``3δ/4`` and each
    driver uses the largest comfortable ``δ̂``. With ``delta_hats = (δ̂₁, δ̂)``
    both drivers enter at ``t0`` and touch the disk at ``δ̂₁/2`` and ``δ̂/2``.
    """
    tol = tolerances or Tolerances.load()
    if not delta > 0.0:
        raise InfeasibleDelta(delta, 0.0, "the window must be positive")
    drift = signed_angle(current.phi + current.omega * delta - target.phi)
    if current.omega == target.omega and abs(drift) < tol.angle:
        return InjectionSchedule(horizon=t0 + delta)

    a = chain.cell.spec.opening_half_height
    if delta_hats is None:
        c1, c2 = 0.25 * delta, 0.75 * delta
        omega_1 = solve_phase_omega(
            current.phi, current.omega, target.phi, target.omega, c1, c2, delta, tolerances=tol
        )
        hat_1 = min(0.5 * delta, _SAFETY * driver_delta_bound(a, omega_1, current.omega))
        hat_2 = min(0.5 * delta, _SAFETY * driver_delta_bound(a, target.omega, omega_1))
        first = synth_driver(
            chain, current.omega, omega_1, delta, side=side, delta_hat=hat_1,
            t0=t0 + c1 - 0.5 * hat_1, label=f"{label}-1",
        )
        second = synth_driver(
            chain, omega_1, target.omega, delta, side=side, delta_hat=hat_2,
            t0=t0 + c2 - 0.5 * hat_2, label=f"{label}-2",
        )
    else:
        hat_1, hat_2 = delta_hats
        if not 0.0 < hat_1 < hat_2 < delta:
            raise InfeasibleDelta(hat_2, delta, "need 0 < δ̂₁ < δ̂ < δ")
        omega_1 = solve_phase_omega(
            current.phi, current.omega, target.phi, target.omega,
            0.5 * hat_1, 0.5 * hat_2, delta, tolerances=tol,
        )
        first = synth_driver(
            chain, current.omega, omega_1, delta, side=side, delta_hat=hat_1, t0=t0,
            label=f"{label}-1",
        )
        second = synth_driver(
            chain, omega_1, target.omega, delta, side=side, delta_hat=hat_2, t0=t0,
            label=f"{label}-2",
        )

    windows = tuple(
        DriverWindow(start=p.injection.time, end=p.exit_time, disk=p.disk, contact=p.contact_time)
        for p in (first, second)
    )
    return InjectionSchedule(
        injections=tuple(sorted((first.injection, second.injection), key=lambda i: i.time)),
        windows=windows,
        horizon=t0 + delta,
    )
