"""Deterministic paddle-and-boat dynamics.

Two counter-mounted paddles drive a planar boat: each paddle produces
forward thrust while its blade sweeps through the in-water arc, and the
left/right thrust difference yaws the hull. Integration is semi-implicit
Euler at a fixed timestep, so identical input sequences always reproduce
bitwise-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

LEFT = "left"
RIGHT = "right"


def wrap_degrees(angle: float) -> float:
    """Wrap an angle into [0, 360)."""
    a = angle % 360.0
    if a >= 360.0 or a < 0.0:  # float mod can land exactly on the divisor
        a = 0.0
    return a


def wrap_pi(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.remainder(angle, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class WaterZone:
    """Paddle-angle arcs where the blade is submerged.

    Arcs are half-open [lo, hi) degree intervals so every angle has exactly
    one membership answer. The default matches the resistance areas of the
    exertion hardware: 290-360 and 0-70 in water, 70-290 airborne.
    """

    in_water_arcs: tuple[tuple[float, float], ...] = ((290.0, 360.0), (0.0, 70.0))

    def __post_init__(self):
        spans = sorted(self.in_water_arcs)
        for lo, hi in spans:
            if not (0.0 <= lo < hi <= 360.0):
                raise ValueError(f"arc [{lo}, {hi}) outside [0, 360)")
        for (_, hi_a), (lo_b, _) in zip(spans, spans[1:]):
            if hi_a > lo_b:
                raise ValueError("water arcs must be disjoint")

    def out_of_water_arcs(self) -> tuple[tuple[float, float], ...]:
        """Complement of the in-water arcs within [0, 360)."""
        spans = sorted(self.in_water_arcs)
        out = []
        cursor = 0.0
        for lo, hi in spans:
            if lo > cursor:
                out.append((cursor, lo))
            cursor = hi
        if cursor < 360.0:
            out.append((cursor, 360.0))
        return tuple(out)


DEFAULT_WATER_ZONE = WaterZone()


@dataclass
class PaddleState:
    """One paddle: absolute blade angle, rotation rate, and water contact.

    Angles are degrees in [0, 360); positive angular velocity is
    anticlockwise, the direction that drives the boat forward.
    ``in_water`` is a cached flag; refresh it after changing the angle.
    """

    side: str
    angle: float = 0.0
    angular_velocity: float = 0.0
    in_water: bool = False

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        self.angle = wrap_degrees(self.angle)

    def advance(self, dt: float, zone: WaterZone = DEFAULT_WATER_ZONE) -> None:
        """Integrate the blade angle by one timestep and refresh water contact."""
        self.angle = wrap_degrees(self.angle + self.angular_velocity * dt)
        self.in_water = in_water(self.angle, zone)

    def refresh_water_flag(self, zone: WaterZone = DEFAULT_WATER_ZONE) -> None:
        self.in_water = in_water(self.angle, zone)


@dataclass(frozen=True)
class HydroParams:
    """Boat constants for the differential-thrust model.

    thrust_coeff converts paddle angular velocity (deg/s) to thrust (N)
    while the blade is in the water; surge drag is quadratic in speed and
    yaw drag linear in yaw rate. Defaults are calibrated so the bundled
    full-effort scripts finish the barrier course near the reference
    completion times (see tools/gen_scripts.py).
    """

    mass: float = 250.0
    yaw_inertia: float = 1200.0
    thrust_coeff: float = 2.55
    surge_drag_coeff: float = 26.0
    yaw_drag_coeff: float = 900.0
    half_beam: float = 0.6
    boat_length: float = 12.5
    dt: float = 1.0 / 60.0

    def __post_init__(self):
        for name in (
            "mass",
            "yaw_inertia",
            "thrust_coeff",
            "surge_drag_coeff",
            "yaw_drag_coeff",
            "half_beam",
            "boat_length",
            "dt",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def beam(self) -> float:
        """Hull beam; the paddles are mounted at the gunwales."""
        return 2.0 * self.half_beam


@dataclass
class BoatState:
    """Planar boat pose and rates.

    heading is radians with 0 along +x and positive anticlockwise;
    surge_velocity is signed speed along the heading. distance_travelled
    accumulates absolute surge displacement and never decreases.
    """

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0
    surge_velocity: float = 0.0
    yaw_rate: float = 0.0
    distance_travelled: float = 0.0


def in_water(angle: float, zone: WaterZone = DEFAULT_WATER_ZONE) -> bool:
    """True iff the blade angle lies in an in-water arc.

    Arcs are half-open: the lower edge is submerged, the upper edge is not,
    so 290 is in the water and 70 is out. ``angle`` must already be wrapped
    to [0, 360).
    """
    if not (0.0 <= angle < 360.0):
        raise ValueError(f"angle {angle} outside [0, 360); wrap before calling")
    for lo, hi in zone.in_water_arcs:
        if lo <= angle < hi:
            return True
    return False


def paddle_thrust(
    p: PaddleState,
    h: HydroParams,
    zone: WaterZone = DEFAULT_WATER_ZONE,
) -> float:
    """Signed thrust of one paddle in newtons, positive forward.

    Zero when the blade is airborne; otherwise proportional to the rotation
    rate, with anticlockwise rotation pulling the boat forward.
    """
    if not in_water(p.angle, zone):
        return 0.0
    return h.thrust_coeff * p.angular_velocity


def step_values(
    x: float,
    y: float,
    heading: float,
    surge_velocity: float,
    yaw_rate: float,
    distance_travelled: float,
    force_left: float,
    force_right: float,
    h: HydroParams,
) -> tuple[float, float, float, float, float, float]:
    """One semi-implicit Euler step on raw floats (hot-loop form of step())."""
    dt = h.dt
    surge_accel = (force_left + force_right) / h.mass - (
        h.surge_drag_coeff / h.mass
    ) * surge_velocity * abs(surge_velocity)
    yaw_accel = (
        (force_right - force_left) * h.half_beam - h.yaw_drag_coeff * yaw_rate
    ) / h.yaw_inertia

    v = surge_velocity + surge_accel * dt
    r = yaw_rate + yaw_accel * dt

    x = x + v * math.cos(heading) * dt
    y = y + v * math.sin(heading) * dt
    heading = wrap_pi(heading + r * dt)
    distance_travelled = distance_travelled + abs(v * dt)
    return x, y, heading, v, r, distance_travelled


def step(
    b: BoatState,
    left: PaddleState,
    right: PaddleState,
    h: HydroParams,
    zone: WaterZone = DEFAULT_WATER_ZONE,
) -> BoatState:
    """Advance the boat one fixed timestep under the current paddle forces.

    Velocities are updated before the pose (semi-implicit Euler). Equal
    paddle forces keep the yaw rate untouched bit-for-bit; a dominant left
    paddle yaws the boat clockwise, toward its weaker right side.
    """
    f_l = paddle_thrust(left, h, zone)
    f_r = paddle_thrust(right, h, zone)
    x, y, heading, v, r, dist = step_values(
        b.x, b.y, b.heading, b.surge_velocity, b.yaw_rate, b.distance_travelled,
        f_l, f_r, h,
    )
    return BoatState(
        x=x, y=y, heading=heading,
        surge_velocity=v, yaw_rate=r, distance_travelled=dist,
    )


def mirror(b: BoatState) -> BoatState:
    """Reflect a boat state across the course axis (negate y, heading, yaw)."""
    return BoatState(
        x=b.x,
        y=-b.y,
        heading=wrap_pi(-b.heading),
        surge_velocity=b.surge_velocity,
        yaw_rate=-b.yaw_rate,
        distance_travelled=b.distance_travelled,
    )


def terminal_speed(omega_max: float, h: HydroParams) -> float:
    """Upper bound on surge speed when both paddles rotate at most omega_max.

    With thrust capped at 2 * thrust_coeff * omega_max, drag balances thrust
    at sqrt(2 c w / d); the bound ignores the airborne part of the stroke,
    so real trajectories converge strictly below it.
    """
    return math.sqrt(2.0 * h.thrust_coeff * omega_max / h.surge_drag_coeff)
