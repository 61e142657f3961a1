"""Input-to-paddle transfer functions for the three paddling techniques.

Each technique reduces a raw input sample to the same thing: a paddle
angular velocity (and, for the encoder, an absolute angle). Downstream
dynamics never know which technique produced the stream.

* joystick (JC): stick deflection maps to rotation rate, up = forward.
* rotation (IC): handheld pitch rate, scaled and capped; the session loop
  integrates the resulting rate into a blade angle.
* encoder (EC): the exertion hardware reports absolute blade angles 1:1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sim import DEFAULT_WATER_ZONE, PaddleState, WaterZone, in_water

JOYSTICK_OMEGA_MAX = 360.0  # deg/s at full deflection
JOYSTICK_DEADZONE = 0.1
ROTATION_GAIN = 1.0
ROTATION_OMEGA_CAP = 540.0  # deg/s

RESISTANCE_ON = 255
RESISTANCE_OFF = 0


@dataclass(frozen=True)
class JoystickSample:
    """One hand's stick deflection, up positive; clamped to [-1, 1]."""

    y: float

    def __post_init__(self):
        object.__setattr__(self, "y", min(1.0, max(-1.0, self.y)))


@dataclass(frozen=True)
class RotationSample:
    """One hand's controller pitch rate in deg/s, anticlockwise positive."""

    pitch_rate: float
    timestamp: float = 0.0


@dataclass(frozen=True)
class EncoderSample:
    """Raw encoder report: centi-degree angle, deci-degree/s rate."""

    side: str
    angle: int
    angular_velocity: int


@dataclass(frozen=True)
class ResistanceCommand:
    """Binary relay actuation: 255 while the blade is in the water, else 0."""

    side: str
    level: int

    def __post_init__(self):
        if self.level not in (RESISTANCE_OFF, RESISTANCE_ON):
            raise ValueError(f"level must be 0 or 255, got {self.level}")


def joystick_to_omega(
    s: JoystickSample,
    omega_max: float = JOYSTICK_OMEGA_MAX,
    deadzone: float = JOYSTICK_DEADZONE,
) -> float:
    """Map stick deflection to paddle angular velocity in deg/s.

    Deflections inside the deadzone give zero; beyond it the remaining range
    is rescaled so full deflection reaches exactly omega_max. Pushing up
    (positive y) rotates the paddle anticlockwise, driving the boat forward.
    """
    if not (0.0 <= deadzone < 1.0):
        raise ValueError(f"deadzone must be in [0, 1), got {deadzone}")
    mag = abs(s.y)
    if mag <= deadzone:
        return 0.0
    scaled = omega_max * (mag - deadzone) / (1.0 - deadzone)
    return scaled if s.y > 0.0 else -scaled


def rotation_to_omega(
    s: RotationSample,
    gain: float = ROTATION_GAIN,
    omega_cap: float = ROTATION_OMEGA_CAP,
) -> float:
    """Scale controller pitch rate into a capped paddle angular velocity.

    Controller and paddle share the rotation sense: anticlockwise controller
    motion spins the paddle anticlockwise (forward). The caller integrates
    the returned rate into the blade angle.
    """
    if gain <= 0.0:
        raise ValueError(f"gain must be positive, got {gain}")
    omega = gain * s.pitch_rate
    if omega > omega_cap:
        return omega_cap
    if omega < -omega_cap:
        return -omega_cap
    return omega


def encoder_to_paddle(s: EncoderSample) -> PaddleState:
    """Convert a raw encoder report to paddle angle/rate, identity 1:1.

    Raises ValueError for out-of-range angles so the caller can flag the
    frame as corrupt; the water-contact flag is left unset for the session
    loop to refresh against its zone.
    """
    if not (0 <= s.angle <= 35999):
        raise ValueError(f"encoder angle {s.angle} outside [0, 35999]")
    return PaddleState(
        side=s.side,
        angle=s.angle / 100.0,
        angular_velocity=s.angular_velocity / 10.0,
    )


def resistance_for(
    p: PaddleState,
    zone: WaterZone = DEFAULT_WATER_ZONE,
) -> ResistanceCommand:
    """Relay command mimicking water contact for the paddle's current angle."""
    level = RESISTANCE_ON if in_water(p.angle, zone) else RESISTANCE_OFF
    return ResistanceCommand(side=p.side, level=level)
