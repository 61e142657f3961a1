"""Closed-loop trace generation: a waypoint-steering pilot that paddles a
session and emits the input rows it used.

Because the simulation is deterministic, replaying an emitted trace through
run_headless reproduces the pilot's run exactly; the bundled full-effort
scripts are frozen pilot output. Steering follows a lateral reference that
is the lane center on open water and the widest free gap while a barrier is
near, with a PD law on heading error trading effort between the two sides.

The per-technique full-effort magnitudes are calibration constants: they
put the bundled barrier-course runs near the reference completion times
(joystick fastest, then the resisted handles, then mid-air rotation).
"""

from __future__ import annotations

from dataclasses import dataclass

import math

from .race import Barrier, Track
from .session import SessionConfig, SessionEngine, TraceRow, parse_trace_lines
from .sim import HydroParams, wrap_pi

JC_FULL_DEFLECTION = 1.0
IC_FULL_PITCH_RATE = 125.5  # deg/s of forearm pitch at full effort
EC_FULL_CRANK_RATE = 197.0  # deg/s commanded at the handles at full effort

COMMAND_QUANTUM = 1e-4  # commands are quantized so trace files replay exactly


@dataclass(frozen=True)
class PilotGains:
    lookahead: float = 30.0  # m ahead of the hull center
    k_heading: float = 3.0
    k_yaw_damping: float = 2.0
    steer_limit: float = 0.85  # max fraction of one side's effort traded away
    approach: float = 80.0  # start lining up this far before a barrier
    clear: float = 30.0  # keep aiming at the gap until this far past it


def gap_center(track: Track, barrier: Barrier) -> float:
    """Midpoint of the widest free lateral interval beside a barrier."""
    llo, lhi = track.lane_bounds(track.barrier_lane(barrier))
    lo, hi = barrier.blocked_span
    low_gap = lo - llo
    high_gap = lhi - hi
    if low_gap >= high_gap:
        return (llo + lo) / 2.0
    return (hi + lhi) / 2.0


def lateral_reference(track: Track, x: float, gains: PilotGains) -> float:
    """Target y at course position x: gap center near a barrier, else 0."""
    for b in sorted(track.barriers, key=lambda b: b.x):
        if b.x - gains.approach <= x <= b.x + gains.clear:
            return gap_center(track, b)
    return 0.0


def steering_efforts(
    engine: SessionEngine, gains: PilotGains
) -> tuple[float, float]:
    """Left/right effort in [0, 1] steering toward the lateral reference."""
    boat = engine.boat
    y_ref = lateral_reference(engine.track, boat.x + gains.lookahead, gains)
    desired = math.atan2(y_ref - boat.y, gains.lookahead)
    err = wrap_pi(desired - boat.heading)
    s = gains.k_heading * err - gains.k_yaw_damping * boat.yaw_rate
    if s > gains.steer_limit:
        s = gains.steer_limit
    elif s < -gains.steer_limit:
        s = -gains.steer_limit
    if s >= 0.0:  # turn left: starve the left paddle
        return 1.0 - s, 1.0
    return 1.0, 1.0 + s


def effort_to_command(technique: str, effort: float, full_rate: float) -> float:
    if technique == "jc":
        return effort * full_rate  # full_rate is the deflection, <= 1
    return effort * full_rate


def full_rate_for(technique: str) -> float:
    return {
        "jc": JC_FULL_DEFLECTION,
        "ic": IC_FULL_PITCH_RATE,
        "ec": EC_FULL_CRANK_RATE,
    }[technique]


def generate_trace(
    technique: str,
    track_name: str = "barrier",
    params: HydroParams | None = None,
    full_rate: float | None = None,
    gains: PilotGains | None = None,
    time_limit: float = 600.0,
) -> tuple[list[dict], SessionEngine]:
    """Pilot one session and return (trace rows, finished engine).

    Rows are JSON-ready dicts; commands are quantized and only emitted when
    they change, relying on the engine's sticky-input semantics.
    """
    params = params or HydroParams()
    gains = gains or PilotGains()
    rate = full_rate if full_rate is not None else full_rate_for(technique)
    config = SessionConfig(
        technique=technique,
        track_name=track_name,
        params=params,
        time_limit=time_limit,
    )
    engine = SessionEngine(config)
    rows: list[dict] = [
        {"t": 0.0, "event": "calibrate_done"},
        {"t": 0.0, "event": "race_requested"},
    ]
    engine.apply_event("calibrate_done")
    engine.apply_event("race_requested")
    dt = engine.dt
    limit_ticks = int(round(time_limit / dt))
    last_cmd: tuple[float, float] | None = None
    while not engine.finished and engine.tick_count < limit_ticks:
        left_e, right_e = steering_efforts(engine, gains)
        cmd = (
            _quantize(effort_to_command(technique, left_e, rate)),
            _quantize(effort_to_command(technique, right_e, rate)),
        )
        if cmd != last_cmd:
            rows.append({"t": engine.tick_count * dt, "left": cmd[0], "right": cmd[1]})
            engine.apply_command(cmd[0], cmd[1])
            last_cmd = cmd
        engine.tick()
    return rows, engine


def _quantize(v: float) -> float:
    return round(v / COMMAND_QUANTUM) * COMMAND_QUANTUM


def rows_to_trace(rows: list[dict], dt: float) -> list[TraceRow]:
    """Parse generated rows exactly as the trace loader would."""
    import json

    return parse_trace_lines((json.dumps(r) for r in rows), dt)
