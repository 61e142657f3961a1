"""Session orchestration: fixed-rate simulation, input routing, recording.

A session advances on a fixed 60 Hz grid; every input row is bound to a
tick, so a session is a pure function of (config, input trace) and replays
bit-for-bit. Records are line-delimited JSON: a config echo, then input /
event / state rows in tick order, then a result row carrying a digest of
the snapshot trace.

Input rows are technique-native: stick deflection for jc, controller pitch
rate for ic, commanded handle rate for ec (which drives the simulated
exertion device, resistance feedback included). Live device hardware
instead produces encoder rows that set the paddles directly.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .physiology import HeartSample, ParticipantProfile, load_hr_csv, summarize
from .protocol import SimulatedDevice
from .race import (
    EVENT_CALIBRATE_DONE,
    EVENT_FINISH_CROSSED,
    EVENT_RACE_REQUESTED,
    EVENT_RESET,
    EVENT_RESET_POSITION,
    EVENT_START_CROSSED,
    BoatFootprint,
    Phase,
    RaceSession,
    Track,
    advance_phase,
    collide,
    detect_finish,
    detect_start,
    footprint_of,
    track_preset,
)
from .sim import (
    DEFAULT_WATER_ZONE,
    LEFT,
    RIGHT,
    BoatState,
    HydroParams,
    PaddleState,
    WaterZone,
    step_values,
    wrap_pi,
)
from .techniques import (
    EncoderSample,
    JoystickSample,
    ResistanceCommand,
    RotationSample,
    encoder_to_paddle,
    joystick_to_omega,
    rotation_to_omega,
)

TECHNIQUES = ("jc", "ic", "ec")

SNAPSHOT_EVERY_TICKS = 3  # 60 Hz sim, 20 Hz snapshot/broadcast
SPAWN_BOW_GAP = 2.0  # bow starts this far behind the start line

USER_EVENTS = (
    EVENT_CALIBRATE_DONE,
    EVENT_RACE_REQUESTED,
    EVENT_RESET,
    EVENT_RESET_POSITION,
)


class TraceError(ValueError):
    """Malformed input trace; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"trace line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class TraceRow:
    tick: int
    left: float | None = None
    right: float | None = None
    event: str | None = None


INPUT_SOURCES = ("script", "socket", "device")


@dataclass(frozen=True)
class SessionConfig:
    technique: str = "jc"
    track_name: str = "barrier"
    track: Track | None = None  # overrides track_name when set
    params: HydroParams = HydroParams()
    zone: WaterZone = DEFAULT_WATER_ZONE
    seed: int = 0
    source: str = "script"
    script: str | None = None  # trace path or bundled name, for source=script
    record_path: str | None = None
    subject: str = "s01"
    hr_csv: str | None = None
    age: float = 25.0
    weight: float | None = None
    sex: str = "unspecified"
    time_limit: float = 900.0
    friction_gain: float = 0.25

    def __post_init__(self):
        if self.technique not in TECHNIQUES:
            raise ValueError(f"technique must be one of {TECHNIQUES}")
        if self.source not in INPUT_SOURCES:
            raise ValueError(f"source must be one of {INPUT_SOURCES}")

    def resolved_track(self) -> Track:
        return self.track if self.track is not None else track_preset(self.track_name)

    def profile(self) -> ParticipantProfile:
        return ParticipantProfile(age=self.age, weight=self.weight, sex=self.sex)

    def to_dict(self) -> dict:
        track = self.resolved_track()
        return {
            "technique": self.technique,
            "track": {
                "name": self.track_name if self.track is None else "custom",
                "length": track.length,
                "lane_count": track.lane_count,
                "lane_width": track.lane_width,
                "buoy_spacing": track.buoy_spacing,
                "start_x": track.start_x,
                "barriers": [
                    {
                        "x": b.x,
                        "blocked_span": list(b.blocked_span),
                        "thickness": b.thickness,
                    }
                    for b in track.barriers
                ],
            },
            "params": {
                "mass": self.params.mass,
                "yaw_inertia": self.params.yaw_inertia,
                "thrust_coeff": self.params.thrust_coeff,
                "surge_drag_coeff": self.params.surge_drag_coeff,
                "yaw_drag_coeff": self.params.yaw_drag_coeff,
                "half_beam": self.params.half_beam,
                "boat_length": self.params.boat_length,
                "dt": self.params.dt,
            },
            "zone": {"in_water_arcs": [list(a) for a in self.zone.in_water_arcs]},
            "seed": self.seed,
            "source": self.source,
            "script": self.script,
            "record_path": self.record_path,
            "subject": self.subject,
            "hr_csv": self.hr_csv,
            "age": self.age,
            "weight": self.weight,
            "sex": self.sex,
            "time_limit": self.time_limit,
            "friction_gain": self.friction_gain,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionConfig":
        track_data = data.get("track", {})
        from .race import Barrier  # local to keep module import light

        barriers = tuple(
            Barrier(
                x=b["x"],
                blocked_span=tuple(b["blocked_span"]),
                thickness=b.get("thickness", 1.0),
            )
            for b in track_data.get("barriers", [])
        )
        name = track_data.get("name", "barrier")
        if name in ("straight", "barrier") and "length" not in track_data:
            track = None
        else:
            track = Track(
                length=track_data.get("length", 1000.0),
                lane_count=track_data.get("lane_count", 6),
                lane_width=track_data.get("lane_width", 13.5),
                buoy_spacing=track_data.get("buoy_spacing", 10.0),
                start_x=track_data.get("start_x", 0.0),
                barriers=barriers,
            )
        params_data = data.get("params", {})
        params = HydroParams(**params_data) if params_data else HydroParams()
        zone_data = data.get("zone")
        zone = (
            WaterZone(tuple(tuple(a) for a in zone_data["in_water_arcs"]))
            if zone_data
            else DEFAULT_WATER_ZONE
        )
        return cls(
            technique=data.get("technique", "jc"),
            track_name=name if name != "custom" else "barrier",
            track=track,
            params=params,
            zone=zone,
            seed=data.get("seed", 0),
            source=data.get("source", "script"),
            script=data.get("script"),
            record_path=data.get("record_path"),
            subject=data.get("subject", "s01"),
            hr_csv=data.get("hr_csv"),
            age=data.get("age", 25.0),
            weight=data.get("weight"),
            sex=data.get("sex", "unspecified"),
            time_limit=data.get("time_limit", 900.0),
            friction_gain=data.get("friction_gain", 0.25),
        )


def canonical_json(row: dict) -> str:
    return json.dumps(row, sort_keys=True, separators=(",", ":"))


class SessionEngine:
    """Single owner of all mutable session state, advanced tick by tick.

    Inputs and events are applied between ticks, in arrival order; the
    engine never looks at wall-clock time, which is what makes replay
    exact. Rows appended to .rows form the session record.
    """

    def __init__(self, config: SessionConfig):
        self.config = config
        self.params = config.params
        self.track = config.resolved_track()
        self.track.validate_navigable(self.params.beam)
        self.zone = config.zone
        self.dt = self.params.dt
        self.tick_count = 0
        self.session = RaceSession(technique=config.technique)
        self.left = PaddleState(side=LEFT)
        self.right = PaddleState(side=RIGHT)
        self.left.refresh_water_flag(self.zone)
        self.right.refresh_water_flag(self.zone)
        self._target_omega = {LEFT: 0.0, RIGHT: 0.0}
        self.device: SimulatedDevice | None = None
        if config.technique == "ec":
            self.device = SimulatedDevice(friction_gain=config.friction_gain)
        self.resistance = {LEFT: False, RIGHT: False}
        self.outgoing_resistance: list[ResistanceCommand] = []
        self._pending_encoder: list[PaddleState] = []
        self._live_encoder = False
        self._final_state_emitted = False
        self.boat = self._spawn_state()
        self._prev_footprint = footprint_of(self.boat, self.params)
        self.collisions = 0
        self.rows: list[dict] = []
        self.input_hold = True  # sticky targets; server clears on disconnect
        self._emit_state()

    # -- input side -------------------------------------------------------

    def apply_command(self, left: float, right: float) -> None:
        """Technique-native command pair for this tick (recorded)."""
        self.rows.append(
            {"type": "input", "tick": self.tick_count, "left": left, "right": right}
        )
        self._route_command(left, right)

    def _route_command(self, left: float, right: float) -> None:
        tech = self.config.technique
        if tech == "jc":
            self._target_omega[LEFT] = joystick_to_omega(JoystickSample(left))
            self._target_omega[RIGHT] = joystick_to_omega(JoystickSample(right))
        elif tech == "ic":
            self._target_omega[LEFT] = rotation_to_omega(RotationSample(left))
            self._target_omega[RIGHT] = rotation_to_omega(RotationSample(right))
        else:
            self.device.command_omega(LEFT, left)
            self.device.command_omega(RIGHT, right)

    def apply_encoder(self, sample: EncoderSample) -> None:
        """Raw report from real handle hardware (recorded, applied this tick).

        Raises ValueError on out-of-range angles; the caller drops the
        corrupt frame and nothing is recorded.
        """
        fragment = encoder_to_paddle(sample)
        self.rows.append(
            {
                "type": "input",
                "tick": self.tick_count,
                "encoder": {
                    "side": sample.side,
                    "angle": sample.angle,
                    "omega": sample.angular_velocity,
                },
            }
        )
        self._pending_encoder.append(fragment)
        self._live_encoder = True

    def apply_event(self, name: str) -> None:
        if name not in USER_EVENTS:
            raise ValueError(f"unknown event {name!r}")
        self.rows.append({"type": "event", "tick": self.tick_count, "name": name})
        before = self.session.phase
        self.session = advance_phase(self.session, name)
        if name == EVENT_RACE_REQUESTED and self.session.phase is Phase.RACING:
            self._reset_for_race()
        if self.session.phase is not before:
            self.rows.append(
                {
                    "type": "phase",
                    "tick": self.tick_count,
                    "value": self.session.phase.value,
                }
            )

    def drop_inputs(self) -> None:
        """Input source went away: let the paddles spin down."""
        self.input_hold = False

    def restore_inputs(self) -> None:
        self.input_hold = True

    # -- internals ---------------------------------------------------------

    def _spawn_state(self) -> BoatState:
        x = self.track.start_x - SPAWN_BOW_GAP - self.params.boat_length / 2.0
        return BoatState(x=x, y=0.0, heading=0.0)

    def _reset_for_race(self) -> None:
        self.boat = self._spawn_state()
        self._prev_footprint = footprint_of(self.boat, self.params)
        self.left = PaddleState(side=LEFT)
        self.right = PaddleState(side=RIGHT)
        self.left.refresh_water_flag(self.zone)
        self.right.refresh_water_flag(self.zone)
        self._target_omega = {LEFT: 0.0, RIGHT: 0.0}
        if self.device is not None:
            self.device.angles[LEFT] = 0.0
            self.device.angles[RIGHT] = 0.0

    @property
    def time(self) -> float:
        return self.tick_count * self.dt

    @property
    def finished(self) -> bool:
        return self.session.phase is Phase.FINISHED

    def tick(self) -> None:
        """Advance one fixed timestep: paddles, physics, lines, snapshot."""
        if not self.input_hold:
            decay = 0.9  # ~0.6 s to near-zero at 60 Hz
            self._target_omega[LEFT] *= decay
            self._target_omega[RIGHT] *= decay
            if self.device is not None:
                self.device.command_omega(
                    LEFT, self.device.target_omega[LEFT] * decay
                )
                self.device.command_omega(
                    RIGHT, self.device.target_omega[RIGHT] * decay
                )

        self._update_paddles()

        if self.session.phase in (Phase.TRAINING, Phase.RACING):
            self._step_boat()

        self.tick_count += 1
        if self.finished and not self._final_state_emitted:
            self._final_state_emitted = True
            self._emit_state()
        elif self.tick_count % SNAPSHOT_EVERY_TICKS == 0:
            self._emit_state()

    def _update_paddles(self) -> None:
        if self.config.technique == "ec":
            if self._pending_encoder:
                fragments = self._pending_encoder
                self._pending_encoder = []
            elif self._live_encoder:
                fragments = []  # hardware connected but quiet: hold the blades
            else:
                fragments = [
                    encoder_to_paddle(s) for s in self.device.tick(self.dt)
                ]
            for f in fragments:
                paddle = self.left if f.side == LEFT else self.right
                paddle.angle = f.angle
                paddle.angular_velocity = f.angular_velocity
                paddle.refresh_water_flag(self.zone)
            self._refresh_resistance()
        else:
            self.left.angular_velocity = self._target_omega[LEFT]
            self.right.angular_velocity = self._target_omega[RIGHT]
            self.left.advance(self.dt, self.zone)
            self.right.advance(self.dt, self.zone)

    def _refresh_resistance(self) -> None:
        for paddle in (self.left, self.right):
            wet = paddle.in_water
            if wet != self.resistance[paddle.side]:
                self.resistance[paddle.side] = wet
                cmd = ResistanceCommand(side=paddle.side, level=255 if wet else 0)
                if self._live_encoder or self.device is None:
                    self.outgoing_resistance.append(cmd)
                else:
                    self.device.apply_resistance(cmd)

    def _step_boat(self) -> None:
        h = self.params
        zone = self.zone
        f_l = (
            h.thrust_coeff * self.left.angular_velocity if self.left.in_water else 0.0
        )
        f_r = (
            h.thrust_coeff * self.right.angular_velocity
            if self.right.in_water
            else 0.0
        )
        b = self.boat
        x, y, heading, v, r, dist = step_values(
            b.x, b.y, b.heading, b.surge_velocity, b.yaw_rate,
            b.distance_travelled, f_l, f_r, h,
        )
        new = BoatState(
            x=x, y=y, heading=heading,
            surge_velocity=v, yaw_rate=r, distance_travelled=dist,
        )
        cur = footprint_of(new, h)
        if self.track.barriers:
            report = collide(cur, self.track.barriers)
            if report.collided:
                new, cur = self._resolve_collision(b, new)
                self.collisions += 1
                self.rows.append(
                    {
                        "type": "collision",
                        "tick": self.tick_count,
                        "barrier": report.barrier_index,
                    }
                )
        t_after = (self.tick_count + 1) * self.dt
        if self.session.armed and detect_start(self._prev_footprint, cur, self.track):
            self.session = advance_phase(
                self.session, EVENT_START_CROSSED, t=t_after
            )
            self.rows.append({"type": "start", "tick": self.tick_count, "t": t_after})
        elif self.session.phase is Phase.RACING and detect_finish(
            self._prev_footprint, cur, self.track
        ):
            self.session = advance_phase(
                self.session, EVENT_FINISH_CROSSED, t=t_after
            )
            if self.session.phase is Phase.FINISHED:
                self.rows.append(
                    {
                        "type": "phase",
                        "tick": self.tick_count,
                        "value": self.session.phase.value,
                    }
                )
        self.boat = new
        self._prev_footprint = cur

    def _resolve_collision(
        self, free: BoatState, hit: BoatState
    ) -> tuple[BoatState, BoatFootprint]:
        """Inelastic stop: bisect back along the step to the contact pose."""
        lo, hi = 0.0, 1.0
        for _ in range(32):
            mid = (lo + hi) / 2.0
            candidate = self._lerp_state(free, hit, mid)
            if collide(footprint_of(candidate, self.params), self.track.barriers).collided:
                hi = mid
            else:
                lo = mid
        stopped = self._lerp_state(free, hit, lo)
        stopped.surge_velocity = 0.0
        stopped.yaw_rate = 0.0
        stopped.distance_travelled = free.distance_travelled
        return stopped, footprint_of(stopped, self.params)

    @staticmethod
    def _lerp_state(a: BoatState, b: BoatState, s: float) -> BoatState:
        # headings interpolate along the short way, not across the +-pi seam
        dh = wrap_pi(b.heading - a.heading)
        return BoatState(
            x=a.x + (b.x - a.x) * s,
            y=a.y + (b.y - a.y) * s,
            heading=wrap_pi(a.heading + dh * s),
            surge_velocity=b.surge_velocity,
            yaw_rate=b.yaw_rate,
            distance_travelled=a.distance_travelled,
        )

    def _emit_state(self) -> None:
        self.rows.append(self.snapshot())

    def snapshot(self) -> dict:
        """Current state row; field order is fixed by canonical serialization."""
        bow = self._prev_footprint.bow
        remaining = self.track.finish_x - bow[0]
        if remaining < 0.0:
            remaining = 0.0
        b = self.boat
        return {
            "type": "state",
            "tick": self.tick_count,
            "t": self.time,
            "x": b.x,
            "y": b.y,
            "heading": b.heading,
            "v": b.surge_velocity,
            "yaw_rate": b.yaw_rate,
            "dist": b.distance_travelled,
            "remaining": remaining,
            "phase": self.session.phase.value,
            "left": {
                "angle": self.left.angle,
                "omega": self.left.angular_velocity,
                "wet": self.left.in_water,
            },
            "right": {
                "angle": self.right.angle,
                "omega": self.right.angular_velocity,
                "wet": self.right.in_water,
            },
            "resist": {
                "left": self.resistance[LEFT],
                "right": self.resistance[RIGHT],
            },
        }


@dataclass
class SessionRecord:
    config: dict
    rows: list[dict] = field(default_factory=list)

    def state_lines(self) -> list[str]:
        return [canonical_json(r) for r in self.rows if r.get("type") == "state"]

    def digest(self) -> str:
        h = hashlib.sha256()
        for line in self.state_lines():
            h.update(line.encode())
            h.update(b"\n")
        return h.hexdigest()

    @property
    def result(self) -> dict | None:
        for row in reversed(self.rows):
            if row.get("type") == "result":
                return row
        return None

    @property
    def completion_time(self) -> float | None:
        res = self.result
        return None if res is None else res.get("completion_time")

    def input_rows(self) -> list[dict]:
        return [r for r in self.rows if r.get("type") in ("input", "event")]

    def write(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(canonical_json({"type": "config", "config": self.config}) + "\n")
            for row in self.rows:
                fh.write(canonical_json(row) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "SessionRecord":
        with open(path) as fh:
            first = fh.readline()
            if not first:
                raise ValueError(f"{path}: empty record")
            head = json.loads(first)
            if head.get("type") != "config":
                raise ValueError(f"{path}: first line must be the config echo")
            rows = [json.loads(line) for line in fh if line.strip()]
        return cls(config=head["config"], rows=rows)


def parse_trace_lines(lines, dt: float) -> list[TraceRow]:
    """Parse JSONL input rows, binding each timestamp to its sim tick.

    Rows must sit on the dt grid and be non-decreasing in time; anything
    else raises TraceError with the offending line number.
    """
    rows: list[TraceRow] = []
    last_tick = -1
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise TraceError(lineno, f"invalid JSON ({e.msg})")
        if not isinstance(data, dict):
            raise TraceError(lineno, "row must be a JSON object")
        if "t" not in data:
            raise TraceError(lineno, "missing timestamp 't'")
        t = data["t"]
        if not isinstance(t, (int, float)) or not math.isfinite(t) or t < 0:
            raise TraceError(lineno, f"bad timestamp {t!r}")
        tick = int(round(t / dt))
        if abs(t - tick * dt) > 1e-6:
            raise TraceError(lineno, f"timestamp {t} not aligned to dt={dt}")
        if tick < last_tick:
            raise TraceError(lineno, "timestamps must be non-decreasing")
        last_tick = tick
        if "event" in data:
            if data["event"] not in USER_EVENTS:
                raise TraceError(lineno, f"unknown event {data['event']!r}")
            rows.append(TraceRow(tick=tick, event=data["event"]))
        elif "left" in data and "right" in data:
            left, right = data["left"], data["right"]
            for v in (left, right):
                if not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise TraceError(lineno, f"bad input value {v!r}")
            rows.append(TraceRow(tick=tick, left=float(left), right=float(right)))
        else:
            raise TraceError(lineno, "row needs either 'event' or 'left'/'right'")
    return rows


def load_trace(path: str | Path, dt: float) -> list[TraceRow]:
    with open(path) as fh:
        return parse_trace_lines(fh, dt)


_BUNDLED_ALIASES = {
    "jc-full-throttle": "jc_straight",
    "ic-full-throttle": "ic_straight",
    "ec-full-throttle": "ec_straight",
}


def bundled_script_names() -> list[str]:
    root = resources.files("dragonboat").joinpath("data/scripts")
    names = sorted(
        p.name[: -len(".jsonl")] for p in root.iterdir() if p.name.endswith(".jsonl")
    )
    return names


def resolve_script(name_or_path: str, dt: float) -> list[TraceRow]:
    """Load a trace from a file path or a bundled script name."""
    path = Path(name_or_path)
    if path.exists():
        return load_trace(path, dt)
    key = _BUNDLED_ALIASES.get(name_or_path, name_or_path).replace("-", "_")
    resource = resources.files("dragonboat").joinpath(f"data/scripts/{key}.jsonl")
    if resource.is_file():
        return parse_trace_lines(resource.read_text().splitlines(), dt)
    raise FileNotFoundError(
        f"no script file or bundled script {name_or_path!r};"
        f" bundled: {', '.join(bundled_script_names())}"
    )


def run_headless(config: SessionConfig, trace: list[TraceRow]) -> SessionRecord:
    """Simulate a whole session from an input trace, deterministically.

    Commands are sticky, so the trace's last command keeps driving the boat;
    the run ends at the finish line or the configured time limit. An empty
    trace ends immediately (the session never leaves calibration). The
    result row and, when configured, the embedded heart-rate series are
    appended at the end.
    """
    engine = SessionEngine(config)
    record = SessionRecord(config=config.to_dict())
    limit_tick = int(round(config.time_limit / engine.dt))
    i = 0
    n = len(trace)
    if n:
        while not engine.finished and engine.tick_count <= limit_tick:
            tick = engine.tick_count
            while i < n and trace[i].tick == tick:
                row = trace[i]
                if row.event is not None:
                    engine.apply_event(row.event)
                else:
                    engine.apply_command(row.left, row.right)
                i += 1
            engine.tick()
    record.rows.extend(engine.rows)
    _append_result(record, engine, config)
    return record


def _append_result(
    record: SessionRecord, engine: SessionEngine, config: SessionConfig
) -> None:
    physiology = None
    if config.hr_csv:
        samples = load_hr_csv(config.hr_csv)
        for s in samples:
            record.rows.append({"type": "hr", "t": s.t, "bpm": s.bpm})
        if samples:
            phys = summarize(samples, config.profile())
            physiology = {
                "avg_hr": phys.avg_hr,
                "hr_max_predicted": phys.hr_max_predicted,
                "avg_hr_pct": phys.avg_hr_pct,
                "kcal": phys.kcal,
                "default_weight_used": phys.default_weight_used,
            }
    result = {
        "type": "result",
        "finished": engine.finished,
        "completion_time": engine.session.completion_time,
        "collisions": engine.collisions,
        "ticks": engine.tick_count,
        "snapshot_sha256": record.digest(),
    }
    if physiology is not None:
        result["physiology"] = physiology
    record.rows.append(result)


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    checked: int
    first_divergent_tick: int | None = None
    recorded_digest: str = ""
    computed_digest: str = ""

    def describe(self) -> str:
        if self.ok:
            return f"replay ok: {self.checked} snapshots match"
        if self.first_divergent_tick is None:
            return "replay failed: snapshot counts differ"
        return f"replay diverged at tick {self.first_divergent_tick}"


def replay(record: SessionRecord) -> ReplayResult:
    """Re-simulate a record's input trace and compare the snapshot trace."""
    config = SessionConfig.from_dict(record.config)
    engine = SessionEngine(config)
    pending = record.input_rows()
    recorded_states = [r for r in record.rows if r.get("type") == "state"]
    last_tick = max((r["tick"] for r in pending), default=-1)
    result = record.result or {}
    total_ticks = result.get("ticks", last_tick + 1)
    i = 0
    while engine.tick_count < total_ticks and not engine.finished:
        tick = engine.tick_count
        while i < len(pending) and pending[i]["tick"] == tick:
            row = pending[i]
            if row["type"] == "event":
                engine.apply_event(row["name"])
            elif "encoder" in row:
                enc = row["encoder"]
                engine.apply_encoder(
                    EncoderSample(
                        side=enc["side"],
                        angle=enc["angle"],
                        angular_velocity=enc["omega"],
                    )
                )
            else:
                engine.apply_command(row["left"], row["right"])
            i += 1
        engine.tick()
    computed_states = [r for r in engine.rows if r.get("type") == "state"]
    checked = 0
    for rec, comp in zip(recorded_states, computed_states):
        if canonical_json(rec) != canonical_json(comp):
            return ReplayResult(
                ok=False,
                checked=checked,
                first_divergent_tick=rec.get("tick"),
            )
        checked += 1
    if len(recorded_states) != len(computed_states):
        return ReplayResult(ok=False, checked=checked, first_divergent_tick=None)
    recorded_digest = result.get("snapshot_sha256", "")
    h = hashlib.sha256()
    for row in computed_states:
        h.update(canonical_json(row).encode())
        h.update(b"\n")
    computed_digest = h.hexdigest()
    ok = not recorded_digest or recorded_digest == computed_digest
    return ReplayResult(
        ok=ok,
        checked=checked,
        first_divergent_tick=None if ok else -1,
        recorded_digest=recorded_digest,
        computed_digest=computed_digest,
    )
