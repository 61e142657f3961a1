"""Course geometry, session phase machine, and line/obstacle detection.

The course runs along +x: a green start line at x = 0 (armed by the bow),
a red finish line at x = 1000 (taken by the stern), six 13.5 m lanes whose
boundary lines carry buoys every 10 m, and wall barriers that force an
S-shaped detour through the second half.

Lane 0 is centered on y = 0 and the remaining lanes tile upward, so a solo
session races down the course axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .sim import BoatState, HydroParams


class Phase(str, enum.Enum):
    CALIBRATION = "calibration"
    TRAINING = "training"
    RACING = "racing"
    FINISHED = "finished"


EVENT_CALIBRATE_DONE = "calibrate_done"
EVENT_RACE_REQUESTED = "race_requested"
EVENT_RESET = "reset"
EVENT_RESET_POSITION = "reset_position"  # seat recalibration; no sim effect
EVENT_START_CROSSED = "start_crossed"
EVENT_FINISH_CROSSED = "finish_crossed"


@dataclass(frozen=True)
class Barrier:
    """A wall across part of a lane; the rest of the lane stays navigable."""

    x: float
    blocked_span: tuple[float, float]  # lateral [lo, hi] in course coordinates
    thickness: float = 1.0

    def __post_init__(self):
        lo, hi = self.blocked_span
        if not (lo < hi):
            raise ValueError("blocked_span must be a nonempty interval")
        if self.thickness <= 0.0:
            raise ValueError("thickness must be positive")

    def rect(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax) of the wall footprint."""
        half = self.thickness / 2.0
        lo, hi = self.blocked_span
        return (self.x - half, self.x + half, lo, hi)


def default_barriers(lane_width: float = 13.5) -> tuple[Barrier, ...]:
    """Walls at 500 m and 750 m, each blocking 60% of lane 0.

    The first blocks the left (+y) side, the second the right, forcing a
    right-then-left detour; both leave a 40% gap, well over two boat beams.
    """
    half = lane_width / 2.0
    blocked = 0.6 * lane_width
    return (
        Barrier(x=500.0, blocked_span=(half - blocked, half)),
        Barrier(x=750.0, blocked_span=(-half, -half + blocked)),
    )


@dataclass(frozen=True)
class Track:
    length: float = 1000.0
    lane_count: int = 6
    lane_width: float = 13.5
    buoy_spacing: float = 10.0
    start_x: float = 0.0
    barriers: tuple[Barrier, ...] = ()

    def __post_init__(self):
        if self.length <= 0 or self.lane_width <= 0 or self.buoy_spacing <= 0:
            raise ValueError("track dimensions must be positive")
        if self.lane_count < 1:
            raise ValueError("need at least one lane")
        for b in self.barriers:
            if not (self.start_x < b.x < self.finish_x):
                raise ValueError(
                    f"barrier at x={b.x} outside open course ({self.start_x},"
                    f" {self.finish_x})"
                )

    @property
    def finish_x(self) -> float:
        return self.start_x + self.length

    def lane_bounds(self, lane: int) -> tuple[float, float]:
        """Lateral extent of a lane; lane 0 is centered on y = 0."""
        if not (0 <= lane < self.lane_count):
            raise ValueError(f"lane {lane} out of range")
        lo = -self.lane_width / 2.0 + lane * self.lane_width
        return lo, lo + self.lane_width

    def lane_line_ys(self) -> list[float]:
        """The lane_count + 1 boundary lines that carry the buoys."""
        base = -self.lane_width / 2.0
        return [base + i * self.lane_width for i in range(self.lane_count + 1)]

    def buoy_xs(self) -> list[float]:
        """Buoy stations along one lane line, both end lines included."""
        count = int(round(self.length / self.buoy_spacing)) + 1
        return [self.start_x + i * self.buoy_spacing for i in range(count)]

    def barrier_lane(self, b: Barrier) -> int:
        """Index of the lane containing a barrier's blocked span."""
        lo, hi = b.blocked_span
        for lane in range(self.lane_count):
            llo, lhi = self.lane_bounds(lane)
            if llo <= lo and hi <= lhi:
                return lane
        raise ValueError(f"barrier span {b.blocked_span} not inside any lane")

    def navigable_gap(self, b: Barrier) -> float:
        """Widest free lateral interval left by a barrier within its lane."""
        llo, lhi = self.lane_bounds(self.barrier_lane(b))
        lo, hi = b.blocked_span
        return max(lo - llo, lhi - hi)

    def validate_navigable(self, beam: float) -> None:
        for b in self.barriers:
            if self.navigable_gap(b) < 2.0 * beam:
                raise ValueError(
                    f"barrier at x={b.x} leaves a gap under two boat beams"
                )


def track_preset(name: str) -> Track:
    """The two bundled courses: 'straight' (open water) and 'barrier'."""
    if name == "straight":
        return Track()
    if name == "barrier":
        return Track(barriers=default_barriers())
    raise ValueError(f"unknown track preset {name!r}")


@dataclass(frozen=True)
class BoatFootprint:
    """Bow/stern endpoints of the hull centerline plus its beam."""

    bow: tuple[float, float]
    stern: tuple[float, float]
    beam: float


def footprint_of(b: BoatState, h: HydroParams) -> BoatFootprint:
    half = h.boat_length / 2.0
    dx = math.cos(b.heading) * half
    dy = math.sin(b.heading) * half
    return BoatFootprint(
        bow=(b.x + dx, b.y + dy),
        stern=(b.x - dx, b.y - dy),
        beam=h.beam,
    )


def detect_start(prev: BoatFootprint, cur: BoatFootprint, track: Track) -> bool:
    """Rising-edge test: the bow crossed the start line this step."""
    return prev.bow[0] < track.start_x <= cur.bow[0]


def detect_finish(prev: BoatFootprint, cur: BoatFootprint, track: Track) -> bool:
    """The stern (not the bow) crossed the finish line this step."""
    return prev.stern[0] < track.finish_x <= cur.stern[0]


@dataclass(frozen=True)
class CollisionReport:
    collided: bool
    barrier_index: int | None = None


def collide(cur: BoatFootprint, barriers: tuple[Barrier, ...]) -> CollisionReport:
    """Capsule-vs-wall test on the boat's swept hull segment.

    The hull is the bow-stern segment inflated by half the beam; contact is
    an open intersection, so a pose exactly tangent to a wall edge does not
    collide. The first hit barrier (course order as given) is reported.
    """
    radius = cur.beam / 2.0
    bx, sx = cur.bow[0], cur.stern[0]
    span_lo = (bx if bx < sx else sx) - radius
    span_hi = (bx if bx > sx else sx) + radius
    for i, b in enumerate(barriers):
        half = b.thickness / 2.0
        if b.x + half < span_lo or b.x - half > span_hi:
            continue  # cheap x-interval reject; walls are thin and sparse
        if _segment_rect_distance(cur.bow, cur.stern, b.rect()) < radius:
            return CollisionReport(collided=True, barrier_index=i)
    return CollisionReport(collided=False)


def _segment_rect_distance(
    p: tuple[float, float],
    q: tuple[float, float],
    rect: tuple[float, float, float, float],
) -> float:
    xmin, xmax, ymin, ymax = rect
    if (xmin <= p[0] <= xmax and ymin <= p[1] <= ymax) or (
        xmin <= q[0] <= xmax and ymin <= q[1] <= ymax
    ):
        return 0.0
    corners = ((xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax))
    best = math.inf
    for a, b in zip(corners, corners[1:] + corners[:1]):
        d = _segment_segment_distance(p, q, a, b)
        if d < best:
            best = d
    return best


def _segment_segment_distance(p1, p2, q1, q2) -> float:
    """Minimum distance between two 2-D segments (0 when they cross)."""
    d1x, d1y = p2[0] - p1[0], p2[1] - p1[1]
    d2x, d2y = q2[0] - q1[0], q2[1] - q1[1]
    rx, ry = p1[0] - q1[0], p1[1] - q1[1]
    a = d1x * d1x + d1y * d1y
    e = d2x * d2x + d2y * d2y
    f = d2x * rx + d2y * ry
    if a == 0.0 and e == 0.0:
        return math.hypot(rx, ry)
    if a == 0.0:
        s = 0.0
        t = _clamp01(f / e)
    else:
        c = d1x * rx + d1y * ry
        if e == 0.0:
            t = 0.0
            s = _clamp01(-c / a)
        else:
            b = d1x * d2x + d1y * d2y
            denom = a * e - b * b
            s = _clamp01((b * f - c * e) / denom) if denom != 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = _clamp01(-c / a)
            elif t > 1.0:
                t = 1.0
                s = _clamp01((b - c) / a)
    cx = p1[0] + d1x * s - (q1[0] + d2x * t)
    cy = p1[1] + d1y * s - (q1[1] + d2y * t)
    return math.hypot(cx, cy)


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


@dataclass(frozen=True)
class RaceSession:
    """Forward-only phase machine with the recorded completion time.

    Racing is entered armed (start time unset); the timer starts on the
    bow's start-line edge and the session finishes on the stern's
    finish-line edge. Only reset may move backwards (training back to
    calibration); anything else that does not fit the table is rejected by
    returning the session unchanged.
    """

    phase: Phase = Phase.CALIBRATION
    technique: str = "jc"
    race_start_time: float | None = None
    completion_time: float | None = None

    @property
    def armed(self) -> bool:
        return self.phase is Phase.RACING and self.race_start_time is None


def advance_phase(
    session: RaceSession, event: str, t: float | None = None
) -> RaceSession:
    if event == EVENT_RESET_POSITION:
        return session
    phase = session.phase
    if phase is Phase.FINISHED:
        return session
    if phase is Phase.CALIBRATION and event == EVENT_CALIBRATE_DONE:
        return replace(session, phase=Phase.TRAINING)
    if phase is Phase.TRAINING and event == EVENT_RACE_REQUESTED:
        return replace(session, phase=Phase.RACING, race_start_time=None)
    if phase is Phase.TRAINING and event == EVENT_RESET:
        return replace(session, phase=Phase.CALIBRATION)
    if phase is Phase.RACING and event == EVENT_START_CROSSED:
        if t is None or session.race_start_time is not None:
            return session
        return replace(session, race_start_time=t)
    if phase is Phase.RACING and event == EVENT_FINISH_CROSSED:
        if t is None or session.race_start_time is None:
            return session
        return replace(
            session,
            phase=Phase.FINISHED,
            completion_time=t - session.race_start_time,
        )
    return session
