"""Framed wire protocol for the exertion-controller link, plus a scripted
device simulator standing in for the real handle hardware.

Frame layout (bit-exact, any ordered byte stream):

    0xAA 0x55 | type (1) | seq (1) | payload | crc16 (2, big-endian)

The CRC is CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection)
over type + seq + payload. Payload lengths are fixed per type:

    0x01 encoder report   5 B: side u8, angle u16 LE centi-deg,
                               omega i16 LE deci-deg/s
    0x02 resistance cmd   2 B: side u8, level u8 (0 or 255)
    0x03 heartbeat        0 B
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .sim import LEFT, RIGHT, wrap_degrees
from .techniques import EncoderSample, ResistanceCommand

MAGIC = b"\xaa\x55"

TYPE_ENCODER_REPORT = 0x01
TYPE_RESISTANCE_CMD = 0x02
TYPE_HEARTBEAT = 0x03

PAYLOAD_LENGTHS = {
    TYPE_ENCODER_REPORT: 5,
    TYPE_RESISTANCE_CMD: 2,
    TYPE_HEARTBEAT: 0,
}

SIDE_CODES = {LEFT: 0, RIGHT: 1}
SIDE_NAMES = {0: LEFT, 1: RIGHT}

_CRC_TABLE = []
for _byte in range(256):
    _crc = _byte << 8
    for _ in range(8):
        _crc = ((_crc << 1) ^ 0x1021) if (_crc & 0x8000) else (_crc << 1)
    _CRC_TABLE.append(_crc & 0xFFFF)


def crc16_ccitt_false(data: bytes) -> int:
    """CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout."""
    crc = 0xFFFF
    for b in data:
        crc = ((crc << 8) & 0xFFFF) ^ _CRC_TABLE[(crc >> 8) ^ b]
    return crc


@dataclass(frozen=True)
class DeviceFrame:
    """One framed message; payload bytes are type-specific."""

    frame_type: int
    seq: int
    payload: bytes = b""

    def encoder_sample(self) -> EncoderSample:
        if self.frame_type != TYPE_ENCODER_REPORT:
            raise ValueError("not an encoder report")
        side, angle, omega = struct.unpack("<BHh", self.payload)
        return EncoderSample(
            side=SIDE_NAMES[side & 1], angle=angle, angular_velocity=omega
        )

    def resistance_command(self) -> ResistanceCommand:
        if self.frame_type != TYPE_RESISTANCE_CMD:
            raise ValueError("not a resistance command")
        side, level = struct.unpack("<BB", self.payload)
        return ResistanceCommand(side=SIDE_NAMES[side & 1], level=level)


def encoder_report_frame(sample: EncoderSample, seq: int) -> DeviceFrame:
    payload = struct.pack(
        "<BHh", SIDE_CODES[sample.side], sample.angle, sample.angular_velocity
    )
    return DeviceFrame(TYPE_ENCODER_REPORT, seq, payload)


def resistance_frame(cmd: ResistanceCommand, seq: int) -> DeviceFrame:
    payload = struct.pack("<BB", SIDE_CODES[cmd.side], cmd.level)
    return DeviceFrame(TYPE_RESISTANCE_CMD, seq, payload)


def heartbeat_frame(seq: int) -> DeviceFrame:
    return DeviceFrame(TYPE_HEARTBEAT, seq)


def encode_frame(f: DeviceFrame) -> bytes:
    """Serialize a frame; refuses unknown types and wrong payload sizes."""
    expected = PAYLOAD_LENGTHS.get(f.frame_type)
    if expected is None:
        raise ValueError(f"unknown frame type 0x{f.frame_type:02x}")
    if len(f.payload) != expected:
        raise ValueError(
            f"type 0x{f.frame_type:02x} payload must be {expected} bytes,"
            f" got {len(f.payload)}"
        )
    if not (0 <= f.seq <= 0xFF):
        raise ValueError(f"seq {f.seq} outside one byte")
    body = bytes((f.frame_type, f.seq)) + f.payload
    return MAGIC + body + crc16_ccitt_false(body).to_bytes(2, "big")


@dataclass
class Diagnostics:
    """Parse-error counters; accumulated across feeds by StreamParser."""

    skipped_bytes: int = 0
    crc_mismatch: int = 0
    unknown_type: int = 0
    truncated: int = 0
    seq_gaps: int = 0

    def merge(self, other: "Diagnostics") -> None:
        self.skipped_bytes += other.skipped_bytes
        self.crc_mismatch += other.crc_mismatch
        self.unknown_type += other.unknown_type
        self.truncated += other.truncated
        self.seq_gaps += other.seq_gaps


def decode_stream(buffer: bytes) -> tuple[list[DeviceFrame], int, Diagnostics]:
    """Parse as many whole frames as the buffer holds.

    Returns (frames, consumed, diagnostics). Bytes before a magic pair are
    skipped; a CRC failure or unknown type advances past the magic and
    resynchronizes on the next one. A partial trailing frame (or a lone
    trailing 0xAA that may begin one) is never consumed, so callers can
    append more bytes and call again.
    """
    frames: list[DeviceFrame] = []
    diags = Diagnostics()
    n = len(buffer)
    pos = 0
    while True:
        start = buffer.find(MAGIC, pos)
        if start < 0:
            # Retain a trailing 0xAA: the 0x55 may arrive in the next chunk.
            keep = 1 if n > pos and buffer[n - 1] == MAGIC[0] else 0
            diags.skipped_bytes += n - keep - pos
            return frames, n - keep, diags
        if start > pos:
            diags.skipped_bytes += start - pos
        if n - start < 4:
            diags.truncated += 1
            return frames, start, diags
        ftype = buffer[start + 2]
        plen = PAYLOAD_LENGTHS.get(ftype)
        if plen is None:
            diags.unknown_type += 1
            diags.skipped_bytes += 2
            pos = start + 2
            continue
        frame_len = 6 + plen
        if n - start < frame_len:
            diags.truncated += 1
            return frames, start, diags
        body = buffer[start + 2 : start + 4 + plen]
        crc = int.from_bytes(buffer[start + 4 + plen : start + frame_len], "big")
        if crc != crc16_ccitt_false(body):
            diags.crc_mismatch += 1
            diags.skipped_bytes += 2
            pos = start + 2
            continue
        frames.append(DeviceFrame(ftype, buffer[start + 3], bytes(buffer[start + 4 : start + 4 + plen])))
        pos = start + frame_len


class StreamParser:
    """Incremental frame parser for one connection (single-owner, stateful).

    Buffers partial frames between feeds and tracks per-type sequence
    continuity; every detected gap increments diagnostics.seq_gaps.
    """

    def __init__(self):
        self._buffer = bytearray()
        self.diagnostics = Diagnostics()
        self._last_seq: dict[int, int] = {}

    def feed(self, data: bytes) -> list[DeviceFrame]:
        self._buffer.extend(data)
        frames, consumed, diags = decode_stream(bytes(self._buffer))
        del self._buffer[:consumed]
        self.diagnostics.merge(diags)
        for f in frames:
            last = self._last_seq.get(f.frame_type)
            if last is not None and f.seq != ((last + 1) & 0xFF):
                self.diagnostics.seq_gaps += 1
            self._last_seq[f.frame_type] = f.seq
        return frames

    @property
    def pending(self) -> int:
        return len(self._buffer)


@dataclass
class SimulatedDevice:
    """Scripted stand-in for the paired-handle hardware.

    Integrates commanded handle angular velocities into absolute angles;
    while a side's resistance relay is on, the achievable rate drops by
    friction_gain (the motor drags against the user). An optional script of
    (t, left_omega, right_omega) rows retargets the handles as time passes.
    Emits one quantized encoder report per side per tick.
    """

    friction_gain: float = 0.25
    script: tuple[tuple[float, float, float], ...] = ()
    angles: dict[str, float] = field(default_factory=lambda: {LEFT: 0.0, RIGHT: 0.0})
    target_omega: dict[str, float] = field(
        default_factory=lambda: {LEFT: 0.0, RIGHT: 0.0}
    )
    resistance_on: dict[str, bool] = field(
        default_factory=lambda: {LEFT: False, RIGHT: False}
    )

    def __post_init__(self):
        if not (0.0 <= self.friction_gain < 1.0):
            raise ValueError("friction_gain must be in [0, 1)")
        self._time = 0.0
        self._script_pos = 0
        self._seq = 0

    def command_omega(self, side: str, omega_deg_s: float) -> None:
        self.target_omega[side] = omega_deg_s

    def apply_resistance(self, cmd: ResistanceCommand) -> None:
        """Takes effect from the next tick's integration onward."""
        self.resistance_on[cmd.side] = cmd.level != 0

    def effective_omega(self, side: str) -> float:
        omega = self.target_omega[side]
        if self.resistance_on[side]:
            omega *= 1.0 - self.friction_gain
        return omega

    def tick(self, dt: float) -> list[EncoderSample]:
        """Advance dt seconds and emit one report per side (left first)."""
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        while self._script_pos < len(self.script) and (
            self.script[self._script_pos][0] <= self._time
        ):
            _, left, right = self.script[self._script_pos]
            self.target_omega[LEFT] = left
            self.target_omega[RIGHT] = right
            self._script_pos += 1
        samples = []
        for side in (LEFT, RIGHT):
            omega = self.effective_omega(side)
            self.angles[side] = wrap_degrees(self.angles[side] + omega * dt)
            samples.append(
                EncoderSample(
                    side=side,
                    angle=int(round(self.angles[side] * 100.0)) % 36000,
                    angular_velocity=_clamp_i16(int(round(omega * 10.0))),
                )
            )
        self._time += dt
        return samples

    def tick_frames(self, dt: float) -> list[bytes]:
        """Like tick() but wire-encoded, with the device's own seq counter."""
        out = []
        for sample in self.tick(dt):
            out.append(encode_frame(encoder_report_frame(sample, self._seq)))
            self._seq = (self._seq + 1) & 0xFF
        return out


def _clamp_i16(v: int) -> int:
    return -32768 if v < -32768 else (32767 if v > 32767 else v)


def write_capture(frames, path) -> None:
    """Store frames as a capture file: raw concatenated wire bytes."""
    with open(path, "wb") as fh:
        for f in frames:
            fh.write(encode_frame(f))


def read_capture(path) -> tuple[list[DeviceFrame], Diagnostics]:
    """Parse a capture file; diagnostics count any corruption found."""
    with open(path, "rb") as fh:
        frames, _, diags = decode_stream(fh.read())
    return frames, diags
