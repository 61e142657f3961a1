"""Realtime session service.

One authoritative 60 Hz loop owns the session engine. A single control
client connects over a websocket carrying JSON text messages; an optional
device endpoint accepts the raw framed byte stream from exertion-handle
hardware on a plain TCP port and receives resistance commands back. All
inputs are queued and applied between ticks in arrival order, and every
applied row lands in the session record, so live sessions replay exactly
like headless ones.

Client -> server:  {"type":"input","technique":...,"left":...,"right":...}
                   {"type":"event","name":"calibrate_done"|...}
Server -> client:  {"type":"hello",...}, {"type":"state",...},
                   {"type":"phase","value":...},
                   {"type":"result","completion_time":...}
"""

from __future__ import annotations

import asyncio
import json
import logging
import os
import signal
from pathlib import Path

from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from .protocol import (
    TYPE_ENCODER_REPORT,
    StreamParser,
    encode_frame,
    resistance_frame,
)
from .session import (
    SessionConfig,
    SessionEngine,
    SessionRecord,
    canonical_json,
)

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    level = os.environ.get("DRAGONBOAT_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )


class RaceServer:
    """Session orchestrator around one SessionEngine and its endpoints."""

    def __init__(
        self,
        config: SessionConfig,
        host: str = "127.0.0.1",
        port: int = 8765,
        device_port: int | None = None,
        record_path: str | Path | None = None,
    ):
        self.config = config
        self.host = host
        self.port = port
        self.device_port = device_port
        self.record_path = record_path
        self.engine = SessionEngine(config)
        self._inbox: asyncio.Queue = asyncio.Queue()
        self._client = None
        self._device_writer: asyncio.StreamWriter | None = None
        self._device_seq = 0
        self._record_file = None
        self._rows_written = 0
        self._result_sent = False
        self.started = asyncio.Event()
        self.bound_port: int | None = None
        self.bound_device_port: int | None = None

    # -- endpoints ----------------------------------------------------------

    async def _handle_client(self, ws) -> None:
        if self._client is not None:
            await ws.send(
                json.dumps({"type": "error", "message": "session already has a client"})
            )
            await ws.close()
            return
        self._client = ws
        self.engine.restore_inputs()
        logger.info("control client connected")
        try:
            await ws.send(json.dumps(self._hello()))
            async for raw in ws:
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    await ws.send(
                        json.dumps({"type": "error", "message": "invalid JSON"})
                    )
                    continue
                await self._inbox.put(("client", msg))
        except ConnectionClosed:
            pass
        finally:
            self._client = None
            self.engine.drop_inputs()
            logger.info("control client disconnected; paddles will decay")

    def _hello(self) -> dict:
        return {
            "type": "hello",
            "config": self.config.to_dict(),
            "state": self.engine.snapshot(),
        }

    async def _handle_device(
        self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter
    ) -> None:
        parser = StreamParser()
        self._device_writer = writer
        logger.info("device stream connected")
        try:
            while True:
                chunk = await reader.read(4096)
                if not chunk:
                    break
                for frame in parser.feed(chunk):
                    if frame.frame_type == TYPE_ENCODER_REPORT:
                        await self._inbox.put(("encoder", frame.encoder_sample()))
                if parser.diagnostics.crc_mismatch:
                    logger.debug(
                        "device stream diagnostics: %s", parser.diagnostics
                    )
        finally:
            self._device_writer = None
            writer.close()
            logger.info("device stream disconnected (%s)", parser.diagnostics)

    # -- loop ----------------------------------------------------------------

    def _apply_message(self, origin: str, msg) -> None:
        if origin == "encoder":
            try:
                self.engine.apply_encoder(msg)
            except ValueError as e:
                logger.warning("dropped corrupt encoder report: %s", e)
            return
        mtype = msg.get("type")
        if mtype == "input":
            technique = msg.get("technique", self.config.technique)
            if technique != self.config.technique:
                logger.warning(
                    "input for technique %r ignored (session is %r)",
                    technique,
                    self.config.technique,
                )
                return
            try:
                left = float(msg["left"])
                right = float(msg["right"])
            except (KeyError, TypeError, ValueError):
                logger.warning("malformed input message: %s", msg)
                return
            self.engine.apply_command(left, right)
        elif mtype == "event":
            name = msg.get("name")
            try:
                self.engine.apply_event(name)
            except ValueError as e:
                logger.warning("%s", e)
        else:
            logger.warning("unknown message type %r", mtype)

    async def _tick_loop(self) -> None:
        dt = self.engine.dt
        loop = asyncio.get_running_loop()
        next_deadline = loop.time() + dt
        while True:
            while True:
                try:
                    origin, msg = self._inbox.get_nowait()
                except asyncio.QueueEmpty:
                    break
                self._apply_message(origin, msg)
            self.engine.tick()
            await self._flush_rows()
            delay = next_deadline - loop.time()
            next_deadline += dt
            if delay > 0:
                await asyncio.sleep(delay)
            # a stalled loop catches up by ticking back-to-back

    async def _flush_rows(self) -> None:
        rows = self.engine.rows
        while self._rows_written < len(rows):
            row = rows[self._rows_written]
            self._rows_written += 1
            if self._record_file is not None:
                self._record_file.write(canonical_json(row) + "\n")
            if row["type"] in ("state", "phase") and self._client is not None:
                try:
                    await self._client.send(canonical_json(row))
                except ConnectionClosed:
                    pass
        for cmd in self.engine.outgoing_resistance:
            if self._device_writer is not None:
                self._device_writer.write(
                    encode_frame(resistance_frame(cmd, self._device_seq))
                )
                self._device_seq = (self._device_seq + 1) & 0xFF
        if self.engine.outgoing_resistance and self._device_writer is not None:
            await self._device_writer.drain()
        self.engine.outgoing_resistance.clear()
        if self.engine.finished and not self._result_sent:
            self._result_sent = True
            result = {
                "type": "result",
                "completion_time": self.engine.session.completion_time,
                "collisions": self.engine.collisions,
            }
            if self._record_file is not None:
                self._record_file.write(canonical_json(self._result_row()) + "\n")
                self._record_file.flush()
            if self._client is not None:
                try:
                    await self._client.send(json.dumps(result))
                except ConnectionClosed:
                    pass
            logger.info(
                "race finished in %.2f s", self.engine.session.completion_time
            )

    def _result_row(self) -> dict:
        record = SessionRecord(config=self.config.to_dict(), rows=self.engine.rows)
        return {
            "type": "result",
            "finished": self.engine.finished,
            "completion_time": self.engine.session.completion_time,
            "collisions": self.engine.collisions,
            "ticks": self.engine.tick_count,
            "snapshot_sha256": record.digest(),
        }

    async def run(self) -> None:
        """Serve until cancelled; binds the websocket and device endpoints."""
        if self.record_path is not None:
            self._record_file = open(self.record_path, "w")
            self._record_file.write(
                canonical_json(
                    {"type": "config", "config": self.config.to_dict()}
                )
                + "\n"
            )
        device_server = None
        try:
            async with ws_serve(self._handle_client, self.host, self.port) as server:
                self.bound_port = server.sockets[0].getsockname()[1]
                if self.device_port is not None:
                    device_server = await asyncio.start_server(
                        self._handle_device, self.host, self.device_port
                    )
                    self.bound_device_port = device_server.sockets[0].getsockname()[1]
                self.started.set()
                logger.info(
                    "serving ws://%s:%d (device port %s)",
                    self.host,
                    self.bound_port,
                    self.bound_device_port,
                )
                await self._tick_loop()
        finally:
            if device_server is not None:
                device_server.close()
            if self._record_file is not None:
                if not self._result_sent:
                    self._record_file.write(
                        canonical_json(self._result_row()) + "\n"
                    )
                self._record_file.close()


def serve(
    config: SessionConfig,
    host: str = "127.0.0.1",
    port: int = 8765,
    device_port: int | None = None,
    record_path: str | Path | None = None,
) -> None:
    """Blocking entry point for the CLI."""
    server = RaceServer(
        config,
        host=host,
        port=port,
        device_port=device_port,
        record_path=record_path,
    )

    async def main() -> None:
        task = asyncio.current_task()
        asyncio.get_running_loop().add_signal_handler(
            signal.SIGTERM, task.cancel
        )
        await server.run()

    try:
        asyncio.run(main())
    except (KeyboardInterrupt, asyncio.CancelledError):
        logger.info("interrupted; session record closed")
