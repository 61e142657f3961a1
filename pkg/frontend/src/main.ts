// Entry point: wires the socket, input emulation, and the render loop.

import { SnapshotBuffer } from "./interpolation.js";
import { InputEmulator, KEY_BINDINGS } from "./input.js";
import { Connection, serverUrl } from "./net.js";
import {
    eventMessage,
    inputMessage,
    type SessionEvent,
    type SessionInfo,
    type Technique,
} from "./protocol.js";
import { render, type Scene } from "./render.js";

const SEND_INTERVAL_MS = 33; // >= 30 Hz while connected

function main(): void {
    const canvas = document.getElementById("course") as HTMLCanvasElement;
    const ctx = canvas.getContext("2d")!;
    const techniqueSelect = document.getElementById(
        "technique",
    ) as HTMLSelectElement;
    const statusEl = document.getElementById("status")!;

    const buffer = new SnapshotBuffer();
    const emulator = new InputEmulator();
    let config: SessionInfo | null = null;
    let connected = false;
    let completionTime: number | null = null;

    const conn = new Connection(serverUrl(window.location), {
        onOpen: () => {
            connected = true;
            statusEl.textContent = `connected to ${serverUrl(window.location)}`;
        },
        onClose: () => {
            connected = false;
            statusEl.textContent = "disconnected, retrying…";
        },
        onMessage: (msg) => {
            switch (msg.type) {
                case "hello":
                    config = msg.config;
                    completionTime = null;
                    buffer.push(msg.state, performance.now());
                    techniqueSelect.value = msg.config.technique;
                    emulator.technique = msg.config.technique;
                    break;
                case "state":
                    buffer.push(msg, performance.now());
                    break;
                case "result":
                    completionTime = msg.completion_time;
                    break;
                case "error":
                    statusEl.textContent = `server: ${msg.message}`;
                    break;
                case "phase":
                    break; // phase also rides along on every snapshot
            }
        },
    });
    conn.connect();

    // the selector mirrors the server-side technique; inputs for another
    // technique would be ignored server-side anyway
    techniqueSelect.addEventListener("change", () => {
        emulator.technique = techniqueSelect.value as Technique;
    });

    for (const id of ["calibrate_done", "race_requested", "reset_position", "reset"]) {
        document.getElementById(`btn-${id}`)?.addEventListener("click", () => {
            conn.send(eventMessage(id as SessionEvent));
        });
    }

    window.addEventListener("keydown", (ev) => {
        const binding = KEY_BINDINGS[ev.code];
        if (binding && !ev.repeat) {
            emulator.setKey(binding.hand, binding.direction, true, performance.now());
            ev.preventDefault();
        }
    });
    window.addEventListener("keyup", (ev) => {
        const binding = KEY_BINDINGS[ev.code];
        if (binding) {
            emulator.setKey(binding.hand, binding.direction, false, performance.now());
            ev.preventDefault();
        }
    });
    window.addEventListener("blur", () => emulator.releaseAll());

    function pollGamepad(): void {
        const pads = navigator.getGamepads ? navigator.getGamepads() : [];
        const pad = pads && pads[0];
        if (!pad) return;
        // stick Y axes are down-positive; invert so pushing away paddles forward
        const leftY = pad.axes.length > 1 ? -pad.axes[1] : 0;
        const rightY = pad.axes.length > 3 ? -pad.axes[3] : leftY;
        const dead = 0.08;
        emulator.setAnalog("left", Math.abs(leftY) > dead ? leftY : null);
        emulator.setAnalog("right", Math.abs(rightY) > dead ? rightY : null);
    }

    setInterval(() => {
        if (!connected) return;
        const now = performance.now();
        const { left, right } = emulator.commands(now);
        const t = buffer.current ? buffer.current.t : 0;
        conn.send(inputMessage(emulator.technique, left, right, t));
    }, SEND_INTERVAL_MS);

    function frame(): void {
        pollGamepad();
        const now = performance.now();
        const scene: Scene = {
            config,
            snapshot: buffer.current,
            pose: buffer.pose(now),
            connected,
            stale: buffer.isStale(now),
            completionTime,
        };
        render(ctx, scene);
        requestAnimationFrame(frame);
    }
    requestAnimationFrame(frame);
}

main();
