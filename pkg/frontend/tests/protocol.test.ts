import { describe, expect, it } from "vitest";

import {
    eventMessage,
    inputMessage,
    isStateMessage,
    parseServerMessage,
} from "../src/protocol.js";

const STATE = {
    type: "state",
    tick: 300,
    t: 5.0,
    x: 12.5,
    y: 0.0,
    heading: 0.0,
    v: 3.2,
    yaw_rate: 0.0,
    dist: 20.0,
    remaining: 981.25,
    phase: "racing",
    left: { angle: 337.0, omega: 360.0, wet: true },
    right: { angle: 12.0, omega: 360.0, wet: true },
    resist: { left: true, right: true },
};

describe("parseServerMessage", () => {
    it("accepts a well-formed state row", () => {
        const msg = parseServerMessage(JSON.stringify(STATE));
        expect(msg).not.toBeNull();
        expect(msg!.type).toBe("state");
        expect(isStateMessage(msg)).toBe(true);
    });

    it("rejects malformed JSON and foreign types", () => {
        expect(parseServerMessage("{nope")).toBeNull();
        expect(parseServerMessage('"just a string"')).toBeNull();
        expect(parseServerMessage('{"type":"telemetry"}')).toBeNull();
    });

    it("rejects a state row with missing paddle fields", () => {
        const broken: Record<string, unknown> = { ...STATE };
        broken.left = { angle: 1.0 };
        expect(parseServerMessage(JSON.stringify(broken))).toBeNull();
    });

    it("accepts phase, result and error rows", () => {
        expect(parseServerMessage('{"type":"phase","value":"racing"}')!.type).toBe(
            "phase",
        );
        expect(
            parseServerMessage('{"type":"result","completion_time":197.72}')!.type,
        ).toBe("result");
        expect(parseServerMessage('{"type":"error","message":"x"}')!.type).toBe(
            "error",
        );
    });
});

describe("client messages", () => {
    it("serializes inputs with the technique tag", () => {
        const raw = inputMessage("jc", 1.0, 0.5, 12.25);
        expect(JSON.parse(raw)).toEqual({
            type: "input",
            technique: "jc",
            left: 1.0,
            right: 0.5,
            t: 12.25,
        });
    });

    it("serializes session events", () => {
        expect(JSON.parse(eventMessage("race_requested"))).toEqual({
            type: "event",
            name: "race_requested",
        });
    });
});
