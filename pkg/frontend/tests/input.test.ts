import { describe, expect, it } from "vitest";

import {
    CADENCE_WINDOW_MS,
    CadenceTracker,
    EC_DEG_PER_TAP,
    EC_OMEGA_CAP,
    IC_PITCH_RATE,
    InputEmulator,
    KEY_BINDINGS,
} from "../src/input.js";

describe("jc keyboard emulation", () => {
    it("maps held keys to full stick deflection per hand", () => {
        const emu = new InputEmulator();
        emu.technique = "jc";
        emu.setKey("left", "up", true, 0);
        expect(emu.commands(0)).toEqual({ left: 1, right: 0 });
        emu.setKey("right", "down", true, 0);
        expect(emu.commands(0)).toEqual({ left: 1, right: -1 });
    });

    it("opposed keys cancel", () => {
        const emu = new InputEmulator();
        emu.setKey("left", "up", true, 0);
        emu.setKey("left", "down", true, 0);
        expect(emu.value("left", 0)).toBe(0);
    });

    it("release returns to zero", () => {
        const emu = new InputEmulator();
        emu.setKey("left", "up", true, 0);
        emu.setKey("left", "up", false, 10);
        expect(emu.value("left", 10)).toBe(0);
    });

    it("analog stick overrides the keys", () => {
        const emu = new InputEmulator();
        emu.setKey("left", "up", true, 0);
        emu.setAnalog("left", 0.55);
        expect(emu.value("left", 0)).toBe(0.55);
        emu.setAnalog("left", null);
        expect(emu.value("left", 0)).toBe(1);
    });

    it("analog values clamp to the stick range", () => {
        const emu = new InputEmulator();
        emu.setAnalog("right", 1.8);
        expect(emu.value("right", 0)).toBe(1);
    });
});

describe("ic emulation", () => {
    it("held key gives the constant pitch rate", () => {
        const emu = new InputEmulator();
        emu.technique = "ic";
        emu.setKey("left", "up", true, 0);
        expect(emu.value("left", 0)).toBe(IC_PITCH_RATE);
        emu.setKey("left", "up", false, 0);
        emu.setKey("left", "down", true, 0);
        expect(emu.value("left", 0)).toBe(-IC_PITCH_RATE);
    });

    it("analog scales the rate", () => {
        const emu = new InputEmulator();
        emu.technique = "ic";
        emu.setAnalog("right", 0.5);
        expect(emu.value("right", 0)).toBeCloseTo(0.5 * IC_PITCH_RATE, 9);
    });
});

describe("ec cadence emulation", () => {
    it("counts taps per second over the window", () => {
        const tracker = new CadenceTracker();
        tracker.tap(0);
        tracker.tap(300);
        tracker.tap(600);
        expect(tracker.rate(900)).toBeCloseTo(3, 9);
        // old taps age out of the window
        expect(tracker.rate(CADENCE_WINDOW_MS + 601)).toBeCloseTo(0, 9);
    });

    it("keydown edges crank the handles, holds do not", () => {
        const emu = new InputEmulator();
        emu.technique = "ec";
        emu.setKey("left", "up", true, 0);
        emu.setKey("left", "up", true, 100); // repeat event, no new edge
        expect(emu.value("left", 200)).toBeCloseTo(EC_DEG_PER_TAP, 9);
        emu.setKey("left", "up", false, 250);
        emu.setKey("left", "up", true, 300);
        expect(emu.value("left", 400)).toBeCloseTo(2 * EC_DEG_PER_TAP, 9);
    });

    it("backward taps subtract and the rate caps", () => {
        const emu = new InputEmulator();
        emu.technique = "ec";
        for (let i = 0; i < 3; i++) {
            emu.setKey("right", "up", true, i * 100);
            emu.setKey("right", "up", false, i * 100 + 50);
            emu.setKey("right", "down", true, i * 100 + 60);
            emu.setKey("right", "down", false, i * 100 + 90);
        }
        expect(emu.value("right", 500)).toBeCloseTo(0, 9);
        const spinner = new InputEmulator();
        spinner.technique = "ec";
        for (let i = 0; i < 20; i++) {
            spinner.setKey("left", "up", true, i * 40);
            spinner.setKey("left", "up", false, i * 40 + 20);
        }
        expect(spinner.value("left", 800)).toBe(EC_OMEGA_CAP);
    });

    it("trigger analog maps straight to a crank rate", () => {
        const emu = new InputEmulator();
        emu.technique = "ec";
        emu.setAnalog("left", 0.5);
        expect(emu.value("left", 0)).toBeCloseTo(0.5 * EC_OMEGA_CAP, 9);
    });

    it("cadence decays to rest after the last tap", () => {
        const emu = new InputEmulator();
        emu.technique = "ec";
        emu.setKey("left", "up", true, 0);
        expect(emu.value("left", 10)).toBeGreaterThan(0);
        expect(emu.value("left", CADENCE_WINDOW_MS + 100)).toBe(0);
    });
});

describe("bindings", () => {
    it("covers both hands in both directions", () => {
        const entries = Object.values(KEY_BINDINGS);
        const pairs = new Set(entries.map((b) => `${b.hand}:${b.direction}`));
        expect(pairs).toEqual(
            new Set(["left:up", "left:down", "right:up", "right:down"]),
        );
    });

    it("releaseAll zeroes every source", () => {
        const emu = new InputEmulator();
        emu.setKey("left", "up", true, 0);
        emu.setAnalog("right", 0.7);
        emu.releaseAll();
        expect(emu.commands(0)).toEqual({ left: 0, right: 0 });
    });
});
