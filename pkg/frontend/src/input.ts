// Keyboard/gamepad emulation of the three paddling techniques.
//
// Whatever the source, the emulator produces one technique-native value per
// hand: stick deflection in [-1, 1] for jc, controller pitch rate (deg/s)
// for ic, commanded handle rate (deg/s) for ec. The ec keyboard emulation
// converts tapping cadence into a crank rate, so sustained effort (not a
// held key) is what keeps the handles spinning.

import type { Hand, Technique } from "./protocol.js";

export const IC_PITCH_RATE = 126; // deg/s while fully deflected
export const EC_DEG_PER_TAP = 120; // cadence-to-rate conversion
export const EC_OMEGA_CAP = 400; // deg/s
export const CADENCE_WINDOW_MS = 1000;

export class CadenceTracker {
    private taps: number[] = [];

    tap(nowMs: number): void {
        this.taps.push(nowMs);
    }

    /** Taps per second over the sliding window. */
    rate(nowMs: number): number {
        while (this.taps.length > 0 && nowMs - this.taps[0] > CADENCE_WINDOW_MS) {
            this.taps.shift();
        }
        return (this.taps.length * 1000) / CADENCE_WINDOW_MS;
    }
}

interface HandState {
    up: boolean;
    down: boolean;
    analog: number | null; // gamepad stick/trigger, overrides keys when set
    forward: CadenceTracker;
    backward: CadenceTracker;
}

function newHand(): HandState {
    return {
        up: false,
        down: false,
        analog: null,
        forward: new CadenceTracker(),
        backward: new CadenceTracker(),
    };
}

export class InputEmulator {
    technique: Technique = "jc";
    private hands: Record<Hand, HandState> = {
        left: newHand(),
        right: newHand(),
    };

    /**
     * Digital key transition for one hand. For ec, each press edge counts
     * as one crank tap (up = forward, down = backward); for jc/ic the held
     * state is what matters.
     */
    setKey(hand: Hand, direction: "up" | "down", pressed: boolean, nowMs: number): void {
        const h = this.hands[hand];
        const was = h[direction];
        h[direction] = pressed;
        if (this.technique === "ec" && pressed && !was) {
            (direction === "up" ? h.forward : h.backward).tap(nowMs);
        }
    }

    /** Analog deflection in [-1, 1] from a gamepad, or null when released. */
    setAnalog(hand: Hand, value: number | null): void {
        if (value !== null) {
            value = Math.max(-1, Math.min(1, value));
        }
        this.hands[hand].analog = value;
    }

    private deflection(h: HandState): number {
        if (h.analog !== null) return h.analog;
        return (h.up ? 1 : 0) - (h.down ? 1 : 0);
    }

    /** Technique-native command value for one hand. */
    value(hand: Hand, nowMs: number): number {
        const h = this.hands[hand];
        switch (this.technique) {
            case "jc":
                return this.deflection(h);
            case "ic":
                return this.deflection(h) * IC_PITCH_RATE;
            case "ec": {
                if (h.analog !== null) return h.analog * EC_OMEGA_CAP;
                const net =
                    (h.forward.rate(nowMs) - h.backward.rate(nowMs)) * EC_DEG_PER_TAP;
                return Math.max(-EC_OMEGA_CAP, Math.min(EC_OMEGA_CAP, net));
            }
        }
    }

    commands(nowMs: number): { left: number; right: number } {
        return {
            left: this.value("left", nowMs),
            right: this.value("right", nowMs),
        };
    }

    releaseAll(): void {
        for (const hand of ["left", "right"] as Hand[]) {
            const h = this.hands[hand];
            h.up = false;
            h.down = false;
            h.analog = null;
        }
    }
}

/** Default keyboard bindings: left hand W/S, right hand arrow keys. */
export const KEY_BINDINGS: Record<string, { hand: Hand; direction: "up" | "down" }> = {
    KeyW: { hand: "left", direction: "up" },
    KeyS: { hand: "left", direction: "down" },
    ArrowUp: { hand: "right", direction: "up" },
    ArrowDown: { hand: "right", direction: "down" },
};
