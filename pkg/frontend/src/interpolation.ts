// Two-snapshot interpolation buffer: the boat pose renders smoothly at
// 60 FPS from 20 Hz server snapshots, while dial readings always come from
// the newest snapshot untouched (the server is the only authority on
// paddle angles; the client never predicts them).

import type { Hand, StateMessage } from "./protocol.js";

export interface Pose {
    x: number;
    y: number;
    heading: number;
}

export const STALE_THRESHOLD_MS = 500;
const DEFAULT_INTERVAL_MS = 50; // 20 Hz broadcast cadence

function lerpAngle(a: number, b: number, alpha: number): number {
    let d = b - a;
    while (d > Math.PI) d -= 2 * Math.PI;
    while (d < -Math.PI) d += 2 * Math.PI;
    return a + d * alpha;
}

export class SnapshotBuffer {
    private prev: StateMessage | null = null;
    private latest: StateMessage | null = null;
    private latestArrivalMs = -Infinity;
    private intervalMs = DEFAULT_INTERVAL_MS;

    /** Accepts a snapshot; stale or duplicate ticks are dropped. */
    push(snapshot: StateMessage, nowMs: number): boolean {
        if (this.latest !== null && snapshot.tick <= this.latest.tick) {
            return false;
        }
        if (this.latest !== null) {
            const gap = nowMs - this.latestArrivalMs;
            if (gap > 1 && gap < 1000) this.intervalMs = gap;
        }
        this.prev = this.latest;
        this.latest = snapshot;
        this.latestArrivalMs = nowMs;
        return true;
    }

    get current(): StateMessage | null {
        return this.latest;
    }

    ageMs(nowMs: number): number {
        return nowMs - this.latestArrivalMs;
    }

    isStale(nowMs: number, thresholdMs: number = STALE_THRESHOLD_MS): boolean {
        return this.latest !== null && this.ageMs(nowMs) > thresholdMs;
    }

    /**
     * Rendered pose, one broadcast interval behind the newest snapshot so
     * there is always a segment to interpolate across.
     */
    pose(nowMs: number): Pose | null {
        if (this.latest === null) return null;
        if (this.prev === null) {
            return {
                x: this.latest.x,
                y: this.latest.y,
                heading: this.latest.heading,
            };
        }
        let alpha = (nowMs - this.latestArrivalMs) / this.intervalMs;
        if (alpha < 0) alpha = 0;
        if (alpha > 1) alpha = 1;
        return {
            x: this.prev.x + (this.latest.x - this.prev.x) * alpha,
            y: this.prev.y + (this.latest.y - this.prev.y) * alpha,
            heading: lerpAngle(this.prev.heading, this.latest.heading, alpha),
        };
    }

    /** Exact server-reported paddle angle; never interpolated. */
    dialAngle(side: Hand): number | null {
        return this.latest === null ? null : this.latest[side].angle;
    }
}
