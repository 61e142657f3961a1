// Message schema of the race-server websocket: JSON text both ways.

export type Technique = "jc" | "ic" | "ec";
export type Hand = "left" | "right";

export interface PaddleView {
    angle: number;
    omega: number;
    wet: boolean;
}

export interface StateMessage {
    type: "state";
    tick: number;
    t: number;
    x: number;
    y: number;
    heading: number;
    v: number;
    yaw_rate: number;
    dist: number;
    remaining: number;
    phase: string;
    left: PaddleView;
    right: PaddleView;
    resist: { left: boolean; right: boolean };
}

export interface BarrierInfo {
    x: number;
    blocked_span: [number, number];
    thickness: number;
}

export interface TrackInfo {
    name: string;
    length: number;
    lane_count: number;
    lane_width: number;
    buoy_spacing: number;
    start_x: number;
    barriers: BarrierInfo[];
}

export interface SessionInfo {
    technique: Technique;
    track: TrackInfo;
    params: { boat_length: number; half_beam: number; [k: string]: number };
}

export interface HelloMessage {
    type: "hello";
    config: SessionInfo;
    state: StateMessage;
}

export interface PhaseMessage {
    type: "phase";
    value: string;
}

export interface ResultMessage {
    type: "result";
    completion_time: number | null;
}

export interface ErrorMessage {
    type: "error";
    message: string;
}

export type ServerMessage =
    | HelloMessage
    | StateMessage
    | PhaseMessage
    | ResultMessage
    | ErrorMessage;

const KNOWN_TYPES = new Set(["hello", "state", "phase", "result", "error"]);

function isPaddleView(v: unknown): v is PaddleView {
    if (typeof v !== "object" || v === null) return false;
    const p = v as Record<string, unknown>;
    return (
        typeof p.angle === "number" &&
        typeof p.omega === "number" &&
        typeof p.wet === "boolean"
    );
}

export function isStateMessage(v: unknown): v is StateMessage {
    if (typeof v !== "object" || v === null) return false;
    const m = v as Record<string, unknown>;
    return (
        m.type === "state" &&
        typeof m.tick === "number" &&
        typeof m.t === "number" &&
        typeof m.x === "number" &&
        typeof m.y === "number" &&
        typeof m.heading === "number" &&
        typeof m.remaining === "number" &&
        typeof m.phase === "string" &&
        isPaddleView(m.left) &&
        isPaddleView(m.right)
    );
}

export function parseServerMessage(raw: string): ServerMessage | null {
    let data: unknown;
    try {
        data = JSON.parse(raw);
    } catch {
        return null;
    }
    if (typeof data !== "object" || data === null) return null;
    const m = data as Record<string, unknown>;
    if (typeof m.type !== "string" || !KNOWN_TYPES.has(m.type)) return null;
    if (m.type === "state" && !isStateMessage(m)) return null;
    if (m.type === "hello") {
        const h = m as unknown as HelloMessage;
        if (!h.config || !h.config.track || !isStateMessage(h.state)) return null;
    }
    return m as unknown as ServerMessage;
}

export function inputMessage(
    technique: Technique,
    left: number,
    right: number,
    t: number,
): string {
    return JSON.stringify({ type: "input", technique, left, right, t });
}

export type SessionEvent =
    | "calibrate_done"
    | "race_requested"
    | "reset_position"
    | "reset";

export function eventMessage(name: SessionEvent): string {
    return JSON.stringify({ type: "event", name });
}
