// Canvas renderer: top-down course view with the camera tracking the boat,
// plus the twin paddle dials and HUD. Everything scales from meters.

import { canvasArc, formatAngle, inWaterArc, needlePoint } from "./dials.js";
import type { Pose } from "./interpolation.js";
import type { SessionInfo, StateMessage, TrackInfo } from "./protocol.js";

const COLORS = {
    water: "#0e3a5c",
    waterEdge: "#0a2c46",
    laneLine: "rgba(255,255,255,0.25)",
    buoy: "#ffb703",
    start: "#3fb950",
    finish: "#e5534b",
    barrier: "#6e4d27",
    barrierEdge: "#3d2a14",
    hull: "#f2cc60",
    hullEdge: "#8d6f2f",
    text: "#e6edf3",
    dialFace: "#12263a",
    dialRim: "#3d5a80",
    dialWater: "rgba(64,160,255,0.35)",
    dialWaterWet: "rgba(64,160,255,0.8)",
    needle: "#ff5d5d",
    banner: "rgba(0,0,0,0.55)",
};

const VIEW_WIDTH_M = 140; // meters of course shown across the canvas

export interface Scene {
    config: SessionInfo | null;
    snapshot: StateMessage | null;
    pose: Pose | null;
    connected: boolean;
    stale: boolean;
    completionTime: number | null;
}

export function render(ctx: CanvasRenderingContext2D, scene: Scene): void {
    const { width, height } = ctx.canvas;
    ctx.fillStyle = COLORS.water;
    ctx.fillRect(0, 0, width, height);
    if (scene.config === null || scene.snapshot === null || scene.pose === null) {
        drawCenteredBanner(ctx, "waiting for server state…");
        return;
    }
    const track = scene.config.track;
    const scale = width / VIEW_WIDTH_M;
    const camX = scene.pose.x;

    const toScreen = (x: number, y: number): [number, number] => [
        width / 2 + (x - camX) * scale,
        height / 2 - y * scale,
    ];

    drawCourse(ctx, track, toScreen, scale, camX);
    drawBoat(ctx, scene, toScreen, scale);
    drawHud(ctx, scene);
    drawDials(ctx, scene);
    if (scene.stale) {
        drawBadge(ctx, width / 2, 24, "stale data: no fresh snapshots");
    }
    if (!scene.connected) {
        drawCenteredBanner(ctx, "disconnected — reconnecting…");
    }
    if (scene.completionTime !== null) {
        drawResultCard(ctx, scene.completionTime);
    }
}

function drawCourse(
    ctx: CanvasRenderingContext2D,
    track: TrackInfo,
    toScreen: (x: number, y: number) => [number, number],
    scale: number,
    camX: number,
): void {
    const xMin = camX - VIEW_WIDTH_M / 2 - 10;
    const xMax = camX + VIEW_WIDTH_M / 2 + 10;
    const half = track.lane_width / 2;
    const laneLines: number[] = [];
    for (let i = 0; i <= track.lane_count; i++) {
        laneLines.push(-half + i * track.lane_width);
    }
    ctx.lineWidth = 1;
    ctx.strokeStyle = COLORS.laneLine;
    for (const y of laneLines) {
        const [x0, sy] = toScreen(xMin, y);
        const [x1] = toScreen(xMax, y);
        ctx.beginPath();
        ctx.moveTo(x0, sy);
        ctx.lineTo(x1, sy);
        ctx.stroke();
    }
    // buoys every spacing along each lane line
    ctx.fillStyle = COLORS.buoy;
    const firstStation = Math.max(
        0,
        Math.ceil((xMin - track.start_x) / track.buoy_spacing),
    );
    const lastStation = Math.min(
        Math.round(track.length / track.buoy_spacing),
        Math.floor((xMax - track.start_x) / track.buoy_spacing),
    );
    for (let s = firstStation; s <= lastStation; s++) {
        const bx = track.start_x + s * track.buoy_spacing;
        for (const y of laneLines) {
            const [sx, sy] = toScreen(bx, y);
            ctx.beginPath();
            ctx.arc(sx, sy, Math.max(2, 0.4 * scale), 0, 2 * Math.PI);
            ctx.fill();
        }
    }
    drawGateLine(ctx, track.start_x, COLORS.start, toScreen, laneLines);
    drawGateLine(ctx, track.start_x + track.length, COLORS.finish, toScreen, laneLines);
    ctx.fillStyle = COLORS.barrier;
    ctx.strokeStyle = COLORS.barrierEdge;
    for (const b of track.barriers) {
        const [lo, hi] = b.blocked_span;
        const [sx0, sy0] = toScreen(b.x - b.thickness / 2, hi);
        const [sx1, sy1] = toScreen(b.x + b.thickness / 2, lo);
        ctx.fillRect(sx0, sy0, Math.max(2, sx1 - sx0), sy1 - sy0);
        ctx.strokeRect(sx0, sy0, Math.max(2, sx1 - sx0), sy1 - sy0);
    }
}

function drawGateLine(
    ctx: CanvasRenderingContext2D,
    x: number,
    color: string,
    toScreen: (x: number, y: number) => [number, number],
    laneLines: number[],
): void {
    const yLo = laneLines[0];
    const yHi = laneLines[laneLines.length - 1];
    const [sx, sy0] = toScreen(x, yHi);
    const [, sy1] = toScreen(x, yLo);
    ctx.strokeStyle = color;
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(sx, sy0);
    ctx.lineTo(sx, sy1);
    ctx.stroke();
    ctx.lineWidth = 1;
}

function drawBoat(
    ctx: CanvasRenderingContext2D,
    scene: Scene,
    toScreen: (x: number, y: number) => [number, number],
    scale: number,
): void {
    const pose = scene.pose!;
    const params = scene.config!.params;
    const len = params.boat_length ?? 12.5;
    const beam = 2 * (params.half_beam ?? 0.6);
    const [cx, cy] = toScreen(pose.x, pose.y);
    ctx.save();
    ctx.translate(cx, cy);
    ctx.rotate(-pose.heading); // screen y is flipped
    const l = (len / 2) * scale;
    const b = (beam / 2) * scale;
    ctx.beginPath();
    ctx.moveTo(l, 0); // bow point
    ctx.lineTo(l * 0.55, -b);
    ctx.lineTo(-l, -b);
    ctx.lineTo(-l, b);
    ctx.lineTo(l * 0.55, b);
    ctx.closePath();
    ctx.fillStyle = COLORS.hull;
    ctx.strokeStyle = COLORS.hullEdge;
    ctx.fill();
    ctx.stroke();
    ctx.restore();
}

function drawHud(ctx: CanvasRenderingContext2D, scene: Scene): void {
    const s = scene.snapshot!;
    const { width } = ctx.canvas;
    ctx.fillStyle = COLORS.banner;
    ctx.fillRect(0, 0, width, 30);
    ctx.fillStyle = COLORS.text;
    ctx.font = "14px system-ui, sans-serif";
    ctx.textBaseline = "middle";
    ctx.textAlign = "left";
    ctx.fillText(`phase: ${s.phase}`, 10, 15);
    ctx.textAlign = "center";
    ctx.fillText(`${s.remaining.toFixed(1)} m to go`, width / 2, 15);
    ctx.textAlign = "right";
    ctx.fillText(`${s.v.toFixed(2)} m/s  t=${s.t.toFixed(1)} s`, width - 10, 15);
}

function drawDials(ctx: CanvasRenderingContext2D, scene: Scene): void {
    const s = scene.snapshot!;
    const { width, height } = ctx.canvas;
    const radius = 54;
    const margin = 18;
    drawDial(ctx, margin + radius, height - margin - radius, radius, "L",
        s.left.angle, s.left.wet);
    drawDial(ctx, width - margin - radius, height - margin - radius, radius, "R",
        s.right.angle, s.right.wet);
}

function drawDial(
    ctx: CanvasRenderingContext2D,
    cx: number,
    cy: number,
    radius: number,
    label: string,
    angle: number,
    wet: boolean,
): void {
    ctx.beginPath();
    ctx.arc(cx, cy, radius, 0, 2 * Math.PI);
    ctx.fillStyle = COLORS.dialFace;
    ctx.fill();
    ctx.strokeStyle = COLORS.dialRim;
    ctx.lineWidth = 2;
    ctx.stroke();
    // submerged sector (290-360 and 0-70), brighter while the blade is wet
    ctx.fillStyle = wet ? COLORS.dialWaterWet : COLORS.dialWater;
    for (const [lo, hi] of [[290, 360], [0, 70]] as const) {
        const arc = canvasArc(lo, hi);
        ctx.beginPath();
        ctx.moveTo(cx, cy);
        ctx.arc(cx, cy, radius - 3, arc.start, arc.end, arc.anticlockwise);
        ctx.closePath();
        ctx.fill();
    }
    const tip = needlePoint(angle, radius - 8);
    ctx.strokeStyle = COLORS.needle;
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(cx + tip.x, cy + tip.y);
    ctx.stroke();
    ctx.lineWidth = 1;
    ctx.fillStyle = COLORS.text;
    ctx.font = "12px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(label, cx, cy - radius - 10);
    ctx.fillText(formatAngle(angle), cx, cy + radius + 12);
}

function drawCenteredBanner(ctx: CanvasRenderingContext2D, text: string): void {
    const { width, height } = ctx.canvas;
    ctx.fillStyle = COLORS.banner;
    ctx.fillRect(0, height / 2 - 24, width, 48);
    ctx.fillStyle = COLORS.text;
    ctx.font = "16px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(text, width / 2, height / 2);
}

function drawBadge(
    ctx: CanvasRenderingContext2D,
    cx: number,
    cy: number,
    text: string,
): void {
    ctx.font = "13px system-ui, sans-serif";
    const w = ctx.measureText(text).width + 16;
    ctx.fillStyle = "#b4231f";
    ctx.fillRect(cx - w / 2, cy + 8, w, 22);
    ctx.fillStyle = COLORS.text;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(text, cx, cy + 19);
}

function drawResultCard(ctx: CanvasRenderingContext2D, completionTime: number): void {
    const { width, height } = ctx.canvas;
    const w = 320;
    const h = 90;
    const x = (width - w) / 2;
    const y = (height - h) / 2;
    ctx.fillStyle = "rgba(10,20,30,0.92)";
    ctx.fillRect(x, y, w, h);
    ctx.strokeStyle = COLORS.dialRim;
    ctx.strokeRect(x, y, w, h);
    ctx.fillStyle = COLORS.text;
    ctx.textAlign = "center";
    ctx.font = "16px system-ui, sans-serif";
    ctx.fillText("race finished", width / 2, y + 28);
    ctx.font = "26px system-ui, sans-serif";
    ctx.fillText(`${completionTime.toFixed(2)} s`, width / 2, y + 62);
}
