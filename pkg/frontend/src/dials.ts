// Paddle-dial geometry: blade angle convention is degrees in [0, 360),
// anticlockwise positive, with the in-water sector at 290-360 and 0-70
// (half-open intervals, mirroring the server's zone convention).

export const IN_WATER_ARCS: ReadonlyArray<readonly [number, number]> = [
    [290, 360],
    [0, 70],
];

export function inWaterArc(angleDeg: number): boolean {
    for (const [lo, hi] of IN_WATER_ARCS) {
        if (lo <= angleDeg && angleDeg < hi) return true;
    }
    return false;
}

export interface Point {
    x: number;
    y: number;
}

/**
 * Needle tip offset for a dial of the given radius, in screen coordinates
 * (y grows downward): 0 degrees points right, rotation is anticlockwise.
 */
export function needlePoint(angleDeg: number, radius: number): Point {
    const rad = (angleDeg * Math.PI) / 180;
    return { x: radius * Math.cos(rad), y: -radius * Math.sin(rad) };
}

/** Canvas arc parameters for a blade-angle interval (canvas is clockwise). */
export function canvasArc(
    loDeg: number,
    hiDeg: number,
): { start: number; end: number; anticlockwise: boolean } {
    return {
        start: (-loDeg * Math.PI) / 180,
        end: (-hiDeg * Math.PI) / 180,
        anticlockwise: true,
    };
}

export function formatAngle(angleDeg: number): string {
    return `${angleDeg.toFixed(1)}°`;
}
