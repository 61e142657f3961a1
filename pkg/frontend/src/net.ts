// Thin websocket wrapper: parses server messages, reconnects with a fixed
// backoff, and leaves all game logic to the handlers.

import { parseServerMessage, type ServerMessage } from "./protocol.js";

export interface ConnectionHandlers {
    onMessage: (msg: ServerMessage) => void;
    onOpen?: () => void;
    onClose?: () => void;
}

const RECONNECT_DELAY_MS = 1000;

export class Connection {
    private ws: WebSocket | null = null;
    private closed = false;

    constructor(
        private readonly url: string,
        private readonly handlers: ConnectionHandlers,
    ) {}

    connect(): void {
        this.closed = false;
        this.open();
    }

    private open(): void {
        const ws = new WebSocket(this.url);
        this.ws = ws;
        ws.onopen = () => this.handlers.onOpen?.();
        ws.onmessage = (ev) => {
            const msg = parseServerMessage(String(ev.data));
            if (msg !== null) this.handlers.onMessage(msg);
        };
        ws.onclose = () => {
            this.ws = null;
            this.handlers.onClose?.();
            if (!this.closed) {
                setTimeout(() => this.open(), RECONNECT_DELAY_MS);
            }
        };
        ws.onerror = () => ws.close();
    }

    get isOpen(): boolean {
        return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
    }

    send(text: string): boolean {
        if (!this.isOpen) return false;
        this.ws!.send(text);
        return true;
    }

    close(): void {
        this.closed = true;
        this.ws?.close();
    }
}

/** Server address: explicit query parameter, else same host on port 8765. */
export function serverUrl(location: Location): string {
    const param = new URLSearchParams(location.search).get("server");
    if (param) return param;
    const host = location.hostname || "127.0.0.1";
    return `ws://${host}:8765`;
}
