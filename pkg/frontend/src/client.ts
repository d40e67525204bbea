// Session client: one WebSocket, one session, strictly sequenced commands.
// The socket is injected so tests (and node tooling) can supply their own
// implementation; the browser passes the native WebSocket.

import { Command, SequencedCommand, ServerEvent, encodeCommand, parseEvent } from "./protocol.js";

// Structural subset shared by browser WebSocket and the npm ws package.
export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open", listener: () => void): void;
  addEventListener(type: "close", listener: () => void): void;
  addEventListener(type: "error", listener: (err: unknown) => void): void;
  addEventListener(type: "message", listener: (ev: { data: unknown }) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionStatus = "connecting" | "open" | "reconnecting" | "closed";

export interface SessionClientOptions {
  url: string;
  playerId: string;
  socketFactory: SocketFactory;
  onEvent: (event: ServerEvent) => void;
  onStatus?: (status: ConnectionStatus) => void;
  onSend?: (frame: SequencedCommand) => void;
  reconnectDelayMs?: number;
  maxReconnects?: number;
}

export class SessionClient {
  private readonly opts: SessionClientOptions;
  private socket: SocketLike | null = null;
  private nextSeq = 1;
  private open = false;
  private closedByUser = false;
  private reconnects = 0;
  readonly sentFrames: SequencedCommand[] = [];

  constructor(opts: SessionClientOptions) {
    this.opts = opts;
  }

  get isOpen(): boolean {
    return this.open;
  }

  connect(): void {
    this.closedByUser = false;
    this.openSocket();
  }

  private status(s: ConnectionStatus): void {
    this.opts.onStatus?.(s);
  }

  private openSocket(): void {
    this.status(this.reconnects > 0 ? "reconnecting" : "connecting");
    const socket = this.opts.socketFactory(this.opts.url);
    this.socket = socket;
    socket.addEventListener("open", () => {
      if (this.socket !== socket) return;
      this.open = true;
      // Every connection is a fresh server session: seq restarts at 1 and
      // the first command must be join.
      this.nextSeq = 1;
      this.status("open");
      this.send({ type: "join", player_id: this.opts.playerId });
    });
    socket.addEventListener("message", (ev) => {
      if (this.socket !== socket) return;
      const event = parseEvent(String(ev.data));
      if (event !== null) this.opts.onEvent(event);
    });
    socket.addEventListener("error", () => {
      // close follows; nothing to do here.
    });
    socket.addEventListener("close", () => {
      if (this.socket !== socket) return;
      this.open = false;
      this.socket = null;
      if (this.closedByUser) {
        this.status("closed");
        return;
      }
      const max = this.opts.maxReconnects ?? Infinity;
      if (this.reconnects >= max) {
        this.status("closed");
        return;
      }
      this.reconnects += 1;
      this.status("reconnecting");
      setTimeout(() => {
        if (!this.closedByUser) this.openSocket();
      }, this.opts.reconnectDelayMs ?? 1000);
    });
  }

  // Assigns the next sequence number and ships the frame.  This is the only
  // place seq is touched, which is what keeps the stream gapless.
  send(cmd: Command): void {
    if (!this.open || this.socket === null) {
      throw new Error("not connected");
    }
    const frame: SequencedCommand = { ...cmd, seq: this.nextSeq };
    this.nextSeq += 1;
    this.sentFrames.push(frame);
    this.opts.onSend?.(frame);
    this.socket.send(encodeCommand(frame));
  }

  close(): void {
    this.closedByUser = true;
    this.socket?.close();
    this.socket = null;
    this.open = false;
    this.status("closed");
  }
}

// True when the frames carry 1, 2, 3, ... with no gaps.
export function seqsAreGapless(frames: { seq: number }[]): boolean {
  return frames.every((f, i) => f.seq === i + 1);
}
