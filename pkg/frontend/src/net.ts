/**
 * Teleop session: socket lifecycle, authority, and the command pump.
 *
 * Commands go out on a fixed pump (20 Hz) while any input is active;
 * blur or visibility loss sends an immediate zero command without
 * waiting for the next pump tick. Reconnection backs off exponentially
 * and resyncs the grid through a full-snapshot request.
 */

import { InputShaper } from "./input.js";
import {
  CommandMessage,
  isAuthorityReply,
  isStateMessage,
  parseServerFrame,
  zeroCommand,
} from "./protocol.js";
import { ViewModel } from "./view.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientOptions {
  socketFactory: SocketFactory;
  pumpHz?: number; // command rate while driving (<= 25 per the contract)
  pingIntervalMs?: number; // idle heartbeat
  reconnectBaseMs?: number;
  reconnectMaxMs?: number;
  now?: () => number;
}

export class TeleopClient {
  readonly view: ViewModel;
  readonly input: InputShaper;

  sent: number = 0;
  private socket: SocketLike | null = null;
  private seq = 0;
  private lastSendMs = -Infinity;
  private lastPingMs = -Infinity;
  private lastWasZero = true;
  private backoffMs: number;
  private readonly minSendGapMs: number;
  private readonly pingIntervalMs: number;
  private readonly now: () => number;
  reconnectDelayMs = 0; // next scheduled backoff, 0 when none pending

  constructor(
    private url: string,
    view: ViewModel,
    input: InputShaper,
    private opts: ClientOptions,
  ) {
    this.view = view;
    this.input = input;
    const hz = opts.pumpHz ?? 20;
    this.minSendGapMs = 1000 / Math.min(hz, 25);
    this.pingIntervalMs = opts.pingIntervalMs ?? 250;
    this.backoffMs = opts.reconnectBaseMs ?? 500;
    this.now = opts.now ?? (() => Date.now());
  }

  connect(): void {
    this.view.connection = "connecting";
    const socket = this.opts.socketFactory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.view.connection = "connected";
      this.view.resetSequence();
      this.backoffMs = this.opts.reconnectBaseMs ?? 500;
      this.reconnectDelayMs = 0;
      socket.send(JSON.stringify({ type: "authority", action: "request" }));
    };
    socket.onmessage = (event) => this.handleFrame(event.data);
    socket.onclose = () => this.handleClose();
    socket.onerror = () => {
      /* close follows */
    };
  }

  /** Schedule the reconnect; the caller's timer invokes connect(). */
  private handleClose(): void {
    this.socket = null;
    this.view.connection = "disconnected";
    this.view.authority = false;
    this.input.zero();
    this.reconnectDelayMs = this.backoffMs;
    this.backoffMs = Math.min(
      this.backoffMs * 1.5,
      this.opts.reconnectMaxMs ?? 10_000,
    );
  }

  private handleFrame(text: string): void {
    const frame = parseServerFrame(text);
    if (!frame) return;
    if (isStateMessage(frame)) {
      this.view.applyState(frame);
      if (this.view.takeSnapshotRequest() && this.socket) {
        this.socket.send(JSON.stringify({ type: "snapshot" }));
      }
      return;
    }
    if (isAuthorityReply(frame)) {
      this.view.authority = frame.granted;
      this.view.viewOnly = !frame.granted;
      if (!frame.granted) this.input.zero();
      return;
    }
    if (frame.type === "error") {
      this.view.lastError = frame.reason;
    }
  }

  /**
   * Command pump; call at the UI tick rate. Sends at most every
   * 1/pumpHz ms while input is active (or one trailing zero), and keeps
   * an idle heartbeat so the server-side failsafe knows we are alive.
   */
  pump(): void {
    if (!this.socket || this.view.connection !== "connected") return;
    const t = this.now();
    if (!this.view.authority) return;

    const active = this.input.anyActive();
    if (active || !this.lastWasZero) {
      if (t - this.lastSendMs >= this.minSendGapMs) {
        this.sendCommand();
        this.lastSendMs = t;
      }
    } else if (t - this.lastPingMs >= this.pingIntervalMs) {
      this.socket.send(JSON.stringify({ type: "ping" }));
      this.lastPingMs = t;
    }
  }

  /** Immediate zero command: blur, tab hidden, or shutdown. */
  sendZeroNow(): void {
    this.input.zero();
    if (!this.socket || this.view.connection !== "connected") return;
    if (!this.view.authority) return;
    const cmd = zeroCommand(this.seq++);
    this.socket.send(JSON.stringify(cmd));
    this.sent += 1;
    this.lastWasZero = true;
    this.lastSendMs = this.now();
  }

  requestMode(mode: string): void {
    this.socket?.send(JSON.stringify({ type: "mode", mode }));
  }

  private sendCommand(): void {
    if (!this.socket) return;
    const toggles = this.input.takeRecordToggles();
    const record =
      toggles === 0
        ? "none"
        : this.view.state?.recording
          ? "stop"
          : "start";
    const cmd: CommandMessage = {
      type: "command",
      seq: this.seq++,
      throttle: round3(this.input.throttle),
      steering: round3(this.input.steering),
      brake: round3(this.input.brake),
      handbrake: this.input.handbrake,
      record,
    };
    this.socket.send(JSON.stringify(cmd));
    this.sent += 1;
    this.lastWasZero =
      cmd.throttle === 0 && cmd.steering === 0 && cmd.brake === 0 &&
      !cmd.handbrake && record === "none";
  }
}

function round3(v: number): number {
  return Math.round(v * 1000) / 1000;
}
