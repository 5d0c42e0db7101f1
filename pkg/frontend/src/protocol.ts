/**
 * The bridge wire contract (JSON text frames over ws://host:port/sim).
 *
 * Server -> client: `state` frames at the streaming rate, plus
 * `authority`, `pong` and `error` replies. Client -> server: `command`,
 * `ping`, `authority`, `mode` and `snapshot`. Scan ranges use null for
 * misses (JSON has no infinity).
 */

export interface GridPatch {
  x0: number;
  y0: number;
  w: number;
  h: number;
  cells: number[];
}

export interface GridInfo {
  resolution: number;
  origin: [number, number];
  size: [number, number];
}

export interface StateMessage {
  type: "state";
  seq: number;
  sim_time: number;
  pose: { x: number; y: number; yaw: number };
  speed: number;
  gear: number;
  scan: (number | null)[];
  grid_patch: GridPatch | null;
  tracker: string | null;
  mode: string;
  recording: boolean;
  degraded: boolean;
  safe_stop: boolean;
  grid_info: GridInfo | null;
}

export interface CommandMessage {
  type: "command";
  seq: number;
  throttle: number;
  steering: number;
  brake: number;
  handbrake: boolean;
  record: "start" | "stop" | "none";
}

export interface AuthorityReply {
  type: "authority";
  granted: boolean;
}

export interface ErrorFrame {
  type: "error";
  reason: string;
}

export type ServerFrame =
  | StateMessage
  | AuthorityReply
  | ErrorFrame
  | { type: "pong" };

// occupancy cell classes as streamed in grid patches
export const CLASS_FREE = 0;
export const CLASS_OCCUPIED = 1;
export const CLASS_UNKNOWN = 2;

export function isStateMessage(v: unknown): v is StateMessage {
  const m = v as StateMessage;
  return (
    !!m &&
    m.type === "state" &&
    typeof m.seq === "number" &&
    !!m.pose &&
    typeof m.pose.x === "number" &&
    typeof m.pose.y === "number" &&
    typeof m.pose.yaw === "number" &&
    typeof m.speed === "number"
  );
}

export function isAuthorityReply(v: unknown): v is AuthorityReply {
  const m = v as AuthorityReply;
  return !!m && m.type === "authority" && typeof m.granted === "boolean";
}

export function parseServerFrame(text: string): ServerFrame | null {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch {
    return null;
  }
  const frame = parsed as { type?: string };
  if (!frame || typeof frame.type !== "string") return null;
  if (frame.type === "state" && !isStateMessage(parsed)) return null;
  return parsed as ServerFrame;
}

export function zeroCommand(seq: number): CommandMessage {
  return {
    type: "command",
    seq,
    throttle: 0,
    steering: 0,
    brake: 0,
    handbrake: false,
    record: "none",
  };
}

export function isZeroCommand(cmd: CommandMessage): boolean {
  return (
    cmd.throttle === 0 &&
    cmd.steering === 0 &&
    cmd.brake === 0 &&
    !cmd.handbrake
  );
}
