/**
 * Client-side view model: the latest state frame, the composited
 * occupancy grid, and the growing trajectory polyline.
 *
 * Frames apply strictly in sequence order (stale frames are dropped,
 * so rendered seq never decreases) and a gap in the sequence marks the
 * grid as needing a full snapshot refresh.
 */

import {
  CLASS_UNKNOWN,
  GridInfo,
  StateMessage,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export class ViewModel {
  state: StateMessage | null = null;
  lastSeq = -1;
  connection: ConnectionStatus = "disconnected";
  authority = false;
  viewOnly = false;
  lastError = "";

  gridInfo: GridInfo | null = null;
  cells: Uint8Array = new Uint8Array(0);
  gridVersion = 0;

  trajectory: [number, number][] = [];
  needsSnapshot = false;

  /** Apply one state frame; false when the frame is stale. */
  applyState(msg: StateMessage): boolean {
    if (msg.seq <= this.lastSeq) return false;
    if (this.lastSeq >= 0 && msg.seq !== this.lastSeq + 1) {
      this.needsSnapshot = true; // missed frames: grid may have holes
    }
    this.lastSeq = msg.seq;
    this.state = msg;

    if (msg.grid_info) this.ensureGrid(msg.grid_info);
    if (msg.grid_patch && this.gridInfo) {
      const [w] = this.gridInfo.size;
      const p = msg.grid_patch;
      for (let r = 0; r < p.h; r++) {
        const rowBase = (p.y0 + r) * w + p.x0;
        for (let c = 0; c < p.w; c++) {
          this.cells[rowBase + c] = p.cells[r * p.w + c];
        }
      }
      this.gridVersion += 1;
    }

    if (msg.recording) {
      const last = this.trajectory[this.trajectory.length - 1];
      const dx = last ? msg.pose.x - last[0] : Infinity;
      const dy = last ? msg.pose.y - last[1] : Infinity;
      if (!last || dx * dx + dy * dy > 0.01) {
        this.trajectory.push([msg.pose.x, msg.pose.y]);
      }
    }
    return true;
  }

  takeSnapshotRequest(): boolean {
    const needed = this.needsSnapshot;
    this.needsSnapshot = false;
    return needed;
  }

  resetSequence(): void {
    // a reconnect restarts the server-side counter
    this.lastSeq = -1;
    this.needsSnapshot = true;
  }

  private ensureGrid(info: GridInfo): void {
    const [w, h] = info.size;
    if (
      !this.gridInfo ||
      this.gridInfo.size[0] !== w ||
      this.gridInfo.size[1] !== h
    ) {
      this.gridInfo = info;
      this.cells = new Uint8Array(w * h).fill(CLASS_UNKNOWN);
      this.gridVersion += 1;
    }
  }
}
