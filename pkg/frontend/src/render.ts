/**
 * Top-down canvas rendering: grid classes (black walls, white free,
 * gray unknown), the vehicle triangle, the downsampled scan fan, the
 * recorded trajectory, and a text HUD. Pure in the view model: the same
 * model draws the same frame (the grid bitmap is memoized by version).
 */

import { CLASS_FREE, CLASS_OCCUPIED } from "./protocol.js";
import { ViewModel } from "./view.js";

const COLOR_UNKNOWN = 205;
const COLOR_FREE = 255;
const COLOR_OCCUPIED = 0;

export class Renderer {
  private gridBitmap: ImageData | null = null;
  private bitmapVersion = -1;

  render(ctx: CanvasRenderingContext2D, view: ViewModel, width: number,
         height: number): void {
    ctx.fillStyle = "#1b1b20";
    ctx.fillRect(0, 0, width, height);
    if (!view.gridInfo) {
      this.hud(ctx, view, width, height);
      return;
    }

    const [gw, gh] = view.gridInfo.size;
    const scale = Math.min(width / gw, height / gh);
    const ox = (width - gw * scale) / 2;
    const oy = (height - gh * scale) / 2;

    if (this.bitmapVersion !== view.gridVersion) {
      this.gridBitmap = this.buildBitmap(view, gw, gh);
      this.bitmapVersion = view.gridVersion;
    }
    if (this.gridBitmap) {
      // draw the cell bitmap through an offscreen canvas so it scales
      const off = document.createElement("canvas");
      off.width = gw;
      off.height = gh;
      off.getContext("2d")!.putImageData(this.gridBitmap, 0, 0);
      ctx.imageSmoothingEnabled = false;
      ctx.drawImage(off, ox, oy, gw * scale, gh * scale);
    }

    const toPx = (wx: number, wy: number): [number, number] => {
      const info = view.gridInfo!;
      const cx = (wx - info.origin[0]) / info.resolution;
      const cy = (wy - info.origin[1]) / info.resolution;
      return [ox + cx * scale, oy + (gh - cy) * scale];
    };

    if (view.trajectory.length > 1) {
      ctx.strokeStyle = "#38b24d";
      ctx.lineWidth = 2;
      ctx.beginPath();
      view.trajectory.forEach(([x, y], i) => {
        const [px, py] = toPx(x, y);
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      ctx.stroke();
    }

    const state = view.state;
    if (state) {
      const { x, y, yaw } = state.pose;
      // scan fan
      if (state.scan.length > 0) {
        ctx.strokeStyle = "rgba(231, 76, 60, 0.45)";
        ctx.lineWidth = 1;
        ctx.beginPath();
        const n = state.scan.length;
        for (let i = 0; i < n; i++) {
          const r = state.scan[i];
          if (r === null) continue;
          const ang = yaw - Math.PI + (2 * Math.PI * i) / n;
          const [sx, sy] = toPx(x, y);
          const [ex, ey] = toPx(x + r * Math.cos(ang), y + r * Math.sin(ang));
          ctx.moveTo(sx, sy);
          ctx.lineTo(ex, ey);
        }
        ctx.stroke();
      }
      // vehicle triangle
      const [px, py] = toPx(x, y);
      const size = Math.max(6, 0.35 / view.gridInfo.resolution * scale * 0.35);
      ctx.fillStyle = "#3498db";
      ctx.save();
      ctx.translate(px, py);
      ctx.rotate(-yaw);
      ctx.beginPath();
      ctx.moveTo(size, 0);
      ctx.lineTo(-size * 0.6, size * 0.5);
      ctx.lineTo(-size * 0.6, -size * 0.5);
      ctx.closePath();
      ctx.fill();
      ctx.restore();
    }
    this.hud(ctx, view, width, height);
  }

  private buildBitmap(view: ViewModel, gw: number, gh: number): ImageData {
    const img = new ImageData(gw, gh);
    for (let y = 0; y < gh; y++) {
      for (let x = 0; x < gw; x++) {
        const cls = view.cells[y * gw + x];
        const shade =
          cls === CLASS_OCCUPIED ? COLOR_OCCUPIED
          : cls === CLASS_FREE ? COLOR_FREE
          : COLOR_UNKNOWN;
        // image rows run top-down, grid rows bottom-up
        const o = ((gh - 1 - y) * gw + x) * 4;
        img.data[o] = img.data[o + 1] = img.data[o + 2] = shade;
        img.data[o + 3] = 255;
      }
    }
    return img;
  }

  private hud(ctx: CanvasRenderingContext2D, view: ViewModel, width: number,
              height: number): void {
    const s = view.state;
    const lines = [
      `conn: ${view.connection}${view.viewOnly ? " (view only)" : ""}`,
      s ? `speed: ${s.speed.toFixed(2)} m/s  gear: ${s.gear}` : "speed: -",
      s ? `mode: ${s.mode}  recording: ${s.recording ? "ON" : "off"}` : "",
      s && s.tracker === "terminated" ? "TERMINATED" : s?.tracker ?? "",
      s && s.safe_stop ? "SAFE STOP" : "",
      s && s.degraded ? "PEER DEGRADED" : "",
      view.lastError ? `error: ${view.lastError}` : "",
    ].filter((l) => l.length > 0);
    ctx.fillStyle = "rgba(0,0,0,0.55)";
    ctx.fillRect(8, 8, 250, 16 * lines.length + 10);
    ctx.fillStyle = "#eee";
    ctx.font = "13px monospace";
    lines.forEach((line, i) => ctx.fillText(line, 14, 24 + 16 * i));
  }
}
