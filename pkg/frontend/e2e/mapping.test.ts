/**
 * Human-in-the-loop mapping, headless: a scripted "driver" presses the
 * console's real keys, the shaped commands flow over the real WebSocket
 * protocol, and the live simulator maps the room. The composited
 * client-side grid must match the known wall rasterization.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import type { ChildProcess } from "node:child_process";

import { InputShaper } from "../src/input.js";
import { TeleopClient } from "../src/net.js";
import { CLASS_OCCUPIED } from "../src/protocol.js";
import { ViewModel } from "../src/view.js";
import {
  GRID, ROOM_WALLS, nodeSocketFactory, pickPort, sleep, spawnSim,
  waitForServer, wrapAngle, writeFixtures,
} from "./harness.js";

let sim: ChildProcess;
let port: number;

beforeAll(async () => {
  const { scenario } = writeFixtures();
  port = pickPort();
  sim = spawnSim(scenario, port);
  await waitForServer(port);
}, 60000);

afterAll(() => {
  sim?.kill("SIGTERM");
});

function rasterizedWallCells(): Set<string> {
  const cells = new Set<string>();
  const res = GRID.resolution;
  for (const [x1, y1, x2, y2] of ROOM_WALLS) {
    const length = Math.hypot(x2 - x1, y2 - y1);
    const n = Math.ceil(length / (res / 4));
    for (let i = 0; i <= n; i++) {
      const t = i / n;
      const ix = Math.floor((x1 + t * (x2 - x1) - GRID.origin[0]) / res);
      const iy = Math.floor((y1 + t * (y2 - y1) - GRID.origin[1]) / res);
      cells.add(`${ix},${iy}`);
    }
  }
  return cells;
}

/** Bang-bang keyboard driver steering toward the tour corners. */
class KeyboardTourDriver {
  private corners: [number, number][] = [
    [2.8, 0.0], [2.8, 2.8], [-2.8, 2.8], [-2.8, -2.8], [2.8, -2.8],
  ];
  private target = 0;
  cornersVisited = 0;

  drive(input: InputShaper, x: number, y: number, yaw: number,
        speed: number): void {
    const [tx, ty] = this.corners[this.target];
    if (Math.hypot(tx - x, ty - y) < 0.9) {
      this.target = (this.target + 1) % this.corners.length;
      this.cornersVisited += 1;
      return;
    }
    const heading = Math.atan2(ty - y, tx - x);
    const err = wrapAngle(heading - yaw);
    input.keyUp("KeyA");
    input.keyUp("KeyD");
    if (err > 0.12) input.keyDown("KeyA");
    else if (err < -0.12) input.keyDown("KeyD");
    if (speed < 1.5) input.keyDown("KeyW");
    else input.keyUp("KeyW");
  }
}

describe("keyboard-driven mapping through the console pipeline", () => {
  it("touring the room by key presses reaches wall IoU >= 0.9", async () => {
    const view = new ViewModel();
    const input = new InputShaper();
    const client = new TeleopClient(`ws://127.0.0.1:${port}/sim`, view, input, {
      socketFactory: nodeSocketFactory,
    });
    client.connect();
    const authDeadline = Date.now() + 10000;
    while (!view.authority && Date.now() < authDeadline) await sleep(50);
    expect(view.authority).toBe(true);

    const driver = new KeyboardTourDriver();
    const tourDeadline = Date.now() + 120000;
    let lastTick = Date.now();
    while (Date.now() < tourDeadline && driver.cornersVisited < 7) {
      const now = Date.now();
      const dt = Math.min(0.2, (now - lastTick) / 1000);
      lastTick = now;
      const s = view.state;
      if (s) driver.drive(input, s.pose.x, s.pose.y, s.pose.yaw, s.speed);
      input.update(dt);
      client.pump();
      await sleep(25);
    }
    expect(driver.cornersVisited).toBeGreaterThanOrEqual(7);
    client.sendZeroNow();

    // make sure the composite is complete, then score it
    view.needsSnapshot = true;
    await sleep(500);
    client.pump();
    await sleep(1000);
    expect(view.gridInfo).not.toBeNull();
    const [gw] = view.gridInfo!.size;
    const occupied = new Set<string>();
    view.cells.forEach((cls, idx) => {
      if (cls === CLASS_OCCUPIED) {
        occupied.add(`${idx % gw},${Math.floor(idx / gw)}`);
      }
    });
    const raster = rasterizedWallCells();
    let intersection = 0;
    for (const key of occupied) if (raster.has(key)) intersection += 1;
    const union = occupied.size + raster.size - intersection;
    const iou = intersection / union;
    expect(iou).toBeGreaterThanOrEqual(0.9);
  }, 170000);
});
