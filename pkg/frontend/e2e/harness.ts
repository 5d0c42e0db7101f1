/** Shared plumbing for end-to-end tests against a live simulator. */

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import WebSocket from "ws";

import { SocketLike } from "../src/net.js";

export const ROOM_WALLS: [number, number, number, number][] = [
  [-5, -5, 5, -5],
  [5, -5, 5, 5],
  [5, 5, -5, 5],
  [-5, 5, -5, -5],
];
export const GRID = { width: 112, height: 112, resolution: 0.1,
                      origin: [-5.55, -5.55] as [number, number] };

export function writeFixtures(): { dir: string; scenario: string } {
  const dir = mkdtempSync(join(tmpdir(), "twinforge-e2e-"));
  const world = [
    "BOUNDS -6 -6 6 6",
    ...ROOM_WALLS.map((w) => `WALL ${w[0]} ${w[1]} ${w[2]} ${w[3]} 1.0`),
    "",
  ].join("\n");
  writeFileSync(join(dir, "room.world"), world);
  const scenario = {
    world: "room.world",
    vehicle: "f1tenth",
    mode: "sim",
    dt: 0.01,
    duration: 600.0,
    seed: 5,
    out_dir: join(dir, "out"),
    grid: GRID,
    lidar: {
      range_min: 0.1, range_max: 14.0, angle_min_deg: -180.0,
      angle_max_deg: 179.5, angle_res_deg: 0.5, rate: 10.0,
      mount: [0.0, 0.0, 0.2, 0.0],
    },
  };
  const scenarioPath = join(dir, "scenario.json");
  writeFileSync(scenarioPath, JSON.stringify(scenario));
  return { dir, scenario: scenarioPath };
}

export function spawnSim(scenario: string, port: number): ChildProcess {
  const child = spawn(
    "python3",
    ["-m", "twinforge.simcli.cli", "serve", "--scenario", scenario,
     "--port", String(port), "--authority-timeout-ms", "500"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  child.stderr?.on("data", () => { /* keep the pipe drained */ });
  child.stdout?.on("data", () => { /* keep the pipe drained */ });
  return child;
}

export function pickPort(): number {
  return 8800 + Math.floor(Math.random() * 800);
}

/** Adapt the `ws` client to the browser-style SocketLike surface. */
export function nodeSocketFactory(url: string): SocketLike {
  const socket = new WebSocket(url);
  const like: SocketLike = {
    send: (data: string) => socket.send(data),
    close: () => socket.close(),
    onopen: null,
    onclose: null,
    onerror: null,
    onmessage: null,
  };
  socket.on("open", () => like.onopen?.());
  socket.on("close", () => like.onclose?.());
  socket.on("error", () => like.onerror?.());
  socket.on("message", (data) => like.onmessage?.({ data: data.toString() }));
  return like;
}

export async function waitForServer(port: number, timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    const ok = await new Promise<boolean>((resolve) => {
      const probe = new WebSocket(`ws://127.0.0.1:${port}/sim`);
      probe.on("open", () => {
        probe.close();
        resolve(true);
      });
      probe.on("error", () => resolve(false));
    });
    if (ok) return;
    await sleep(250);
  }
  throw new Error("simulator did not come up");
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export function wrapAngle(a: number): number {
  while (a > Math.PI) a -= 2 * Math.PI;
  while (a < -Math.PI) a += 2 * Math.PI;
  return a;
}
