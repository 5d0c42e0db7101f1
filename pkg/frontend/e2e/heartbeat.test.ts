/**
 * End-to-end safety: a client that goes silent mid-drive must be
 * safe-stopped by the bridge within its heartbeat timeout.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import type { ChildProcess } from "node:child_process";

import { InputShaper } from "../src/input.js";
import { TeleopClient } from "../src/net.js";
import { StateMessage } from "../src/protocol.js";
import { ViewModel } from "../src/view.js";
import {
  nodeSocketFactory, pickPort, sleep, spawnSim, waitForServer, writeFixtures,
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

describe("heartbeat-expiry safe stop against a live sim", () => {
  it("silent client leads to safe_stop and the vehicle braking to rest", async () => {
    const view = new ViewModel();
    const input = new InputShaper();
    const client = new TeleopClient(`ws://127.0.0.1:${port}/sim`, view, input, {
      socketFactory: nodeSocketFactory,
    });
    client.connect();
    const deadline = Date.now() + 10000;
    while (!view.authority && Date.now() < deadline) await sleep(50);
    expect(view.authority).toBe(true);

    // drive forward with live commands for two seconds
    input.keyDown("KeyW");
    let lastTick = Date.now();
    for (let i = 0; i < 40; i++) {
      const now = Date.now();
      input.update((now - lastTick) / 1000);
      lastTick = now;
      client.pump();
      await sleep(50);
    }
    const drivingSpeed = (view.state as StateMessage).speed;
    expect(drivingSpeed).toBeGreaterThan(0.3);

    // go completely silent: no commands, no pings
    const stopDeadline = Date.now() + 4000;
    let sawSafeStop = false;
    while (Date.now() < stopDeadline) {
      await sleep(100);
      if (view.state?.safe_stop) {
        sawSafeStop = true;
        break;
      }
    }
    expect(sawSafeStop).toBe(true);

    // with zeroed commands the holding brake brings it to rest
    const restDeadline = Date.now() + 6000;
    let restSpeed = Infinity;
    while (Date.now() < restDeadline) {
      await sleep(200);
      restSpeed = Math.abs(view.state?.speed ?? Infinity);
      if (restSpeed < 0.05) break;
    }
    expect(restSpeed).toBeLessThan(0.05);
  }, 40000);
});
