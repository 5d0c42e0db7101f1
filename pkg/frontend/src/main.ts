/** Console entry point: DOM wiring for input, networking and rendering. */

import { DEFAULT_SETTINGS, InputShaper } from "./input.js";
import { TeleopClient } from "./net.js";
import { Renderer } from "./render.js";
import { ViewModel } from "./view.js";

const PUMP_MS = 20; // UI tick; the client throttles sends to 20 Hz itself

function endpoint(): string {
  const params = new URLSearchParams(location.search);
  return params.get("ws") ?? `ws://${location.hostname || "127.0.0.1"}:8700/sim`;
}

function main(): void {
  const canvas = document.getElementById("scene") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const view = new ViewModel();
  const input = new InputShaper();
  const client = new TeleopClient(endpoint(), view, input, {
    socketFactory: (url) => new WebSocket(url) as unknown as never,
  });
  const renderer = new Renderer();

  window.addEventListener("keydown", (e) => {
    if (e.repeat) return;
    input.keyDown(e.code);
    if (["Space", "ArrowUp", "ArrowDown", "ArrowLeft", "ArrowRight"].includes(e.code)) {
      e.preventDefault();
    }
  });
  window.addEventListener("keyup", (e) => input.keyUp(e.code));
  // any loss of focus or visibility must stop the vehicle immediately
  window.addEventListener("blur", () => client.sendZeroNow());
  document.addEventListener("visibilitychange", () => {
    if (document.hidden) client.sendZeroNow();
  });

  const settingsPanel = document.getElementById("settings")!;
  for (const key of ["throttleRamp", "steeringRamp", "centeringRamp"] as const) {
    const label = document.createElement("label");
    label.textContent = `${key} `;
    const box = document.createElement("input");
    box.type = "number";
    box.step = "0.5";
    box.value = String(DEFAULT_SETTINGS[key]);
    box.addEventListener("change", () => {
      input.settings[key] = parseFloat(box.value) || DEFAULT_SETTINGS[key];
    });
    label.appendChild(box);
    settingsPanel.appendChild(label);
  }
  const modeSelect = document.getElementById("mode") as HTMLSelectElement;
  modeSelect.addEventListener("change", () => client.requestMode(modeSelect.value));

  let lastTick = performance.now();
  setInterval(() => {
    const now = performance.now();
    const dt = Math.min(0.2, (now - lastTick) / 1000);
    lastTick = now;
    pollGamepad(input);
    input.update(dt);
    client.pump();
    if (view.connection === "disconnected" && client.reconnectDelayMs > 0) {
      const delay = client.reconnectDelayMs;
      client.reconnectDelayMs = 0;
      setTimeout(() => client.connect(), delay);
    }
  }, PUMP_MS);

  const draw = () => {
    renderer.render(ctx, view, canvas.width, canvas.height);
    requestAnimationFrame(draw);
  };
  client.connect();
  requestAnimationFrame(draw);
}

function pollGamepad(input: InputShaper): void {
  const pads = navigator.getGamepads ? navigator.getGamepads() : [];
  const pad = pads && pads[0];
  if (!pad) {
    input.clearGamepad();
    return;
  }
  // left stick X steers (stick right = negative steering), triggers drive
  const steering = -(pad.axes[0] ?? 0);
  const forward = pad.buttons[7]?.value ?? 0; // RT
  const reverse = pad.buttons[6]?.value ?? 0; // LT
  const brake = pad.buttons[0]?.pressed ? 1 : 0;
  input.setGamepad(steering, forward - reverse, brake);
}

main();
