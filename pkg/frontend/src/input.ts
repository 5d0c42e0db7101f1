/**
 * Driver input shaping.
 *
 * Keyboard keys are digital, so they ramp: holding a key slews the axis
 * toward full deflection at the configured rate, releasing it recenters
 * faster. Gamepad axes pass through unshaped. A blur or visibility loss
 * zeroes everything instantly.
 */

export interface InputSettings {
  throttleRamp: number; // units/s toward the held direction
  steeringRamp: number;
  centeringRamp: number; // units/s back to zero with no key held
}

export const DEFAULT_SETTINGS: InputSettings = {
  throttleRamp: 2.0,
  steeringRamp: 3.0,
  centeringRamp: 5.0,
};

const THROTTLE_UP = ["KeyW", "ArrowUp"];
const THROTTLE_DOWN = ["KeyS", "ArrowDown"];
const STEER_LEFT = ["KeyA", "ArrowLeft"];
const STEER_RIGHT = ["KeyD", "ArrowRight"];
const BRAKE = ["Space"];
const HANDBRAKE = ["ShiftLeft", "ShiftRight"];
const RECORD_TOGGLE = "KeyR";

function towards(value: number, target: number, maxStep: number): number {
  const err = target - value;
  if (Math.abs(err) <= maxStep) return target;
  return value + Math.sign(err) * maxStep;
}

export class InputShaper {
  throttle = 0;
  steering = 0;
  brake = 0;
  handbrake = false;

  private keys = new Set<string>();
  private recordToggles = 0;
  private gamepadActive = false;
  private gamepadAxes: { steering: number; throttle: number; brake: number } | null =
    null;

  constructor(public settings: InputSettings = { ...DEFAULT_SETTINGS }) {}

  keyDown(code: string): void {
    if (code === RECORD_TOGGLE && !this.keys.has(code)) {
      this.recordToggles += 1;
    }
    this.keys.add(code);
  }

  keyUp(code: string): void {
    this.keys.delete(code);
  }

  /** Analog passthrough; overrides keyboard shaping while provided. */
  setGamepad(steering: number, throttle: number, brake: number): void {
    this.gamepadActive = true;
    this.gamepadAxes = { steering, throttle, brake };
  }

  clearGamepad(): void {
    this.gamepadActive = false;
    this.gamepadAxes = null;
  }

  /** Advance the ramps by dt seconds. */
  update(dt: number): void {
    if (this.gamepadActive && this.gamepadAxes) {
      this.throttle = clamp(this.gamepadAxes.throttle);
      this.steering = clamp(this.gamepadAxes.steering);
      this.brake = Math.min(1, Math.max(0, this.gamepadAxes.brake));
      this.handbrake = this.anyHeld(HANDBRAKE);
      return;
    }
    const s = this.settings;
    const throttleTarget =
      (this.anyHeld(THROTTLE_UP) ? 1 : 0) + (this.anyHeld(THROTTLE_DOWN) ? -1 : 0);
    const steeringTarget =
      (this.anyHeld(STEER_LEFT) ? 1 : 0) + (this.anyHeld(STEER_RIGHT) ? -1 : 0);

    this.throttle = towards(
      this.throttle,
      throttleTarget,
      (throttleTarget !== 0 ? s.throttleRamp : s.centeringRamp) * dt,
    );
    this.steering = towards(
      this.steering,
      steeringTarget,
      (steeringTarget !== 0 ? s.steeringRamp : s.centeringRamp) * dt,
    );
    this.brake = towards(this.brake, this.anyHeld(BRAKE) ? 1 : 0,
                         s.centeringRamp * dt);
    this.handbrake = this.anyHeld(HANDBRAKE);
  }

  /** Immediate all-stop (blur, visibility loss, authority loss). */
  zero(): void {
    this.keys.clear();
    this.throttle = 0;
    this.steering = 0;
    this.brake = 0;
    this.handbrake = false;
    this.clearGamepad();
  }

  anyActive(): boolean {
    return (
      this.keys.size > 0 ||
      this.gamepadActive ||
      this.throttle !== 0 ||
      this.steering !== 0 ||
      this.brake !== 0 ||
      this.handbrake
    );
  }

  /** Number of pending record toggles since the last call (consumed). */
  takeRecordToggles(): number {
    const n = this.recordToggles;
    this.recordToggles = 0;
    return n;
  }

  private anyHeld(codes: string[]): boolean {
    return codes.some((c) => this.keys.has(c));
  }
}

function clamp(v: number): number {
  return Math.min(1, Math.max(-1, v));
}
