"""Powertrain models: electric-motor (small/mid scale) and engine (full scale).

The full-scale path covers the engine torque curve, the automatic
transmission with shift hysteresis and clutch disengagement, gear
interlocks (neutral/park at standstill, drive<->reverse via neutral),
and the steering-dependent differential torque drop.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

from .params import FULL_SCALE, SMALL_SCALE, PowertrainParams

log = logging.getLogger(__name__)

GEAR_PARK = -2
GEAR_REVERSE = -1
GEAR_NEUTRAL = 0

_DROP_CLAMP = 0.9


@dataclass(frozen=True)
class PowertrainState:
    rpm: float = 0.0
    gear: int = GEAR_NEUTRAL
    shift_timer: float = 0.0   # s remaining with the clutch open
    pending_gear: int = GEAR_NEUTRAL

    @property
    def shifting(self) -> bool:
        return self.shift_timer > 0.0


def gear_label(gear: int) -> str:
    if gear == GEAR_PARK:
        return "P"
    if gear == GEAR_REVERSE:
        return "R"
    if gear == GEAR_NEUTRAL:
        return "N"
    return str(gear)


def smallscale_drive_torque(throttle: float, params: PowertrainParams) -> float:
    """Per-driven-wheel torque for motor-driven vehicles.

    tau = I_w * commanded wheel angular acceleration, with the commanded
    acceleration proportional to throttle. The sign follows the throttle.
    """
    if params.variant != SMALL_SCALE:
        raise ValueError("small-scale torque requested for full-scale powertrain")
    if not -1.0 <= throttle <= 1.0:
        log.warning("throttle %.3f out of [-1, 1], clamping", throttle)
        throttle = max(-1.0, min(1.0, throttle))
    return params.wheel_inertia * params.max_wheel_accel * throttle


def drive_split(tau_total: float, params: PowertrainParams) -> float:
    """Per-wheel output torque before the differential.

    tau_total/2 for a single driven axle (FWD/RWD), tau_total/4 for AWD.
    """
    if not math.isfinite(tau_total):
        raise ValueError("non-finite torque")
    return tau_total / (4.0 if params.drive_config == "AWD" else 2.0)


def differential_split(tau_out: float, delta: float,
                       torque_drop: float) -> tuple[float, float]:
    """Left/right wheel torques with the steering-dependent drop.

    With delta+ = max(delta, 0) and delta- = min(delta, 0), the left wheel
    sees tau_out*(1 - drop*|delta-|) and the right tau_out*(1 - drop*|delta+|),
    each drop product clamped to [0, 0.9]. A positive steering angle thus
    sheds torque from the right wheel.
    """
    drop_l = min(_DROP_CLAMP, max(0.0, torque_drop * abs(min(delta, 0.0))))
    drop_r = min(_DROP_CLAMP, max(0.0, torque_drop * abs(max(delta, 0.0))))
    return tau_out * (1.0 - drop_l), tau_out * (1.0 - drop_r)


def wheel_rpm_from_speed(speed: float, tire_radius: float) -> float:
    """Wheel rev/min at a given road speed (no slip)."""
    return speed * 60.0 / (2.0 * math.pi * tire_radius)


def fullscale_powertrain_step(state: PowertrainState,
                              throttle: float,
                              handbrake: bool,
                              dt: float,
                              params: PowertrainParams,
                              wheel_rpm: float,
                              speed: float,
                              direction: int) -> tuple[PowertrainState, float]:
    """One step of the engine/transmission model.

    Args:
        throttle: pedal position in [0, 1].
        wheel_rpm: signed average wheel speed in rev/min.
        speed: signed longitudinal vehicle speed, m/s.
        direction: requested travel direction (+1 drive, -1 reverse, 0 none).

    Returns:
        (new state, total output torque N*m). Torque is zero in neutral,
        park, and while a shift is in progress (open clutch).
    """
    if params.variant != FULL_SCALE:
        raise ValueError("full-scale step requested for small-scale powertrain")
    if not params.torque_curve:
        raise ValueError("powertrain unconfigured")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    throttle = max(0.0, min(1.0, throttle))

    gear = state.gear
    timer = state.shift_timer
    pending = state.pending_gear

    if timer > 0.0:
        timer -= dt
        if timer <= 0.0:
            gear, timer = pending, 0.0
    else:
        gear, timer, pending = _select_gear(gear, timer, pending, params,
                                            handbrake, speed, direction)

    # engine speed chases the wheel-implied target exponentially
    ratio = _gear_ratio(params, gear)
    if ratio > 0.0:
        target = params.idle_rpm + abs(wheel_rpm) * params.final_drive * ratio
    else:
        target = params.idle_rpm
    alpha = 1.0 - math.exp(-dt / params.rpm_time_constant)
    rpm = state.rpm + (target - state.rpm) * alpha

    shifting = timer > 0.0
    if shifting or gear in (GEAR_PARK, GEAR_NEUTRAL):
        tau_total = 0.0
    else:
        shaped = throttle ** params.throttle_exp if throttle > 0.0 else 0.0
        tau_total = (params.engine_torque(rpm) * _gear_ratio(params, gear)
                     * params.final_drive * shaped)
        if gear == GEAR_REVERSE:
            tau_total = -tau_total

    return PowertrainState(rpm, gear, timer, pending), tau_total


def _gear_ratio(params: PowertrainParams, gear: int) -> float:
    if gear >= 1:
        return params.gear_ratios[gear - 1]
    if gear == GEAR_REVERSE:
        return params.reverse_ratio
    return 0.0


def _select_gear(gear, timer, pending, params, handbrake, speed, direction):
    standstill = abs(speed) < params.standstill_speed

    if standstill:
        if handbrake:
            return GEAR_PARK, 0.0, pending
        if gear == GEAR_PARK:
            gear = GEAR_NEUTRAL  # handbrake released
        if direction > 0 and gear <= GEAR_NEUTRAL:
            # reverse -> drive passes through neutral
            gear = GEAR_NEUTRAL if gear == GEAR_REVERSE else 1
        elif direction < 0 and gear >= GEAR_NEUTRAL:
            gear = GEAR_NEUTRAL if gear >= 1 else GEAR_REVERSE
        elif direction == 0:
            gear = GEAR_NEUTRAL
        return gear, timer, pending

    # moving: direction reversals disengage to neutral first
    if gear >= 1 and direction < 0:
        return GEAR_NEUTRAL, 0.0, pending
    if gear == GEAR_REVERSE and direction > 0:
        return GEAR_NEUTRAL, 0.0, pending
    if gear == GEAR_NEUTRAL and direction > 0 and speed > 0.0:
        gear = 1  # rolling re-engage
    if gear >= 1:
        # shift hysteresis on the speed-implied engine rpm
        ratio = params.gear_ratios[gear - 1]
        rpm_now = (abs(wheel_rpm_from_speed(speed, params.wheel_radius))
                   * params.final_drive * ratio)
        up_rpm, down_rpm = params.shift_map[gear - 1]
        if rpm_now > up_rpm and gear < len(params.gear_ratios):
            return gear, params.shift_duration, gear + 1
        if rpm_now < down_rpm and gear > 1:
            return gear, params.shift_duration, gear - 1
    return gear, timer, pending
