"""Steering actuator rate law and Ackermann wheel-angle geometry."""

from __future__ import annotations

import math

from .params import SteeringParams


def steering_step(delta: float, delta_cmd: float, speed: float,
                  params: SteeringParams, dt: float) -> float:
    """Move the steering angle toward the command without overshooting.

    The slew rate grows with vehicle speed:
    rate = base rate + speed term * v / v_top.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    target = max(-params.limit, min(params.limit, delta_cmd))
    rate = params.rate + params.speed_rate * abs(speed) / params.top_speed
    rate = max(0.0, rate)
    step = rate * dt
    err = target - delta
    if abs(err) <= step:
        return target
    return delta + math.copysign(step, err)


def ackermann_angles(delta: float, wheelbase: float,
                     track: float) -> tuple[float, float]:
    """Left and right wheel angles sharing one turning center.

    delta_l = atan(2*l*tan(d) / (2*l + w*tan(d)))
    delta_r = atan(2*l*tan(d) / (2*l - w*tan(d)))
    """
    if abs(delta) >= math.pi / 2:
        raise ValueError("steering angle must satisfy |delta| < pi/2")
    tan_d = math.tan(delta)
    denom_l = 2.0 * wheelbase + track * tan_d
    denom_r = 2.0 * wheelbase - track * tan_d
    if abs(denom_l) < 1e-12 or abs(denom_r) < 1e-12:
        raise ValueError("steering geometry singular")
    num = 2.0 * wheelbase * tan_d
    return math.atan(num / denom_l), math.atan(num / denom_r)
