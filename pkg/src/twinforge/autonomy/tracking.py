"""Trajectory tracking: target selection, pure pursuit, and PID speed.

Lateral control is the linearized pure-pursuit law: the lookahead point
in the vehicle frame (x_t, y_t) defines a curvature kappa = 2*y_t/L_d^2
and the steering command atan(kappa * wheelbase). Longitudinal control is
a PID on the speed error with a clamped integral, split into throttle and
brake so the two are never active together.

A non-looping trajectory terminates once the vehicle is inside the
termination tolerance of the final waypoint; the controller then
commands zero motion so the vehicle settles to a stop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .trajectory import Trajectory

STATUS_TRACKING = "tracking"
STATUS_TERMINATED = "terminated"


@dataclass
class TrackerState:
    lookahead: float
    kp: float = 0.8
    ki: float = 0.2
    kd: float = 0.0
    target: int = 0
    integral: float = 0.0
    prev_error: float | None = None
    integral_limit: float = 2.0
    term_tol: float = 0.5
    status: str = STATUS_TRACKING

    def __post_init__(self):
        if not self.lookahead > 0:
            raise ValueError("lookahead must be > 0")

    @property
    def terminated(self) -> bool:
        return self.status == STATUS_TERMINATED


def _dist(pose, wp) -> float:
    return math.hypot(wp.x - pose[0], wp.y - pose[1])


def select_target(pose: tuple[float, float, float], traj: Trajectory,
                  state: TrackerState) -> int | None:
    """Advance the target waypoint; None once tracking has terminated.

    The target index moves forward while waypoints fall inside the
    lookahead radius. On a looping trajectory the index wraps from the
    last waypoint to the first; otherwise reaching the last waypoint
    within the termination tolerance ends tracking.
    """
    if not traj.waypoints:
        raise ValueError("no waypoints")
    if state.terminated:
        return None
    last = len(traj.waypoints) - 1
    for _ in range(len(traj.waypoints) + 1):
        if _dist(pose, traj.waypoints[state.target]) >= state.lookahead:
            break
        if state.target == last:
            if traj.loop:
                state.target = 0
            else:
                break
        else:
            state.target += 1
    if (not traj.loop and state.target == last
            and _dist(pose, traj.waypoints[last]) <= state.term_tol):
        state.status = STATUS_TERMINATED
        return None
    return state.target


def pure_pursuit_step(pose: tuple[float, float, float], speed: float,
                      traj: Trajectory, state: TrackerState,
                      wheelbase: float, steer_limit: float) -> float:
    """Steering command in radians toward the lookahead point."""
    if state.terminated:
        return 0.0
    if not traj.waypoints:
        raise ValueError("no waypoints")
    n = len(traj.waypoints)
    last = n - 1
    chosen = traj.waypoints[last]
    for k in range(n):
        idx = (state.target + k) % n if traj.loop else min(state.target + k, last)
        wp = traj.waypoints[idx]
        if _dist(pose, wp) >= state.lookahead:
            chosen = wp
            break
        if not traj.loop and idx == last:
            break

    x, y, yaw = pose
    dx, dy = chosen.x - x, chosen.y - y
    cos_y, sin_y = math.cos(yaw), math.sin(yaw)
    y_t = -sin_y * dx + cos_y * dy
    kappa = 2.0 * y_t / (state.lookahead ** 2)
    delta = math.atan(kappa * wheelbase)
    return max(-steer_limit, min(steer_limit, delta))


def pid_speed_step(speed: float, speed_ref: float, state: TrackerState,
                   dt: float) -> tuple[float, float]:
    """(throttle, brake) in [0, 1] from the PID on the speed error."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    error = speed_ref - speed
    state.integral = max(-state.integral_limit,
                         min(state.integral_limit, state.integral + error * dt))
    derivative = 0.0
    if state.prev_error is not None:
        derivative = (error - state.prev_error) / dt
    state.prev_error = error
    u = state.kp * error + state.ki * state.integral + state.kd * derivative
    if u >= 0.0:
        return min(u, 1.0), 0.0
    return 0.0, min(-u, 1.0)


def target_speed(traj: Trajectory, state: TrackerState) -> float:
    """Speed reference: the recorded speed at the target, 0 once terminated."""
    if state.terminated or not traj.waypoints:
        return 0.0
    return traj.waypoints[state.target].speed
