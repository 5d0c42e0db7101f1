"""Assembled double-track vehicle model (planar motion plus heave).

Tire forces act in the ground plane; each wheel carries a quarter-car
suspension that produces the vertical loads, with quasi-static
longitudinal/lateral load transfer standing in for roll/pitch rotation.
Stepping is strictly ordered and free of randomness, so identical inputs
produce bitwise-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..worldcore import RigidBodyState, SE3, step_rigid_body
from ..worldcore.world import World
from .aero import aero_forces
from .brakes import COMBI, HANDBRAKE, brake_torque
from .model_types import Commands, WheelState
from .params import (
    FRONT_WHEELS, FULL_SCALE, GRAVITY, LEFT_WHEELS, REAR_WHEELS,
    SMALL_SCALE, VehicleParams,
)
from .powertrain import (
    GEAR_NEUTRAL, PowertrainState, differential_split, drive_split,
    fullscale_powertrain_step, smallscale_drive_torque,
)
from .steering import ackermann_angles, steering_step
from .suspension import anti_roll_forces, static_displacement, suspension_step, wheel_travel
from .tires import compute_slip, tire_force

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class VehicleState:
    body: RigidBodyState
    wheels: tuple[WheelState, WheelState, WheelState, WheelState]
    steer_angle: float
    powertrain: PowertrainState
    tire_forces: np.ndarray   # (4, 2) wheel-frame (Fx, Fy) from the last step
    revolutions: np.ndarray   # (4,) cumulative signed wheel revolutions
    time: float = 0.0

    def __post_init__(self):
        tf = np.array(self.tire_forces, dtype=float).reshape(4, 2)
        rv = np.array(self.revolutions, dtype=float).reshape(4)
        tf.flags.writeable = False
        rv.flags.writeable = False
        object.__setattr__(self, "tire_forces", tf)
        object.__setattr__(self, "revolutions", rv)

    @property
    def planar_pose(self) -> tuple[float, float, float]:
        t = self.body.pose.translation
        return float(t[0]), float(t[1]), self.body.pose.yaw

    @property
    def speed(self) -> float:
        """Signed longitudinal body-frame speed, m/s."""
        yaw = self.body.pose.yaw
        v = self.body.velocity
        return float(math.cos(yaw) * v[0] + math.sin(yaw) * v[1])


def initial_state(params: VehicleParams, x: float = 0.0, y: float = 0.0,
                  yaw: float = 0.0) -> VehicleState:
    pose = SE3.from_xyz_yaw(x, y, params.com_height, yaw)
    wheels = tuple(WheelState(load=float(l)) for l in params.static_loads)
    pt = PowertrainState(rpm=params.powertrain.idle_rpm, gear=GEAR_NEUTRAL)
    return VehicleState(RigidBodyState.at_rest(pose), wheels, 0.0, pt,
                        np.zeros((4, 2)), np.zeros(4))


def vehicle_step(state: VehicleState, commands: Commands, world: World | None,
                 params: VehicleParams, dt: float) -> VehicleState:
    """Advance the vehicle one fixed step.

    Evaluation order: steering actuator, Ackermann split, powertrain and
    differential, brakes, wheel spin, slip, tire forces, suspension and
    loads, aerodynamics, rigid-body integration. The ``world`` argument is
    accepted for interface symmetry; the chassis runs on the flat ground
    plane and does not collide with walls.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    cmds = commands.clamped()
    pt = params.powertrain
    inertia = params.inertia
    mass = inertia.total_mass
    i_z = float(inertia.moments[2]) if inertia.moments[2] > 0 else 1e-9

    yaw = state.body.pose.yaw
    cy, sy = math.cos(yaw), math.sin(yaw)
    vw = state.body.velocity
    vx = cy * vw[0] + sy * vw[1]
    vy = -sy * vw[0] + cy * vw[1]
    wz = float(state.body.angular_velocity[2])

    # steering actuator, then per-wheel Ackermann angles
    delta = steering_step(state.steer_angle, cmds.steering * params.steering.limit,
                          vx, params.steering, dt)
    if delta != 0.0:
        delta_l, delta_r = ackermann_angles(delta, params.steering.wheelbase,
                                            params.steering.track)
    else:
        delta_l = delta_r = 0.0
    # positive delta turns left (+y): the inner (left) wheel takes the
    # larger of the two Ackermann angles
    steer = (delta_r, delta_l, 0.0, 0.0)

    # powertrain
    drive = np.zeros(4)
    radius = pt.wheel_radius
    spins = np.array([w.spin for w in state.wheels])
    if pt.variant == SMALL_SCALE:
        pt_state = state.powertrain
        tau_wheel = smallscale_drive_torque(cmds.throttle, pt)
        tau_out = tau_wheel
        for i in pt.driven_wheels:
            drive[i] = tau_wheel * _speed_fade(spins[i], pt.max_wheel_speed)
    else:
        direction = 0 if cmds.throttle == 0.0 else (1 if cmds.throttle > 0 else -1)
        wheel_rpm = float(np.mean(spins)) * 60.0 / _TWO_PI
        pt_state, tau_total = fullscale_powertrain_step(
            state.powertrain, abs(cmds.throttle), cmds.handbrake, dt, pt,
            wheel_rpm, vx, direction)
        tau_out = drive_split(tau_total, pt)
        tau_l, tau_r = differential_split(tau_out, delta, pt.torque_drop)
        for i in pt.driven_wheels:
            drive[i] = tau_l if i in LEFT_WHEELS else tau_r

    # brakes: combi on all wheels, handbrake on the rear axle
    corner = params.corner_masses
    brake = np.zeros(4)
    if pt.variant == SMALL_SCALE:
        hold = brake_torque(0.0, vx, params.brakes, COMBI, SMALL_SCALE)
        if cmds.brake > 0.0 or cmds.throttle == 0.0:
            brake[:] = hold
        if cmds.handbrake:
            for i in REAR_WHEELS:
                brake[i] = max(brake[i], hold)
    else:
        if cmds.brake > 0.0:
            for i in range(4):
                brake[i] = cmds.brake * brake_torque(
                    corner[i], vx, params.brakes, COMBI, FULL_SCALE)
        if cmds.handbrake:
            for i in REAR_WHEELS:
                brake[i] = max(brake[i], brake_torque(
                    corner[i], vx, params.brakes, HANDBRAKE, FULL_SCALE))

    # wheel spin: drive plus last-step tire reaction, brake never reverses spin
    i_w = pt.wheel_inertia
    new_spins = np.empty(4)
    revs = np.array(state.revolutions)
    for i in range(4):
        tau_net = drive[i] - radius * state.tire_forces[i, 0]
        w_new = spins[i] + dt * tau_net / i_w
        dw_brake = dt * brake[i] / i_w
        w_new -= math.copysign(min(abs(w_new), dw_brake), w_new)
        new_spins[i] = w_new
        revs[i] += w_new * dt / _TWO_PI

    # slip and tire forces (loads from the previous step's suspension)
    positions = params.wheel_positions
    f_body = np.zeros(2)
    tau_z = 0.0
    new_forces = np.zeros((4, 2))
    for i in range(4):
        x_i, y_i = positions[i]
        vwx_b = vx - wz * y_i
        vwy_b = vy + wz * x_i
        cs, ss = math.cos(steer[i]), math.sin(steer[i])
        vwx = cs * vwx_b + ss * vwy_b
        vwy = -ss * vwx_b + cs * vwy_b
        s_x, s_y = compute_slip(vwx, vwy, new_spins[i], radius,
                                params.slip_speed_guard)
        load = state.wheels[i].load
        fx = tire_force(s_x, params.tire_long, load, params.nominal_wheel_load)
        fy = -tire_force(s_y, params.tire_lat, load, params.nominal_wheel_load)

        # discrete stability: a force may cancel its slip within one step
        # but never reverse it
        m_share = corner[i] + pt.wheel_mass
        kappa_x = radius * radius / i_w + 1.0 / m_share
        fx_lim = abs(radius * new_spins[i] - vwx) / (dt * kappa_x)
        fx = max(-fx_lim, min(fx_lim, fx))
        kappa_y = 1.0 / m_share + (x_i * x_i + y_i * y_i) / i_z
        fy_lim = abs(vwy) / (dt * kappa_y)
        fy = max(-fy_lim, min(fy_lim, fy))

        new_forces[i] = (fx, fy)
        fbx = cs * fx - ss * fy
        fby = ss * fx + cs * fy
        f_body[0] += fbx
        f_body[1] += fby
        tau_z += x_i * fby - y_i * fbx

    # suspension: chassis heave against the grounded wheels
    z_c = float(state.body.pose.translation[2]) - params.com_height
    vz = float(vw[2])
    mid_wheels = [replace(state.wheels[i], spin=float(new_spins[i]), steer=steer[i])
                  for i in range(4)]
    susp = [suspension_step(mid_wheels[i], float(corner[i]), z_c, vz,
                            params.suspension, dt) for i in range(4)]
    susp_total = sum(r.force for r in susp)

    # anti-roll bars couple left/right normalized travels per axle
    arb = np.zeros(4)
    if params.suspension.anti_roll_stiffness > 0.0:
        contact_z = -(params.com_height + z_c)
        for left, right in (FRONT_WHEELS[0], FRONT_WHEELS[1]), (REAR_WHEELS[0], REAR_WHEELS[1]):
            travels = []
            for i in (left, right):
                z_s = static_displacement(float(corner[i]), params.suspension)
                travels.append(wheel_travel(contact_z, radius, z_s))
            f_l, f_r = anti_roll_forces(travels[0], travels[1],
                                        params.suspension.anti_roll_stiffness,
                                        susp[left].contact_force > 0.0,
                                        susp[right].contact_force > 0.0)
            arb[left], arb[right] = f_l, f_r

    # quasi-static load transfer from the planar accelerations
    a_x = f_body[0] / mass
    a_y = f_body[1] / mass
    h = params.com_height
    wheelbase = params.steering.wheelbase
    track = params.steering.track
    dn_long = mass * a_x * h / (2.0 * wheelbase)
    dn_lat = mass * a_y * h / (2.0 * track)
    loads = np.empty(4)
    for i in range(4):
        n = susp[i].contact_force + arb[i]
        n += dn_long if i in REAR_WHEELS else -dn_long
        n += dn_lat if i not in LEFT_WHEELS else -dn_lat
        loads[i] = max(0.0, n)
    wheels = tuple(replace(susp[i].wheel, load=float(loads[i])) for i in range(4))

    # aerodynamics
    v_planar = math.hypot(vx, vy)
    wheel_rpm_now = float(np.mean(new_spins)) * 60.0 / _TWO_PI
    f_drag, f_down = aero_forces(v_planar, tau_out, pt_state.gear, wheel_rpm_now,
                                 params.aero, pt.variant)
    if v_planar > 1e-12 and f_drag > 0.0:
        f_drag = min(f_drag, mass * v_planar / dt)  # drag cannot reverse motion
        f_body[0] -= f_drag * vx / v_planar
        f_body[1] -= f_drag * vy / v_planar
    if params.aero.angular_drag > 0.0:
        tau_z -= params.aero.angular_drag * wz

    # assemble world-frame force and integrate
    f_z = susp_total - mass * GRAVITY - f_down
    force_world = np.array([cy * f_body[0] - sy * f_body[1],
                            sy * f_body[0] + cy * f_body[1],
                            f_z])
    torque_body = np.array([0.0, 0.0, tau_z])
    body = step_rigid_body(state.body, inertia, force_world, torque_body, dt)

    return VehicleState(body, wheels, delta, pt_state, new_forces, revs,
                        state.time + dt)


def _speed_fade(spin: float, max_speed: float) -> float:
    """Linear drive-torque fade approaching the motor's top wheel speed."""
    if max_speed <= 0.0:
        return 1.0
    frac = abs(spin) / max_speed
    if frac >= 1.0:
        return 0.0
    if frac <= 0.9:
        return 1.0
    return (1.0 - frac) / 0.1


@dataclass(frozen=True)
class KinematicState:
    """Bicycle-model state for the gym operational mode."""
    x: float = 0.0
    y: float = 0.0
    yaw: float = 0.0
    speed: float = 0.0
    steer: float = 0.0
    time: float = 0.0


def kinematic_step(state: KinematicState, commands: Commands,
                   params: VehicleParams, dt: float) -> KinematicState:
    """Kinematic bicycle plant: no suspension or tire dynamics."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    cmds = commands.clamped()
    gym = params.gym
    steer = steering_step(state.steer, cmds.steering * params.steering.limit,
                          state.speed, params.steering, dt)
    accel = gym.max_accel * cmds.throttle - gym.drag * state.speed
    decel = gym.max_decel * (cmds.brake + (1.0 if cmds.handbrake else 0.0))
    speed = state.speed + accel * dt
    speed -= math.copysign(min(abs(speed), decel * dt), speed)
    yaw = state.yaw + speed * math.tan(steer) / params.steering.wheelbase * dt
    x = state.x + speed * math.cos(yaw) * dt
    y = state.y + speed * math.sin(yaw) * dt
    return KinematicState(x, y, yaw, speed, steer, state.time + dt)


class VehicleModel:
    """Stateful convenience wrapper: one vehicle stepped in place."""

    def __init__(self, params: VehicleParams, x: float = 0.0, y: float = 0.0,
                 yaw: float = 0.0, world: World | None = None):
        self.params = params
        self.world = world
        self.state = initial_state(params, x, y, yaw)

    def step(self, commands: Commands, dt: float) -> VehicleState:
        self.state = vehicle_step(self.state, commands, self.world,
                                  self.params, dt)
        return self.state
