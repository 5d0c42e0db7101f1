"""Vehicle parameter sets and per-vehicle JSON profiles.

Each supported vehicle (nigel, f1tenth, hunter_se, opencav) ships as one
JSON profile holding every parameter group. Small/mid-scale vehicles use
the electric-motor powertrain and explicit spring rates; the full-scale
vehicle uses the engine/transmission powertrain and natural-frequency
suspension parameterization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..worldcore import SprungMass, SprungMassSet, aggregate_inertia
from .tires import TireSpline

GRAVITY = 9.81

SMALL_SCALE = "small"
FULL_SCALE = "full"

# wheel ordering used across the package
WHEEL_FL, WHEEL_FR, WHEEL_RL, WHEEL_RR = range(4)
FRONT_WHEELS = (WHEEL_FL, WHEEL_FR)
REAR_WHEELS = (WHEEL_RL, WHEEL_RR)
LEFT_WHEELS = (WHEEL_FL, WHEEL_RL)


@dataclass(frozen=True)
class PowertrainParams:
    variant: str                       # "small" | "full"
    wheel_mass: float                  # kg
    wheel_radius: float                # m
    drive_config: str = "RWD"          # FWD | RWD | AWD
    # small-scale: torque = I_w * commanded wheel angular acceleration
    max_wheel_accel: float = 0.0       # rad/s^2 at full throttle
    max_wheel_speed: float = 0.0       # rad/s, drive torque fades to 0 here
    # full-scale engine/transmission
    idle_rpm: float = 0.0
    torque_curve: tuple = ()           # ((rpm, N*m), ...)
    gear_ratios: tuple = ()            # forward gears, 1-indexed by gear number
    reverse_ratio: float = 0.0
    final_drive: float = 1.0
    shift_map: tuple = ()              # per forward gear: (upshift_rpm, downshift_rpm)
    throttle_exp: float = 1.0          # exponent of the throttle smoothing operator
    torque_drop: float = 0.0           # differential torque drop per rad of steering
    shift_duration: float = 0.5        # s of open clutch while shifting
    rpm_time_constant: float = 0.3     # s, exponential engine speed tracking
    standstill_speed: float = 0.1      # m/s below which the box can (dis)engage

    def __post_init__(self):
        if self.variant not in (SMALL_SCALE, FULL_SCALE):
            raise ValueError(f"unknown powertrain variant {self.variant!r}")
        if self.drive_config not in ("FWD", "RWD", "AWD"):
            raise ValueError(f"unknown drive config {self.drive_config!r}")
        if not self.final_drive > 0:
            raise ValueError("final drive ratio must be > 0")
        if self.variant == FULL_SCALE:
            if not self.gear_ratios:
                raise ValueError("full-scale powertrain needs gear ratios")
            if len(self.shift_map) != len(self.gear_ratios):
                raise ValueError("shift map must cover every forward gear")
        object.__setattr__(self, "torque_curve",
                           tuple((float(r), float(t)) for r, t in self.torque_curve))
        object.__setattr__(self, "gear_ratios", tuple(float(g) for g in self.gear_ratios))
        object.__setattr__(self, "shift_map",
                           tuple((float(u), float(d)) for u, d in self.shift_map))

    @property
    def driven_wheels(self) -> tuple:
        if self.drive_config == "FWD":
            return FRONT_WHEELS
        if self.drive_config == "RWD":
            return REAR_WHEELS
        return (WHEEL_FL, WHEEL_FR, WHEEL_RL, WHEEL_RR)

    @property
    def wheel_inertia(self) -> float:
        return 0.5 * self.wheel_mass * self.wheel_radius ** 2

    def engine_torque(self, rpm: float) -> float:
        if not self.torque_curve:
            raise ValueError("powertrain unconfigured")
        xs = [p[0] for p in self.torque_curve]
        ys = [p[1] for p in self.torque_curve]
        return float(np.interp(rpm, xs, ys))


@dataclass(frozen=True)
class BrakeParams:
    idle_torque: float       # N*m holding torque, small-scale actuators
    braking_distance: float  # m from 60 MPH, full-scale
    disk_radius: float       # m

    def __post_init__(self):
        if not self.braking_distance > 0:
            raise ValueError("braking distance must be > 0")
        if not self.disk_radius > 0:
            raise ValueError("brake disk radius must be > 0")


@dataclass(frozen=True)
class SteeringParams:
    limit: float           # rad
    rate: float            # rad/s base steering rate
    speed_rate: float      # rad/s speed-dependent term
    top_speed: float       # m/s used to normalize the speed dependency
    wheelbase: float       # m
    track: float           # m

    def __post_init__(self):
        if not self.limit > 0:
            raise ValueError("steering limit must be > 0")
        if not (self.wheelbase > 0 and self.track > 0):
            raise ValueError("wheelbase and track must be > 0")


@dataclass(frozen=True)
class SuspensionParams:
    natural_freq: float = 0.0     # rad/s; K = M*wn^2 (full-scale path)
    damping_ratio: float = 0.0    # zeta; B = 2*zeta*sqrt(K*M)
    spring_rate: float = 0.0      # N/m explicit override (small-scale)
    damping_rate: float = 0.0     # N*s/m explicit override
    anti_roll_stiffness: float = 0.0  # N/m of normalized travel difference; 0 disables
    force_offset: float = 0.0     # m, suspension geometry offset
    equilibrium: float = 1.0      # dimensionless equilibrium-point parameter
    wheel_mass: float = 0.0       # kg, unsprung side of the quarter car
    wheel_radius: float = 0.0     # m
    com_height: float = 0.0       # m, Z of chassis COM (force application geometry)
    wheel_mount_z: float = 0.0    # m, Z of the wheel mount in the vehicle frame

    def rates(self, sprung_mass: float) -> tuple[float, float]:
        """(K, B): explicit rates if set, else from natural frequency."""
        if self.spring_rate > 0:
            return self.spring_rate, self.damping_rate
        k = sprung_mass * self.natural_freq ** 2
        b = 2.0 * self.damping_ratio * math.sqrt(k * sprung_mass)
        return k, b


@dataclass(frozen=True)
class AeroParams:
    drag_max: float = 0.0      # N at/above top speed
    drag_idle: float = 0.0     # N with no drive torque
    drag_reverse: float = 0.0  # N past the reverse speed limit
    top_speed: float = 1.0     # m/s
    reverse_speed: float = 1.0 # m/s
    downforce_coeff: float = 0.0  # N*s/m
    linear_drag: float = 0.0   # N*s/m, small-scale proportional drag
    angular_drag: float = 0.0  # N*m*s, small-scale yaw drag

    def __post_init__(self):
        for name in ("drag_max", "drag_idle", "drag_reverse", "downforce_coeff",
                     "linear_drag", "angular_drag"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class GymParams:
    """Kinematic-bicycle plant used by the gym operational mode."""
    max_accel: float = 2.0   # m/s^2 at full throttle
    max_decel: float = 4.0   # m/s^2 at full brake
    drag: float = 0.2        # 1/s velocity decay


@dataclass(frozen=True)
class VehicleParams:
    name: str
    variant: str
    sprung: SprungMassSet
    front_offset: float      # m, COM to front axle (+x)
    rear_offset: float       # m, COM to rear axle (+)
    com_height: float        # m, COM height above ground at rest
    powertrain: PowertrainParams
    brakes: BrakeParams
    steering: SteeringParams
    suspension: SuspensionParams
    tire_long: TireSpline
    tire_lat: TireSpline
    nominal_wheel_load: float  # N, load at which the tire curves are given
    aero: AeroParams
    gym: GymParams = field(default_factory=GymParams)
    slip_speed_guard: float = 0.1  # m/s floor for slip denominators

    def __post_init__(self):
        wb = self.front_offset + self.rear_offset
        if abs(wb - self.steering.wheelbase) > 1e-9:
            raise ValueError("axle offsets inconsistent with wheelbase")

    @property
    def wheel_positions(self) -> np.ndarray:
        """Body-frame (x, y) of FL, FR, RL, RR contact points."""
        lf, lr, w = self.front_offset, self.rear_offset, self.steering.track
        return np.array([[lf, w / 2], [lf, -w / 2], [-lr, w / 2], [-lr, -w / 2]])

    @property
    def inertia(self):
        return aggregate_inertia(self.sprung)

    @property
    def corner_masses(self) -> np.ndarray:
        """Static per-wheel share of the sprung mass from axle load balance."""
        m = self.inertia.total_mass
        lf, lr = self.front_offset, self.rear_offset
        front = m * lr / (lf + lr) / 2.0
        rear = m * lf / (lf + lr) / 2.0
        return np.array([front, front, rear, rear])

    @property
    def static_loads(self) -> np.ndarray:
        return (self.corner_masses + self.powertrain.wheel_mass) * GRAVITY


def _spline_from_dict(d: dict) -> TireSpline:
    return TireSpline(
        s_zero=d.get("s_zero", 0.0), f_zero=d.get("f_zero", 0.0),
        s_extremum=d["s_extremum"], f_extremum=d["f_extremum"],
        s_asymptote=d["s_asymptote"], f_asymptote=d["f_asymptote"],
        stiffness=d["stiffness"],
    )


def params_from_dict(cfg: dict) -> VehicleParams:
    geo = cfg["geometry"]
    sprung = SprungMassSet(tuple(
        SprungMass(m, p) for m, p in cfg["sprung_masses"]))
    pt = PowertrainParams(
        variant=cfg["variant"],
        wheel_mass=geo["wheel_mass"],
        wheel_radius=geo["wheel_radius"],
        **cfg["powertrain"],
    )
    sus_cfg = dict(cfg["suspension"])
    sus = SuspensionParams(
        wheel_mass=geo["wheel_mass"],
        wheel_radius=geo["wheel_radius"],
        com_height=geo["com_height"],
        wheel_mount_z=geo.get("wheel_mount_z", geo["wheel_radius"]),
        **sus_cfg,
    )
    steering = SteeringParams(**cfg["steering"])
    tires = cfg["tires"]
    tire_long = _spline_from_dict(tires["longitudinal"])
    tire_lat = _spline_from_dict(tires.get("lateral", tires["longitudinal"]))
    return VehicleParams(
        name=cfg["name"],
        variant=cfg["variant"],
        sprung=sprung,
        front_offset=geo["front_offset"],
        rear_offset=geo["rear_offset"],
        com_height=geo["com_height"],
        powertrain=pt,
        brakes=BrakeParams(**cfg["brakes"]),
        steering=steering,
        suspension=sus,
        tire_long=tire_long,
        tire_lat=tire_lat,
        nominal_wheel_load=tires["nominal_load"],
        aero=AeroParams(**cfg["aero"]),
        gym=GymParams(**cfg.get("gym", {})),
        slip_speed_guard=cfg.get("slip_speed_guard", 0.1),
    )


def profile_path(name: str) -> Path:
    return Path(str(resources.files("twinforge").joinpath(f"profiles/{name}.json")))


def load_profile(name_or_path) -> VehicleParams:
    """Load a vehicle profile by short name (nigel, f1tenth, ...) or file path."""
    p = Path(name_or_path)
    if not p.suffix:
        p = profile_path(str(name_or_path))
    if not p.exists():
        raise FileNotFoundError(f"vehicle profile not found: {name_or_path}")
    return params_from_dict(json.loads(p.read_text()))
