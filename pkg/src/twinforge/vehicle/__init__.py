from .params import (
    AeroParams,
    BrakeParams,
    GymParams,
    PowertrainParams,
    SteeringParams,
    SuspensionParams,
    VehicleParams,
    load_profile,
    profile_path,
)
from .tires import TireSpline, compute_slip, tire_force
from .steering import ackermann_angles, steering_step
from .powertrain import (
    GEAR_NEUTRAL,
    GEAR_PARK,
    GEAR_REVERSE,
    PowertrainState,
    differential_split,
    drive_split,
    fullscale_powertrain_step,
    smallscale_drive_torque,
)
from .brakes import brake_torque
from .suspension import anti_roll_forces, static_displacement, suspension_step, wheel_travel
from .aero import aero_forces
from .model import (
    Commands,
    KinematicState,
    VehicleModel,
    VehicleState,
    WheelState,
    initial_state,
    kinematic_step,
    vehicle_step,
)

__all__ = [
    "AeroParams",
    "BrakeParams",
    "GymParams",
    "PowertrainParams",
    "SteeringParams",
    "SuspensionParams",
    "VehicleParams",
    "load_profile",
    "profile_path",
    "TireSpline",
    "compute_slip",
    "tire_force",
    "ackermann_angles",
    "steering_step",
    "GEAR_NEUTRAL",
    "GEAR_PARK",
    "GEAR_REVERSE",
    "PowertrainState",
    "differential_split",
    "drive_split",
    "fullscale_powertrain_step",
    "smallscale_drive_torque",
    "brake_torque",
    "anti_roll_forces",
    "static_displacement",
    "suspension_step",
    "wheel_travel",
    "aero_forces",
    "Commands",
    "KinematicState",
    "VehicleModel",
    "VehicleState",
    "WheelState",
    "initial_state",
    "kinematic_step",
    "vehicle_step",
]
