"""Inertial navigation: positioning system plus IMU.

The positioning system reports the body origin in world coordinates. The
IMU reports body-frame angular velocity and, by default, specific force:
the finite-difference acceleration minus gravity, so a vehicle at rest
reads +g on its z axis like a physical accelerometer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..worldcore import RigidBodyState

GRAVITY_W = np.array([0.0, 0.0, -9.81])


@dataclass(frozen=True)
class InsNoise:
    sigma_position: float = 0.0
    sigma_accel: float = 0.0
    sigma_gyro: float = 0.0


@dataclass(frozen=True)
class ImuReading:
    accel: np.ndarray        # m/s^2, body frame
    gyro: np.ndarray         # rad/s, body frame
    rpy: tuple[float, float, float]
    quaternion: np.ndarray   # (w, x, y, z), unit norm


def ins_read(state: RigidBodyState, prev_velocity, dt: float,
             noise: InsNoise | None = None,
             rng: np.random.Generator | None = None,
             gravity_inclusive: bool = True) -> tuple[np.ndarray, ImuReading]:
    """(position, imu) for the current body state.

    ``prev_velocity`` is the world-frame velocity one step earlier, used
    for the finite-difference acceleration.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    prev_velocity = np.asarray(prev_velocity, dtype=float).reshape(3)
    position = np.array(state.pose.translation)

    accel_world = (state.velocity - prev_velocity) / dt
    if gravity_inclusive:
        accel_world = accel_world - GRAVITY_W
    accel_body = state.pose.rotation.T @ accel_world
    gyro = np.array(state.angular_velocity)

    if rng is not None and noise is not None:
        if noise.sigma_position > 0.0:
            position = position + rng.normal(0.0, noise.sigma_position, 3)
        if noise.sigma_accel > 0.0:
            accel_body = accel_body + rng.normal(0.0, noise.sigma_accel, 3)
        if noise.sigma_gyro > 0.0:
            gyro = gyro + rng.normal(0.0, noise.sigma_gyro, 3)

    return position, ImuReading(accel_body, gyro, state.pose.rpy(),
                                state.pose.quaternion())
