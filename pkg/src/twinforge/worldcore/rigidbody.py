"""Semi-implicit Euler integration of a single rigid body.

Velocity is updated from the applied force/torque first, then the pose is
advanced with the *new* velocity. Fixed-step and branch-free, so identical
inputs give bitwise-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .inertia import InertiaAggregate
from .se3 import SE3, rotation_exp, _renormalize


@dataclass(frozen=True)
class RigidBodyState:
    pose: SE3
    velocity: np.ndarray  # world frame, m/s
    angular_velocity: np.ndarray  # body frame, rad/s

    def __post_init__(self):
        v = np.array(self.velocity, dtype=float).reshape(3)
        w = np.array(self.angular_velocity, dtype=float).reshape(3)
        if not (np.isfinite(v).all() and np.isfinite(w).all()):
            raise ValueError("non-finite state")
        v.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "velocity", v)
        object.__setattr__(self, "angular_velocity", w)

    @staticmethod
    def at_rest(pose: SE3 | None = None) -> "RigidBodyState":
        return RigidBodyState(pose or SE3.identity(), np.zeros(3), np.zeros(3))


def step_rigid_body(state: RigidBodyState,
                    inertia: InertiaAggregate,
                    force: np.ndarray,
                    torque: np.ndarray,
                    dt: float) -> RigidBodyState:
    """Advance one fixed step.

    ``force`` is in the world frame; ``torque`` is about the body axes,
    taken about the COM with the diagonal inertia from aggregate_inertia.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    force = np.asarray(force, dtype=float).reshape(3)
    torque = np.asarray(torque, dtype=float).reshape(3)
    if not (np.isfinite(force).all() and np.isfinite(torque).all()):
        raise ValueError("non-finite input")

    v = state.velocity + force / inertia.total_mass * dt
    moments = np.where(inertia.moments > 0.0, inertia.moments, np.inf)
    w = state.angular_velocity + torque / moments * dt

    t = state.pose.translation + v * dt
    # body-frame angular velocity composes on the right
    r = _renormalize(state.pose.rotation @ rotation_exp(w * dt))
    return RigidBodyState(SE3(r, t), v, w)
