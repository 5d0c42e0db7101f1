"""Shared state/command value types for the vehicle model."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class WheelState:
    spin: float = 0.0       # rad/s
    steer: float = 0.0      # rad
    susp_disp: float = 0.0  # m, suspension deflection from static equilibrium
    susp_vel: float = 0.0   # m/s
    load: float = 0.0       # N vertical contact load, >= 0

    def __post_init__(self):
        if self.load < 0:
            raise ValueError("wheel load must be >= 0")
        for v in (self.spin, self.steer, self.susp_disp, self.susp_vel, self.load):
            if not math.isfinite(v):
                raise ValueError("non-finite wheel state")


@dataclass(frozen=True)
class Commands:
    """Driver inputs.

    throttle: [-1, 1]. Small-scale vehicles drive the motor with the sign
    directly; on full-scale vehicles a negative value requests the reverse
    gear with |throttle| as the pedal position.
    steering: [-1, 1], normalized to the steering limit.
    brake:    [0, 1] combi brakes; handbrake is a flag (rear wheels).
    """
    throttle: float = 0.0
    steering: float = 0.0
    brake: float = 0.0
    handbrake: bool = False

    def clamped(self) -> "Commands":
        return Commands(
            throttle=max(-1.0, min(1.0, self.throttle)),
            steering=max(-1.0, min(1.0, self.steering)),
            brake=max(0.0, min(1.0, self.brake)),
            handbrake=bool(self.handbrake),
        )
