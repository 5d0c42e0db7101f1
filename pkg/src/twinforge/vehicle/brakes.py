"""Brake torque models."""

from __future__ import annotations

import math

from .params import FULL_SCALE, BrakeParams

COMBI = "combi"
HANDBRAKE = "handbrake"


def brake_torque(wheel_mass_share: float, speed: float, params: BrakeParams,
                 brake_input: str, variant: str) -> float:
    """Per-wheel brake torque magnitude (always opposes wheel spin).

    Small/mid-scale actuators brake with a constant holding torque. The
    full-scale model dissipates the wheel share of kinetic energy over the
    configured braking distance: tau = M*v^2 / (2*D) * R_disk.

    Combi brakes act on all wheels; handbrakes on the rear wheels only
    (the caller applies this wheel selection).
    """
    if brake_input not in (COMBI, HANDBRAKE):
        raise ValueError(f"unknown brake input {brake_input!r}")
    if not math.isfinite(speed):
        raise ValueError("non-finite speed")
    if variant != FULL_SCALE:
        return params.idle_torque
    return (wheel_mass_share * speed * speed
            / (2.0 * params.braking_distance) * params.disk_radius)
