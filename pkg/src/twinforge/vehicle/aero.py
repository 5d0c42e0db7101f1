"""Aerodynamic drag and downforce."""

from __future__ import annotations

from .params import FULL_SCALE, AeroParams
from .powertrain import GEAR_REVERSE


def aero_forces(speed: float, tau_out: float, gear: int, wheel_rpm: float,
                params: AeroParams, variant: str) -> tuple[float, float]:
    """(drag magnitude N opposing motion, downforce N downward).

    Small/mid-scale vehicles use drag proportional to speed and create no
    downforce. Full-scale drag is case-based on the operating condition:
    top speed, coasting, fast reverse, otherwise idle drag.
    """
    v = abs(speed)
    if variant != FULL_SCALE:
        return params.linear_drag * v, 0.0

    if v >= params.top_speed:
        drag = params.drag_max
    elif tau_out == 0.0:
        drag = params.drag_idle
    elif v >= params.reverse_speed and gear == GEAR_REVERSE and wheel_rpm < 0.0:
        drag = params.drag_reverse
    else:
        drag = params.drag_idle
    return drag, params.downforce_coeff * v
