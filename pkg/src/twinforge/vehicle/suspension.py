"""Quarter-car suspension with ground contact and anti-roll coupling.

Displacements are measured upward from the static equilibrium, so a
settled vehicle carries zero displacement everywhere and the spring
preload equals the sprung weight share. ``WheelState.susp_disp`` holds
the unsprung (wheel-side) vertical displacement: it is pinned at 0 while
the wheel rests on the ground and integrates the unsprung equation of
motion only if the contact force would go negative.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .params import GRAVITY, SuspensionParams
from .model_types import WheelState


@dataclass(frozen=True)
class SuspensionResult:
    force: float            # N on the chassis, upward positive, preload included
    application_z: float    # m, body-frame Z of the force application point
    contact_force: float    # N ground normal at the wheel, >= 0
    wheel: WheelState


def suspension_step(wheel: WheelState, sprung_mass: float, body_disp: float,
                    body_vel: float, params: SuspensionParams,
                    dt: float) -> SuspensionResult:
    """Advance one wheel's suspension against the chassis corner motion.

    ``body_disp``/``body_vel`` are the chassis-side displacement and rate.
    Spring/damper rates come from explicit values or K = M*wn^2,
    B = 2*zeta*sqrt(K*M); the force on the chassis is the preload minus
    the spring/damper reaction to the relative deflection.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    k, b = params.rates(sprung_mass)
    if k <= 0:
        raise ValueError("invalid stiffness")

    preload = sprung_mass * GRAVITY
    z = wheel.susp_disp
    z_vel = wheel.susp_vel
    deflection = body_disp - z
    deflection_vel = body_vel - z_vel
    force_on_body = preload - k * deflection - b * deflection_vel

    contact = 0.0
    grounded = z <= 0.0
    if grounded:
        z, z_vel = 0.0, 0.0
        contact = (params.wheel_mass * GRAVITY + preload
                   - k * body_disp - b * body_vel)
        if contact < 0.0:
            grounded = False  # suspension lifts the wheel off the ground
            contact = 0.0
    if not grounded:
        accel = (-GRAVITY
                 + (-preload + k * deflection + b * deflection_vel)
                 / max(params.wheel_mass, 1e-9))
        z_vel = z_vel + accel * dt
        z = z + z_vel * dt
        if z <= 0.0:
            z, z_vel = 0.0, 0.0

    application_z = (params.com_height - params.wheel_mount_z
                     + params.wheel_radius - params.force_offset)
    new_wheel = replace(wheel, susp_disp=z, susp_vel=z_vel,
                        load=max(0.0, contact))
    return SuspensionResult(force_on_body, application_z, max(0.0, contact),
                            new_wheel)


def static_displacement(sprung_mass: float, params: SuspensionParams) -> float:
    """Equilibrium suspension displacement M*g / (Z0 * K)."""
    k, _ = params.rates(sprung_mass)
    if k <= 0 or params.equilibrium == 0:
        raise ValueError("invalid stiffness")
    return sprung_mass * GRAVITY / (params.equilibrium * k)


def wheel_travel(contact_z: float, wheel_radius: float,
                 static_disp: float) -> float:
    """Normalized wheel travel (-Zc - r_w) / Zs from the contact-point height."""
    if static_disp == 0:
        raise ValueError("zero static displacement")
    return (-contact_z - wheel_radius) / static_disp


def anti_roll_forces(left_travel: float, right_travel: float,
                     stiffness: float, left_grounded: bool = True,
                     right_grounded: bool = True) -> tuple[float, float]:
    """Anti-roll bar forces on the left and right wheels.

    F_left = Kr*(Rz - Lz) and F_right = Kr*(Lz - Rz); active only while
    both contact points are grounded.
    """
    if stiffness <= 0.0 or not (left_grounded and right_grounded):
        return 0.0, 0.0
    f_left = stiffness * (right_travel - left_travel)
    return f_left, -f_left
