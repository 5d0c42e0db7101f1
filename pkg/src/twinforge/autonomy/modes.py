"""Operational control modes and their command/state routing."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class OperationalMode(str, Enum):
    GYM = "gym"            # kinematic-bicycle plant, no tire/suspension dynamics
    SIM = "sim"            # full vehicle dynamics
    TESTBED = "testbed"    # commands out over the bridge, state in from it
    TWIN = "twin"          # commands mirrored to the sim and the bridge peer


class ModeChangeError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModeRouting:
    plant: str                 # "kinematic" | "dynamic" | "external"
    command_to_sim: bool
    command_to_bridge: bool
    state_from_bridge: bool


_ROUTING = {
    OperationalMode.GYM: ModeRouting("kinematic", True, False, False),
    OperationalMode.SIM: ModeRouting("dynamic", True, False, False),
    OperationalMode.TESTBED: ModeRouting("external", False, True, True),
    OperationalMode.TWIN: ModeRouting("dynamic", True, True, False),
}


def set_mode(mode: OperationalMode, tracking_active: bool = False) -> ModeRouting:
    """Routing configuration for a mode; refuses to switch mid-tracking."""
    if tracking_active:
        raise ModeChangeError("stop tracking before mode change")
    return _ROUTING[OperationalMode(mode)]
