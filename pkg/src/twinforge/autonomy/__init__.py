from .mapping import (
    CLASS_FREE,
    CLASS_OCCUPIED,
    CLASS_UNKNOWN,
    LOG_ODDS_MAX,
    LOG_ODDS_MIN,
    OccupancyGrid,
    pcd_to_scan,
    update_occupancy,
)
from .trajectory import Trajectory, Waypoint, record_waypoint
from .tracking import TrackerState, pid_speed_step, pure_pursuit_step, select_target
from .modes import ModeChangeError, ModeRouting, OperationalMode, set_mode

__all__ = [
    "CLASS_FREE",
    "CLASS_OCCUPIED",
    "CLASS_UNKNOWN",
    "LOG_ODDS_MAX",
    "LOG_ODDS_MIN",
    "OccupancyGrid",
    "pcd_to_scan",
    "update_occupancy",
    "Trajectory",
    "Waypoint",
    "record_waypoint",
    "TrackerState",
    "pid_speed_step",
    "pure_pursuit_step",
    "select_target",
    "ModeChangeError",
    "ModeRouting",
    "OperationalMode",
    "set_mode",
]
