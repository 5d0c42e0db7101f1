"""Reference trajectories recorded from driven paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    yaw: float
    speed: float


@dataclass
class Trajectory:
    waypoints: list = field(default_factory=list)
    loop: bool = False
    spacing: float = 0.5   # m between recorded waypoints

    def __len__(self) -> int:
        return len(self.waypoints)

    def validate(self) -> None:
        if not self.waypoints:
            raise ValueError("no waypoints")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if math.hypot(b.x - a.x, b.y - a.y) < self.spacing / 2.0:
                raise ValueError("waypoints closer than half the spacing threshold")


def record_waypoint(traj: Trajectory, pose: tuple[float, float, float],
                    speed: float) -> Trajectory:
    """Append the pose if it moved at least the spacing threshold.

    The first pose is always recorded; later poses append only once the
    planar distance from the last waypoint reaches the threshold.
    """
    x, y, yaw = pose
    if traj.waypoints:
        last = traj.waypoints[-1]
        if math.hypot(x - last.x, y - last.y) < traj.spacing:
            return traj
    traj.waypoints.append(Waypoint(x, y, yaw, speed))
    return traj
