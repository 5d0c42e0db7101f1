"""Planar and spatial LIDAR simulation by ray casting.

Both sensors fire one ray per configured angle from the mounted sensor
frame. Ranges below the minimum range, or rays that hit nothing inside
the maximum range, report infinity. The spatial variant sweeps the same
azimuth grid over a set of elevation channels; its output ordering is
fixed (channel-major, then azimuth) regardless of how the rays are
evaluated internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..worldcore import SE3, World, compose, raycast_batch

_GRID_TOL = 1e-9


def _check_grid(span: float, res: float, what: str) -> int:
    if res <= 0:
        raise ValueError(f"{what} resolution must be > 0")
    steps = span / res
    if abs(steps - round(steps)) > _GRID_TOL:
        raise ValueError(f"{what} span must be an integer multiple of the resolution")
    return int(round(steps)) + 1


@dataclass(frozen=True)
class Lidar2DParams:
    mount: SE3                 # sensor frame in the vehicle frame
    range_min: float
    range_max: float
    angle_min: float
    angle_max: float
    angle_res: float
    rate: float = 10.0         # Hz

    def __post_init__(self):
        if not self.range_min < self.range_max:
            raise ValueError("range_min must be < range_max")
        _check_grid(self.angle_max - self.angle_min, self.angle_res, "angular")

    @property
    def n_rays(self) -> int:
        return _check_grid(self.angle_max - self.angle_min, self.angle_res,
                           "angular")

    @property
    def angles(self) -> np.ndarray:
        return self.angle_min + self.angle_res * np.arange(self.n_rays)


@dataclass(frozen=True)
class Lidar3DParams(Lidar2DParams):
    elev_min: float = 0.0
    elev_max: float = 0.0
    elev_res: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        _check_grid(self.elev_max - self.elev_min, self.elev_res, "elevation")

    @property
    def n_channels(self) -> int:
        return _check_grid(self.elev_max - self.elev_min, self.elev_res,
                           "elevation")

    @property
    def elevations(self) -> np.ndarray:
        return self.elev_min + self.elev_res * np.arange(self.n_channels)


@dataclass(frozen=True)
class Scan2D:
    ranges: np.ndarray   # meters; inf for misses and sub-minimum returns
    stamp: float
    pose: SE3            # sensor pose in the world at capture time

    def __post_init__(self):
        r = np.array(self.ranges, dtype=float)
        r.flags.writeable = False
        object.__setattr__(self, "ranges", r)


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray   # (N, 3) sensor-frame hit coordinates
    stamp: float

    def __post_init__(self):
        p = np.array(self.points, dtype=float).reshape(-1, 3)
        if not np.isfinite(p).all():
            raise ValueError("non-finite point cloud")
        p.flags.writeable = False
        object.__setattr__(self, "points", p)


def lidar2d_scan(world: World, vehicle_pose: SE3, params: Lidar2DParams,
                 stamp: float = 0.0) -> Scan2D:
    """One planar sweep: ranges[i] at angle_min + i*angle_res."""
    sensor = compose(vehicle_pose, params.mount)
    angles = params.angles
    local = np.stack([np.cos(angles), np.sin(angles), np.zeros_like(angles)],
                     axis=1)
    dirs = local @ sensor.rotation.T
    dist = raycast_batch(world, sensor.translation, dirs, params.range_max)
    ranges = np.where(dist >= params.range_min, dist, np.inf)
    return Scan2D(ranges, stamp, sensor)


def lidar3d_scan(world: World, vehicle_pose: SE3, params: Lidar3DParams,
                 stamp: float = 0.0) -> PointCloud:
    """Multi-channel sweep returning sensor-frame hit points.

    Ray directions are (cos(az)*cos(el), sin(az)*cos(el), -sin(el)); a
    positive elevation therefore points below the sensor horizon.
    """
    sensor = compose(vehicle_pose, params.mount)
    az = params.angles
    cos_az, sin_az = np.cos(az), np.sin(az)
    local_rows = []
    for el in params.elevations:
        ce, se = math.cos(el), math.sin(el)
        local_rows.append(np.stack([cos_az * ce, sin_az * ce,
                                    np.full_like(az, -se)], axis=1))
    local = np.concatenate(local_rows, axis=0)
    dirs = local @ sensor.rotation.T
    dist = raycast_batch(world, sensor.translation, dirs, params.range_max)
    keep = np.isfinite(dist) & (dist >= params.range_min)
    points = local[keep] * dist[keep, None]
    return PointCloud(points, stamp)
