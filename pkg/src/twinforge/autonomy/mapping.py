"""Occupancy-grid mapping and the 3D-cloud to 2D-scan surrogate.

Mapping is known-pose: every beam of a scan frees the cells it crosses
and marks its endpoint occupied, accumulating clamped log-odds. The
surrogate converter collapses a height band of a spatial point cloud
onto the planar scan's angular grid, taking the nearest planar range per
azimuth bin, which lets the 2D mapping stack run on 3D sensor data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..worldcore import SE3
from ..sensors import Lidar2DParams, PointCloud, Scan2D

LOG_ODDS_MIN = -4.0
LOG_ODDS_MAX = 4.0

CLASS_FREE = 0
CLASS_OCCUPIED = 1
CLASS_UNKNOWN = 2

_TWO_PI = 2.0 * math.pi


@dataclass
class OccupancyGrid:
    resolution: float              # m per cell
    origin: tuple[float, float]    # world (x, y) of cell (0, 0)'s corner
    log_odds: np.ndarray           # (height, width), row iy, column ix

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be > 0")
        self.log_odds = np.asarray(self.log_odds, dtype=float)

    @staticmethod
    def create(width: int, height: int, resolution: float,
               origin: tuple[float, float]) -> "OccupancyGrid":
        return OccupancyGrid(resolution, tuple(origin),
                             np.zeros((height, width)))

    @property
    def width(self) -> int:
        return self.log_odds.shape[1]

    @property
    def height(self) -> int:
        return self.log_odds.shape[0]

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        ix = int(math.floor((x - self.origin[0]) / self.resolution))
        iy = int(math.floor((y - self.origin[1]) / self.resolution))
        return ix, iy

    def contains(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def classify(self) -> np.ndarray:
        """Per-cell class: occupied above +0.5, free below -0.5, else unknown."""
        out = np.full(self.log_odds.shape, CLASS_UNKNOWN, dtype=np.uint8)
        out[self.log_odds > 0.5] = CLASS_OCCUPIED
        out[self.log_odds < -0.5] = CLASS_FREE
        return out

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(self.resolution, self.origin, self.log_odds.copy())


def _bresenham(ix0: int, iy0: int, ix1: int, iy1: int):
    """Integer cells from (ix0, iy0) to (ix1, iy1), inclusive."""
    dx = abs(ix1 - ix0)
    dy = abs(iy1 - iy0)
    sx = 1 if ix0 < ix1 else -1
    sy = 1 if iy0 < iy1 else -1
    err = dx - dy
    x, y = ix0, iy0
    while True:
        yield x, y
        if x == ix1 and y == iy1:
            return
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy


def update_occupancy(grid: OccupancyGrid, sensor_pose: SE3, scan: Scan2D,
                     params: Lidar2DParams, l_occ: float = 0.85,
                     l_free: float = 0.4) -> OccupancyGrid:
    """Fold one scan into the grid (known-pose mapping, no scan matching).

    Finite beams free every traversed cell and bump the endpoint; misses
    free the full ray out to the maximum range. Log-odds stay clamped to
    [LOG_ODDS_MIN, LOG_ODDS_MAX].
    """
    ox, oy = float(sensor_pose.translation[0]), float(sensor_pose.translation[1])
    ix0, iy0 = grid.cell_of(ox, oy)
    if not grid.contains(ix0, iy0):
        raise ValueError("sensor pose outside the grid")

    yaw = sensor_pose.yaw
    angles = params.angles + yaw
    lo = grid.log_odds
    for rng, ang in zip(scan.ranges, angles):
        hit = math.isfinite(rng)
        r = rng if hit else params.range_max
        ex = ox + r * math.cos(ang)
        ey = oy + r * math.sin(ang)
        ix1, iy1 = grid.cell_of(ex, ey)
        cells = list(_bresenham(ix0, iy0, ix1, iy1))
        for cx, cy in (cells[:-1] if hit else cells):
            if grid.contains(cx, cy):
                lo[cy, cx] = max(LOG_ODDS_MIN, lo[cy, cx] - l_free)
        if hit and grid.contains(ix1, iy1):
            lo[iy1, ix1] = min(LOG_ODDS_MAX, lo[iy1, ix1] + l_occ)
    return grid


def pcd_to_scan(cloud: PointCloud, z_band: tuple[float, float],
                params: Lidar2DParams, pose: SE3 | None = None,
                stamp: float | None = None) -> Scan2D:
    """Collapse a sensor-frame point cloud into a planar scan.

    Points with z inside ``z_band`` are binned by azimuth onto the scan's
    angular grid; each bin keeps the minimum planar range. Empty bins read
    infinity. ``pose`` is stamped onto the resulting scan so it can feed
    the same mapping path as a native 2D scan.
    """
    z_lo, z_hi = z_band
    if not z_lo < z_hi:
        raise ValueError("z band must satisfy z_lo < z_hi")
    n = params.n_rays
    ranges = np.full(n, np.inf)
    pts = cloud.points
    if len(pts):
        mask = (pts[:, 2] >= z_lo) & (pts[:, 2] <= z_hi)
        pts = pts[mask]
    for x, y, _ in pts:
        r = math.hypot(x, y)
        if r < params.range_min or r > params.range_max:
            continue
        rel = math.atan2(y, x) - params.angle_min
        rel -= _TWO_PI * math.floor(rel / _TWO_PI)
        idx = int(round(rel / params.angle_res))
        if idx == int(round(_TWO_PI / params.angle_res)):
            idx = 0  # full-circle wrap onto the first bin
        if idx >= n:
            continue
        if abs(rel - idx * params.angle_res) > params.angle_res / 2 + 1e-9:
            continue
        if r < ranges[idx]:
            ranges[idx] = r
    return Scan2D(ranges, cloud.stamp if stamp is None else stamp,
                  pose or SE3.identity())
