"""On-disk formats: PGM occupancy maps, trajectory/command CSVs, ASCII PCD.

All writers go through a write-to-temp + atomic-rename so a failed run
never leaves a partial artifact behind. Floats are serialized with 17
significant digits, which round-trips IEEE doubles exactly and keeps
replay logs hashable.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from ..autonomy import CLASS_FREE, CLASS_OCCUPIED, CLASS_UNKNOWN, OccupancyGrid
from ..autonomy.trajectory import Trajectory, Waypoint
from ..sensors import PointCloud
from ..vehicle import Commands

PGM_OCCUPIED = 0
PGM_FREE = 254
PGM_UNKNOWN = 205

_CLASS_TO_PGM = {CLASS_OCCUPIED: PGM_OCCUPIED, CLASS_FREE: PGM_FREE,
                 CLASS_UNKNOWN: PGM_UNKNOWN}
_PGM_TO_LOG_ODDS = {PGM_OCCUPIED: 1.0, PGM_FREE: -1.0, PGM_UNKNOWN: 0.0}


def fmt(x: float) -> str:
    """17-significant-digit float serialization ('inf' for misses)."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def atomic_write_bytes(path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode())


# -- occupancy grids: binary 8-bit PGM plus a JSON metadata sidecar --------

def _sidecar_path(pgm_path) -> Path:
    return Path(pgm_path).with_suffix(".json")


def save_grid(grid: OccupancyGrid, path) -> None:
    """P5 PGM: occupied 0, free 254, unknown 205; row 0 is the top (max y)."""
    classes = grid.classify()
    pixels = np.full(classes.shape, PGM_UNKNOWN, dtype=np.uint8)
    for cls, val in _CLASS_TO_PGM.items():
        pixels[classes == cls] = val
    pixels = pixels[::-1, :]  # image rows top-down, grid rows bottom-up
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode()
    atomic_write_bytes(path, header + pixels.tobytes())
    meta = {
        "resolution": grid.resolution,
        "origin": list(grid.origin),
        "width": grid.width,
        "height": grid.height,
        "occupied_threshold": 0.5,
        "free_threshold": -0.5,
    }
    atomic_write_text(_sidecar_path(path), json.dumps(meta, indent=2) + "\n")


def load_grid(path) -> OccupancyGrid:
    """Rebuild the thresholded grid classes from a PGM + sidecar pair."""
    raw = Path(path).read_bytes()
    try:
        magic, rest = raw.split(None, 1)
        if magic != b"P5":
            raise ValueError
        fields = []
        while len(fields) < 3:
            token, rest = rest.split(None, 1)
            if token.startswith(b"#"):
                rest = rest.split(b"\n", 1)[1]
                continue
            fields.append(int(token))
        width, height, maxval = fields
        if maxval != 255:
            raise ValueError
        data = rest[:width * height]
        if len(data) != width * height:
            raise ValueError
    except (ValueError, IndexError):
        raise ValueError("bad map file") from None

    meta = json.loads(_sidecar_path(path).read_text())
    pixels = np.frombuffer(data, dtype=np.uint8).reshape(height, width)[::-1, :]
    log_odds = np.zeros(pixels.shape)
    # nearest-class mapping keeps foreign PGMs loadable
    log_odds[pixels <= 102] = _PGM_TO_LOG_ODDS[PGM_OCCUPIED]
    log_odds[pixels >= 230] = _PGM_TO_LOG_ODDS[PGM_FREE]
    return OccupancyGrid(meta["resolution"], tuple(meta["origin"]), log_odds)


# -- trajectories: CSV with a trailing loop-flag comment --------------------

def save_trajectory(traj: Trajectory, path) -> None:
    lines = ["x,y,yaw,speed"]
    lines += [",".join(fmt(v) for v in (w.x, w.y, w.yaw, w.speed))
              for w in traj.waypoints]
    lines.append(f"# loop={'true' if traj.loop else 'false'}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_trajectory(path, spacing: float = 0.5) -> Trajectory:
    loop = False
    waypoints = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            flag = line.lstrip("#").strip()
            if flag.startswith("loop="):
                loop = flag.split("=", 1)[1].lower() == "true"
            continue
        if line.lower().startswith("x,"):
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 columns")
        try:
            x, y, yaw, speed = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad number") from None
        waypoints.append(Waypoint(x, y, yaw, speed))
    if not waypoints:
        raise ValueError("no waypoints")
    return Trajectory(waypoints, loop=loop, spacing=spacing)


# -- point clouds: ASCII PCD v0.7 -------------------------------------------

def save_cloud(cloud: PointCloud, path) -> None:
    n = len(cloud.points)
    header = (
        "# .PCD v0.7 - Point Cloud Data file format\n"
        "VERSION 0.7\n"
        "FIELDS x y z\n"
        "SIZE 4 4 4\n"
        "TYPE F F F\n"
        "COUNT 1 1 1\n"
        f"WIDTH {n}\n"
        "HEIGHT 1\n"
        "VIEWPOINT 0 0 0 1 0 0 0\n"
        f"POINTS {n}\n"
        "DATA ascii\n"
    )
    body = "".join(f"{fmt(x)} {fmt(y)} {fmt(z)}\n" for x, y, z in cloud.points)
    atomic_write_text(path, header + body)


# -- teleop command logs -----------------------------------------------------

def save_command_log(rows: list[tuple[int, Commands]], path) -> None:
    lines = ["step,throttle,steering,brake,handbrake"]
    for step, cmd in rows:
        lines.append(f"{step},{fmt(cmd.throttle)},{fmt(cmd.steering)},"
                     f"{fmt(cmd.brake)},{1 if cmd.handbrake else 0}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_command_log(path) -> list[tuple[int, Commands]]:
    rows: list[tuple[int, Commands]] = []
    prev = -1
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("step,"):
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 5 columns")
        step = int(parts[0])
        if step <= prev:
            raise ValueError(f"{path}:{lineno}: step indices must increase")
        prev = step
        rows.append((step, Commands(float(parts[1]), float(parts[2]),
                                    float(parts[3]), parts[4].strip() == "1")))
    return rows
