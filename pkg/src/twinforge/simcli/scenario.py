"""Scenario configuration: everything one deterministic run needs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..autonomy import OperationalMode
from ..sensors import Lidar2DParams, Lidar3DParams
from ..worldcore import SE3

STAGES = ("map", "record", "track")


class ScenarioError(RuntimeError):
    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass
class GridConfig:
    width: int = 120
    height: int = 120
    resolution: float = 0.1
    origin: tuple[float, float] = (-6.0, -6.0)


@dataclass
class TrackerConfig:
    lookahead: float = 1.0
    kp: float = 0.8
    ki: float = 0.2
    kd: float = 0.0
    term_tol: float = 0.5
    integral_limit: float = 2.0


@dataclass
class RouteConfig:
    points: list          # [(x, y), ...] scripted-driver waypoints
    speed: float = 1.0
    loop: bool = False


@dataclass
class Scenario:
    world_file: Path
    vehicle: str
    mode: OperationalMode = OperationalMode.SIM
    dt: float = 0.01
    duration: float = 30.0
    seed: int = 0
    stage: str | None = None
    out_dir: Path = Path("out")
    start: tuple[float, float, float] = (0.0, 0.0, 0.0)
    commands_file: Path | None = None
    route: RouteConfig | None = None
    trajectory_file: Path | None = None
    lidar: Lidar2DParams | None = None
    lidar3d: Lidar3DParams | None = None
    z_band: tuple[float, float] = (-0.1, 0.5)
    grid: GridConfig = field(default_factory=GridConfig)
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    record_spacing: float = 0.5
    record_loop: bool = False
    l_occ: float = 0.85
    l_free: float = 0.4
    localization: str = "ground_truth"   # or "odometry"

    def __post_init__(self):
        if self.dt <= 0:
            raise ScenarioError("dt must be > 0")
        if self.stage is not None and self.stage not in STAGES:
            raise ScenarioError(f"unknown stage {self.stage!r}")
        if self.localization not in ("ground_truth", "odometry"):
            raise ScenarioError(f"unknown localization {self.localization!r}")
        if self.lidar is None:
            self.lidar = _lidar2d_from({})

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


def _mount_from(cfg) -> SE3:
    x, y, z, yaw = (list(cfg) + [0.0] * 4)[:4]
    return SE3.from_xyz_yaw(x, y, z, yaw)


def _lidar2d_from(cfg: dict) -> Lidar2DParams:
    return Lidar2DParams(
        mount=_mount_from(cfg.get("mount", [0.0, 0.0, 0.2, 0.0])),
        range_min=cfg.get("range_min", 0.1),
        range_max=cfg.get("range_max", 12.0),
        angle_min=math.radians(cfg.get("angle_min_deg", -180.0)),
        angle_max=math.radians(cfg.get("angle_max_deg", 179.0)),
        angle_res=math.radians(cfg.get("angle_res_deg", 1.0)),
        rate=cfg.get("rate", 10.0),
    )


def _lidar3d_from(cfg: dict) -> Lidar3DParams:
    base = _lidar2d_from(cfg)
    return Lidar3DParams(
        mount=base.mount, range_min=base.range_min, range_max=base.range_max,
        angle_min=base.angle_min, angle_max=base.angle_max,
        angle_res=base.angle_res, rate=base.rate,
        elev_min=math.radians(cfg.get("elev_min_deg", -10.0)),
        elev_max=math.radians(cfg.get("elev_max_deg", 10.0)),
        elev_res=math.radians(cfg.get("elev_res_deg", 5.0)),
    )


def load_scenario(path, out_dir=None, mode=None) -> Scenario:
    """Parse a scenario JSON file; paths resolve relative to the file."""
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path}: invalid JSON: {e}") from None
    base = path.parent

    def resolve(key):
        if cfg.get(key) is None:
            return None
        return (base / cfg[key]).resolve()

    world_file = resolve("world")
    if world_file is None:
        raise ScenarioError(f"{path}: missing 'world'")
    if not world_file.exists():
        raise ScenarioError(f"world file not found: {world_file}")
    for key in ("commands", "trajectory"):
        p = resolve(key)
        if p is not None and not p.exists():
            raise ScenarioError(f"{key} file not found: {p}")

    route = None
    if cfg.get("route"):
        r = cfg["route"]
        route = RouteConfig(points=[tuple(p) for p in r["points"]],
                            speed=r.get("speed", 1.0),
                            loop=r.get("loop", False))

    grid = GridConfig(**cfg.get("grid", {})) if cfg.get("grid") else GridConfig()
    if isinstance(grid.origin, list):
        grid.origin = tuple(grid.origin)
    tracker = TrackerConfig(**cfg.get("tracker", {}))
    record = cfg.get("record", {})

    return Scenario(
        world_file=world_file,
        vehicle=cfg.get("vehicle", "f1tenth"),
        mode=OperationalMode(mode or cfg.get("mode", "sim")),
        dt=cfg.get("dt", 0.01),
        duration=cfg.get("duration", 30.0),
        seed=cfg.get("seed", 0),
        stage=cfg.get("stage"),
        out_dir=Path(out_dir or cfg.get("out_dir", "out")),
        start=tuple(cfg.get("start", (0.0, 0.0, 0.0))),
        commands_file=resolve("commands"),
        route=route,
        trajectory_file=resolve("trajectory"),
        lidar=_lidar2d_from(cfg["lidar"]) if cfg.get("lidar") else _lidar2d_from({}),
        lidar3d=_lidar3d_from(cfg["lidar3d"]) if cfg.get("lidar3d") else None,
        z_band=tuple(cfg.get("z_band", (-0.1, 0.5))),
        grid=grid,
        tracker=tracker,
        record_spacing=record.get("spacing", 0.5),
        record_loop=record.get("loop", False),
        l_occ=cfg.get("mapping", {}).get("l_occ", 0.85),
        l_free=cfg.get("mapping", {}).get("l_free", 0.4),
        localization=cfg.get("localization", "ground_truth"),
    )
