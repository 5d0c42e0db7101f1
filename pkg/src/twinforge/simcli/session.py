"""The assembled simulation: plant, sensors, mapper, and recorder.

A session owns one vehicle in one world and advances them with explicit
commands. The headless runner and the network bridge both drive this
object; it never touches wall-clock time, files, or sockets itself, so a
session stepped twice with the same inputs produces identical snapshots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..autonomy import (
    ModeChangeError, OccupancyGrid, OperationalMode, Trajectory,
    pcd_to_scan, record_waypoint, set_mode, update_occupancy,
)
from ..sensors import EncoderParams, encoder_read, ins_read, lidar2d_scan, lidar3d_scan
from ..vehicle import (
    Commands, KinematicState, VehicleParams, initial_state, kinematic_step,
    load_profile, vehicle_step,
)
from ..worldcore import SE3, World, compose
from .scenario import Scenario
from ..worldcore.world import load_world


class DeadReckoning:
    """Odometry from quantized encoder ticks plus integrated gyro yaw."""

    def __init__(self, wheel_radius: float, encoder: EncoderParams,
                 pose0: tuple[float, float, float]):
        self.wheel_radius = wheel_radius
        self.encoder = encoder
        self.x, self.y, self.yaw = pose0
        self._prev_ticks: np.ndarray | None = None

    def update(self, revolutions: np.ndarray, gyro_z: float, dt: float) -> None:
        ticks = np.array([encoder_read(r, self.encoder) for r in revolutions],
                         dtype=float)
        if self._prev_ticks is None:
            self._prev_ticks = ticks
            return
        d_rev = (ticks - self._prev_ticks) / (self.encoder.ppr * self.encoder.cgr)
        self._prev_ticks = ticks
        dist = float(np.mean(d_rev)) * 2.0 * math.pi * self.wheel_radius
        mid_yaw = self.yaw + 0.5 * gyro_z * dt
        self.x += dist * math.cos(mid_yaw)
        self.y += dist * math.sin(mid_yaw)
        self.yaw += gyro_z * dt

    @property
    def pose(self) -> tuple[float, float, float]:
        return self.x, self.y, self.yaw


@dataclass
class Snapshot:
    step: int
    time: float
    x: float
    y: float
    z: float
    yaw: float
    speed: float
    vx: float
    vy: float
    yaw_rate: float
    gear: int
    rpm: float
    commands: Commands
    scan_ranges: np.ndarray | None = None
    grid_dirty: tuple[int, int, int, int] | None = None  # x0, y0, w, h (cells)
    tracker_status: str | None = None

    def finite(self) -> bool:
        vals = (self.x, self.y, self.z, self.yaw, self.speed,
                self.vx, self.vy, self.yaw_rate)
        return all(math.isfinite(v) for v in vals)


class SimSession:
    def __init__(self, scenario: Scenario, world: World | None = None,
                 params: VehicleParams | None = None,
                 mapping_enabled: bool | None = None):
        self.scenario = scenario
        self.world = world if world is not None else load_world(scenario.world_file)
        self.params = params if params is not None else load_profile(scenario.vehicle)
        self.mode = scenario.mode
        self.routing = set_mode(self.mode)
        self.dt = scenario.dt
        self.rng = np.random.default_rng(scenario.seed)

        x0, y0, yaw0 = scenario.start
        self.kin_state = KinematicState(x0, y0, yaw0)
        self.vehicle_state = initial_state(self.params, x0, y0, yaw0)
        self._prev_velocity = np.zeros(3)

        self.lidar = scenario.lidar
        self.lidar3d = scenario.lidar3d
        self.scan_every = max(1, int(round(1.0 / (self.lidar.rate * self.dt))))
        g = scenario.grid
        self.grid = OccupancyGrid.create(g.width, g.height, g.resolution,
                                         g.origin)
        self.mapping_enabled = (scenario.stage == "map"
                                if mapping_enabled is None else mapping_enabled)
        self.map_cloud_world: list[np.ndarray] = []

        self.trajectory = Trajectory(loop=scenario.record_loop,
                                     spacing=scenario.record_spacing)
        self.recording = scenario.stage == "record"

        self.odometry: DeadReckoning | None = None
        if scenario.localization == "odometry":
            if self.routing.plant != "dynamic":
                raise ModeChangeError("odometry localization needs wheel dynamics")
            self.odometry = DeadReckoning(
                self.params.powertrain.wheel_radius,
                EncoderParams(ppr=2048, cgr=1.0), scenario.start)

        self.step_count = 0
        self.time = 0.0
        self.tracking_active = False
        self.last_scan = None
        self.last_cloud = None

    # -- state access --------------------------------------------------------

    def ground_truth_pose(self) -> tuple[float, float, float]:
        if self.routing.plant == "kinematic":
            s = self.kin_state
            return s.x, s.y, s.yaw
        return self.vehicle_state.planar_pose

    def pose(self) -> tuple[float, float, float]:
        """Localization estimate used by the pipeline stages."""
        if self.odometry is not None and self.odometry._prev_ticks is not None:
            return self.odometry.pose
        return self.ground_truth_pose()

    def speed(self) -> float:
        if self.routing.plant == "kinematic":
            return self.kin_state.speed
        return self.vehicle_state.speed

    def set_mode(self, mode: OperationalMode) -> None:
        self.routing = set_mode(mode, tracking_active=self.tracking_active)
        self.mode = OperationalMode(mode)

    def set_recording(self, on: bool) -> None:
        self.recording = bool(on)

    # -- stepping --------------------------------------------------------------

    def step(self, commands: Commands) -> Snapshot:
        if self.routing.plant == "kinematic":
            self.kin_state = kinematic_step(self.kin_state, commands,
                                            self.params, self.dt)
            x, y, yaw = self.kin_state.x, self.kin_state.y, self.kin_state.yaw
            z = 0.0
            speed = self.kin_state.speed
            vx, vy = speed, 0.0
            yaw_rate = speed * math.tan(self.kin_state.steer) / \
                self.params.steering.wheelbase
            gear, rpm = 0, 0.0
        else:
            self.vehicle_state = vehicle_step(self.vehicle_state, commands,
                                              self.world, self.params, self.dt)
            vs = self.vehicle_state
            x, y, yaw = vs.planar_pose
            z = float(vs.body.pose.translation[2])
            yaw_rate = float(vs.body.angular_velocity[2])
            cy, sy = math.cos(yaw), math.sin(yaw)
            wvx, wvy = float(vs.body.velocity[0]), float(vs.body.velocity[1])
            vx = cy * wvx + sy * wvy
            vy = -sy * wvx + cy * wvy
            speed = vx
            gear, rpm = vs.powertrain.gear, vs.powertrain.rpm

            if self.odometry is not None:
                _, imu = ins_read(vs.body, self._prev_velocity, self.dt)
                self.odometry.update(vs.revolutions, float(imu.gyro[2]), self.dt)
            self._prev_velocity = np.array(vs.body.velocity)

        self.step_count += 1
        self.time += self.dt

        scan_ranges = None
        dirty = None
        if self.step_count % self.scan_every == 0:
            scan_ranges, dirty = self._sense_and_map()

        if self.recording:
            record_waypoint(self.trajectory, self.pose(), speed)

        return Snapshot(self.step_count, self.time, x, y, z, yaw, speed,
                        vx, vy, yaw_rate, gear, rpm, commands,
                        scan_ranges, dirty,
                        "tracking" if self.tracking_active else None)

    def _sense_and_map(self):
        x, y, yaw = self.ground_truth_pose()
        z = 0.0 if self.routing.plant == "kinematic" else \
            float(self.vehicle_state.body.pose.translation[2]) - self.params.com_height
        vehicle_pose = SE3.from_xyz_yaw(x, y, z, yaw)

        if self.lidar3d is not None:
            cloud = lidar3d_scan(self.world, vehicle_pose, self.lidar3d,
                                 stamp=self.time)
            sensor_pose = compose(vehicle_pose, self.lidar3d.mount)
            scan = pcd_to_scan(cloud, self.scenario.z_band, self.lidar3d,
                               pose=sensor_pose, stamp=self.time)
            self.last_cloud = cloud
            if self.mapping_enabled and len(cloud.points) \
                    and self.step_count % (self.scan_every * 10) == 0:
                self.map_cloud_world.append(sensor_pose.apply(cloud.points))
            scan_params = self.lidar3d
        else:
            scan = lidar2d_scan(self.world, vehicle_pose, self.lidar,
                                stamp=self.time)
            scan_params = self.lidar
        self.last_scan = scan

        dirty = None
        if self.mapping_enabled:
            sensor_pose = scan.pose
            ix, iy = self.grid.cell_of(float(sensor_pose.translation[0]),
                                       float(sensor_pose.translation[1]))
            if self.grid.contains(ix, iy):  # skip updates while off the map
                update_occupancy(self.grid, sensor_pose, scan, scan_params,
                                 self.scenario.l_occ, self.scenario.l_free)
                dirty = self._dirty_bbox(sensor_pose, scan, scan_params)
        return scan.ranges, dirty

    def _dirty_bbox(self, sensor_pose: SE3, scan, params):
        ox, oy = float(sensor_pose.translation[0]), float(sensor_pose.translation[1])
        yaw = sensor_pose.yaw
        angles = params.angles + yaw
        r = np.where(np.isfinite(scan.ranges), scan.ranges, params.range_max)
        xs = np.concatenate([[ox], ox + r * np.cos(angles)])
        ys = np.concatenate([[oy], oy + r * np.sin(angles)])
        x0, y0 = self.grid.cell_of(xs.min(), ys.min())
        x1, y1 = self.grid.cell_of(xs.max(), ys.max())
        x0, y0 = max(0, x0), max(0, y0)
        x1 = min(self.grid.width - 1, x1)
        y1 = min(self.grid.height - 1, y1)
        if x1 < x0 or y1 < y0:
            return None
        return (x0, y0, x1 - x0 + 1, y1 - y0 + 1)
