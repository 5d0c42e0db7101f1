"""Deterministic scenario execution: the map/record/track stages and replay."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..autonomy import TrackerState, Trajectory, Waypoint
from ..autonomy.tracking import pid_speed_step, pure_pursuit_step, select_target, \
    target_speed
from ..sensors import PointCloud
from ..vehicle import Commands, load_profile
from .io import (atomic_write_text, fmt, load_command_log, load_trajectory,
                 save_cloud, save_grid, save_trajectory)
from .scenario import Scenario, ScenarioError, TrackerConfig
from .session import SimSession

LOG_COLUMNS = ("step,time,x,y,z,yaw,speed,vx,vy,yaw_rate,gear,rpm,"
               "throttle,steering,brake,handbrake")


@dataclass
class RunResult:
    exit_code: int
    artifacts: dict = field(default_factory=dict)
    steps_run: int = 0
    tracker_terminated: bool = False


class Autopilot:
    """Closed-loop tracking of a reference trajectory (stage 3 controller)."""

    def __init__(self, traj: Trajectory, cfg: TrackerConfig, wheelbase: float,
                 steer_limit: float):
        traj.validate()
        self.traj = traj
        self.tracker = TrackerState(
            lookahead=cfg.lookahead, kp=cfg.kp, ki=cfg.ki, kd=cfg.kd,
            term_tol=cfg.term_tol, integral_limit=cfg.integral_limit)
        self.wheelbase = wheelbase
        self.steer_limit = steer_limit

    @property
    def terminated(self) -> bool:
        return self.tracker.terminated

    def commands(self, pose, speed: float, dt: float) -> Commands:
        select_target(pose, self.traj, self.tracker)
        delta = pure_pursuit_step(pose, speed, self.traj, self.tracker,
                                  self.wheelbase, self.steer_limit)
        v_ref = target_speed(self.traj, self.tracker)
        throttle, brake = pid_speed_step(speed, v_ref, self.tracker, dt)
        if self.terminated:
            # safe termination: no steering, brake to rest
            return Commands(throttle=0.0, steering=0.0, brake=max(brake, 0.5))
        return Commands(throttle=throttle,
                        steering=delta / self.steer_limit,
                        brake=brake)


class CommandLogSource:
    """Replays a recorded command log; absent steps hold the last command."""

    def __init__(self, rows, n_steps: int):
        for step, _ in rows:
            if step < 0 or step >= n_steps:
                raise ScenarioError(
                    f"command log step {step} outside the run ({n_steps} steps)")
        self.rows = rows
        self._idx = 0
        self._current = Commands()

    def at(self, step: int) -> Commands:
        while self._idx < len(self.rows) and self.rows[self._idx][0] <= step:
            self._current = self.rows[self._idx][1]
            self._idx += 1
        return self._current


def route_trajectory(points, speed: float, loop: bool) -> Trajectory:
    wps = [Waypoint(x, y, 0.0, speed) for x, y in points]
    spacing = min(math.hypot(b.x - a.x, b.y - a.y)
                  for a, b in zip(wps, wps[1:])) if len(wps) > 1 else 0.1
    return Trajectory(wps, loop=loop, spacing=spacing)


def cross_track_error(pose, traj: Trajectory) -> float:
    """Distance from the pose to the trajectory polyline."""
    p = np.array(pose[:2])
    pts = np.array([[w.x, w.y] for w in traj.waypoints])
    if len(pts) == 1:
        return float(np.linalg.norm(p - pts[0]))
    segs = list(zip(pts[:-1], pts[1:]))
    if traj.loop:
        segs.append((pts[-1], pts[0]))
    best = math.inf
    for a, b in segs:
        ab = b - a
        denom = float(ab @ ab)
        t = 0.0 if denom == 0 else max(0.0, min(1.0, float((p - a) @ ab) / denom))
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    return best


def _log_row(snap, extra: float | None = None) -> str:
    c = snap.commands
    cells = [str(snap.step)]
    cells += [fmt(v) for v in (snap.time, snap.x, snap.y, snap.z, snap.yaw,
                               snap.speed, snap.vx, snap.vy, snap.yaw_rate)]
    cells.append(str(snap.gear))
    cells.append(fmt(snap.rpm))
    cells += [fmt(c.throttle), fmt(c.steering), fmt(c.brake),
              "1" if c.handbrake else "0"]
    if extra is not None:
        cells.append(fmt(extra))
    return ",".join(cells)


def run_scenario(scenario: Scenario,
                 command_rows: list | None = None) -> RunResult:
    """Run one scenario to completion and write its artifacts.

    Raises ScenarioError with exit_code 2 for validation problems and 3
    when the simulation state diverges (goes non-finite). Artifacts are
    written through atomic renames only after the loop finishes, so a
    failed run leaves nothing partial behind.
    """
    if scenario.mode.value == "testbed":
        raise ScenarioError("testbed mode needs a live bridge; use 'serve'")
    params = load_profile(scenario.vehicle)
    session = SimSession(scenario, params=params)

    autopilot = None
    reference = None
    if scenario.stage == "track":
        if scenario.trajectory_file is None:
            raise ScenarioError("track stage needs a trajectory file")
        try:
            reference = load_trajectory(scenario.trajectory_file,
                                        spacing=scenario.record_spacing)
            autopilot = Autopilot(reference, scenario.tracker,
                                  params.steering.wheelbase,
                                  params.steering.limit)
        except ValueError as e:
            raise ScenarioError(f"empty trajectory: {e}") from None
        session.tracking_active = True
    elif scenario.route is not None:
        autopilot = Autopilot(
            route_trajectory(scenario.route.points, scenario.route.speed,
                             scenario.route.loop),
            scenario.tracker, params.steering.wheelbase, params.steering.limit)

    log_source = None
    rows = command_rows
    if rows is None and scenario.commands_file is not None:
        rows = load_command_log(scenario.commands_file)
    if rows is not None and autopilot is None:
        log_source = CommandLogSource(rows, scenario.n_steps)

    header = LOG_COLUMNS + (",cross_track" if scenario.stage == "track" else "")
    lines = [header]
    commands = Commands()
    steps_run = 0
    for k in range(scenario.n_steps):
        if autopilot is not None:
            commands = autopilot.commands(session.pose(), session.speed(),
                                          scenario.dt)
        elif log_source is not None:
            commands = log_source.at(k)
        snap = session.step(commands)
        if not snap.finite():
            raise ScenarioError(f"divergence at step {k}: non-finite state",
                                exit_code=3)
        extra = None
        if scenario.stage == "track":
            extra = cross_track_error((snap.x, snap.y), reference)
        lines.append(_log_row(snap, extra))
        steps_run = k + 1
        if (scenario.stage == "track" and autopilot.terminated
                and abs(session.speed()) < 0.02):
            break

    out = Path(scenario.out_dir)
    artifacts = {}
    log_path = out / "state_log.csv"
    atomic_write_text(log_path, "\n".join(lines) + "\n")
    artifacts["state_log"] = log_path

    if scenario.stage == "map":
        map_path = out / "map.pgm"
        save_grid(session.grid, map_path)
        artifacts["map"] = map_path
        artifacts["map_meta"] = map_path.with_suffix(".json")
        if session.map_cloud_world:
            cloud = PointCloud(np.concatenate(session.map_cloud_world), 0.0)
            pcd_path = out / "map_cloud.pcd"
            save_cloud(cloud, pcd_path)
            artifacts["map_cloud"] = pcd_path
    elif scenario.stage == "record":
        if not session.trajectory.waypoints:
            raise ScenarioError("recording produced no waypoints")
        traj_path = out / "trajectory.csv"
        save_trajectory(session.trajectory, traj_path)
        artifacts["trajectory"] = traj_path

    return RunResult(0, artifacts, steps_run,
                     autopilot.terminated if autopilot else False)


def replay(command_log_path, scenario: Scenario) -> RunResult:
    """Re-run a recorded teleop session; output logs are bit-reproducible."""
    rows = load_command_log(command_log_path)
    return run_scenario(scenario, command_rows=rows)
