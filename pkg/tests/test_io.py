import math

import numpy as np
import pytest

from twinforge.autonomy import CLASS_FREE, CLASS_OCCUPIED, CLASS_UNKNOWN, OccupancyGrid
from twinforge.autonomy.trajectory import Trajectory, Waypoint
from twinforge.sensors import PointCloud
from twinforge.simcli import (
    load_command_log, load_grid, load_trajectory, save_cloud,
    save_command_log, save_grid, save_trajectory,
)
from twinforge.vehicle import Commands


class TestGridIO:
    def test_all_unknown_grid_is_205(self, tmp_path):
        grid = OccupancyGrid.create(8, 6, 0.1, (0.0, 0.0))
        path = tmp_path / "map.pgm"
        save_grid(grid, path)
        raw = path.read_bytes()
        header, pixels = raw.split(b"255\n", 1)
        assert header.startswith(b"P5")
        assert all(b == 205 for b in pixels)

    def test_round_trip_is_class_exact(self, tmp_path):
        rng = np.random.default_rng(43)
        grid = OccupancyGrid.create(30, 20, 0.25, (-2.0, -1.0))
        grid.log_odds[:] = rng.uniform(-4, 4, grid.log_odds.shape)
        path = tmp_path / "map.pgm"
        save_grid(grid, path)
        loaded = load_grid(path)
        np.testing.assert_array_equal(loaded.classify(), grid.classify())
        assert loaded.resolution == grid.resolution
        assert tuple(loaded.origin) == grid.origin
        # a second round trip is byte-stable
        path2 = tmp_path / "map2.pgm"
        save_grid(loaded, path2)
        assert path2.read_bytes() == path.read_bytes()

    def test_known_classes_to_pixels(self, tmp_path):
        grid = OccupancyGrid.create(3, 1, 0.5, (0.0, 0.0))
        grid.log_odds[0] = [2.0, -2.0, 0.0]
        path = tmp_path / "m.pgm"
        save_grid(grid, path)
        loaded = load_grid(path)
        assert loaded.classify()[0].tolist() == [CLASS_OCCUPIED, CLASS_FREE,
                                                 CLASS_UNKNOWN]

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P6\n4 4\n255\n" + bytes(48))
        (tmp_path / "bad.json").write_text('{"resolution":0.1,"origin":[0,0]}')
        with pytest.raises(ValueError, match="bad map file"):
            load_grid(path)
        path.write_bytes(b"P5\n4 4\n255\n" + bytes(3))  # truncated
        with pytest.raises(ValueError, match="bad map file"):
            load_grid(path)


class TestTrajectoryIO:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(47)
        wps = [Waypoint(*rng.uniform(-50, 50, 2), rng.uniform(-math.pi, math.pi),
                        rng.uniform(0, 5)) for _ in range(100)]
        traj = Trajectory(wps, loop=True, spacing=1e-6)
        path = tmp_path / "traj.csv"
        save_trajectory(traj, path)
        loaded = load_trajectory(path, spacing=1e-6)
        assert loaded.loop is True
        assert len(loaded) == 100
        for a, b in zip(loaded.waypoints, wps):
            assert abs(a.x - b.x) < 1e-9
            assert abs(a.y - b.y) < 1e-9
            assert abs(a.yaw - b.yaw) < 1e-9
            assert abs(a.speed - b.speed) < 1e-9

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("x,y,yaw,speed\n")
        with pytest.raises(ValueError, match="no waypoints"):
            load_trajectory(path)

    def test_missing_loop_comment_defaults_false(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("x,y,yaw,speed\n0,0,0,1\n")
        assert load_trajectory(path).loop is False

    def test_malformed_row_reports_line(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("x,y,yaw,speed\n0,0,0,1\n1,zzz,0,1\n")
        with pytest.raises(ValueError, match=":3"):
            load_trajectory(path)
        path.write_text("x,y,yaw,speed\n0,0,0\n")
        with pytest.raises(ValueError, match="4 columns"):
            load_trajectory(path)


def parse_pcd(path):
    """Independent minimal ASCII PCD reader used as the oracle."""
    header = {}
    points = []
    in_data = False
    for line in open(path):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if in_data:
            points.append([float(v) for v in line.split()])
            continue
        key, _, val = line.partition(" ")
        header[key] = val
        if key == "DATA":
            assert val == "ascii"
            in_data = True
    return header, np.array(points).reshape(-1, 3)


class TestCloudIO:
    def test_empty_cloud(self, tmp_path):
        path = tmp_path / "c.pcd"
        save_cloud(PointCloud(np.zeros((0, 3)), 0.0), path)
        header, pts = parse_pcd(path)
        assert header["POINTS"] == "0"
        assert header["FIELDS"] == "x y z"
        assert len(pts) == 0

    def test_single_point(self, tmp_path):
        path = tmp_path / "c.pcd"
        save_cloud(PointCloud(np.array([[1.5, -2.25, 0.125]]), 0.0), path)
        header, pts = parse_pcd(path)
        assert header["POINTS"] == "1"
        np.testing.assert_array_equal(pts[0], [1.5, -2.25, 0.125])

    def test_reload_identical_coordinates(self, tmp_path):
        rng = np.random.default_rng(53)
        cloud = PointCloud(rng.uniform(-30, 30, (500, 3)), 0.0)
        path = tmp_path / "c.pcd"
        save_cloud(cloud, path)
        header, pts = parse_pcd(path)
        assert header["VERSION"] == "0.7"
        assert int(header["WIDTH"]) == 500 and int(header["HEIGHT"]) == 1
        np.testing.assert_array_equal(pts, cloud.points)  # 17 sig digits round-trip


class TestCommandLogIO:
    def test_round_trip(self, tmp_path):
        rows = [(0, Commands(0.5, -0.2, 0.0, False)),
                (10, Commands(1.0, 0.0, 0.0, True)),
                (25, Commands(0.0, 0.0, 1.0, False))]
        path = tmp_path / "cmd.csv"
        save_command_log(rows, path)
        loaded = load_command_log(path)
        assert loaded == rows

    def test_non_increasing_steps_rejected(self, tmp_path):
        path = tmp_path / "cmd.csv"
        path.write_text("step,throttle,steering,brake,handbrake\n"
                        "5,0,0,0,0\n5,1,0,0,0\n")
        with pytest.raises(ValueError, match="must increase"):
            load_command_log(path)
