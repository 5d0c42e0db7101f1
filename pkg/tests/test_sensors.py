import math

import numpy as np
import pytest

from twinforge.sensors import (
    CameraParams, EncoderParams, ImuReading, InsNoise, Lidar2DParams,
    Lidar3DParams, actuator_feedback, camera_project, encoder_read,
    ins_read, lidar2d_scan, lidar3d_scan,
)
from twinforge.worldcore import RigidBodyState, SE3, Wall, World, compose
from twinforge.worldcore.world import box_room


class TestActuatorFeedback:
    def test_noiseless_passthrough(self):
        assert actuator_feedback(0.42, -0.13) == (0.42, -0.13)

    def test_reports_actuator_state_not_command(self):
        # caller passes the post-slew state; a mid-slew value comes back as is
        t, s = actuator_feedback(0.2, 0.05)
        assert s == 0.05

    def test_noise_statistics(self):
        rng = np.random.default_rng(7)
        sigma = 0.05
        reads = [actuator_feedback(0.5, 0.0, sigma_throttle=sigma, rng=rng)[0]
                 for _ in range(10_000)]
        assert abs(np.mean(reads) - 0.5) < 3 * sigma / 100.0


class TestEncoders:
    PARAMS = EncoderParams(ppr=16, cgr=120.0)

    def test_direct_product(self):
        assert encoder_read(2.5, self.PARAMS) == 4800

    def test_zero(self):
        assert encoder_read(0.0, self.PARAMS) == 0

    def test_quantization(self):
        one_tick = 1.0 / (16 * 120.0)
        assert encoder_read(one_tick * 0.999, self.PARAMS) == 0
        assert encoder_read(one_tick * 1.001, self.PARAMS) == 1

    def test_monotone_on_forward_roll(self):
        rng = np.random.default_rng(9)
        rev, prev = 0.0, 0
        for _ in range(200):
            rev += rng.uniform(0.0, 0.01)
            ticks = encoder_read(rev, self.PARAMS)
            assert ticks >= prev
            prev = ticks


class TestIns:
    def test_stationary_reads_gravity(self):
        state = RigidBodyState.at_rest()
        pos, imu = ins_read(state, np.zeros(3), 0.01)
        np.testing.assert_allclose(pos, np.zeros(3))
        np.testing.assert_allclose(imu.gyro, np.zeros(3))
        np.testing.assert_allclose(imu.accel, [0.0, 0.0, 9.81], atol=1e-12)

    def test_identity_orientation_quaternion(self):
        _, imu = ins_read(RigidBodyState.at_rest(), np.zeros(3), 0.01)
        np.testing.assert_allclose(imu.quaternion, [1, 0, 0, 0], atol=1e-12)
        assert imu.rpy == (0.0, 0.0, 0.0)

    def test_circular_motion(self):
        # constant-rate circle: gyro_z = v/R, centripetal accel v^2/R
        radius, speed, dt = 3.0, 2.0, 1e-5
        omega = speed / radius
        theta = 0.7
        pose = SE3.from_xyz_yaw(radius * math.cos(theta),
                                radius * math.sin(theta), 0.0,
                                theta + math.pi / 2)
        vel = speed * np.array([-math.sin(theta), math.cos(theta), 0.0])
        prev_theta = theta - omega * dt
        prev_vel = speed * np.array([-math.sin(prev_theta),
                                     math.cos(prev_theta), 0.0])
        state = RigidBodyState(pose, vel, np.array([0.0, 0.0, omega]))
        _, imu = ins_read(state, prev_vel, dt)
        assert imu.gyro[2] == pytest.approx(omega)
        # centripetal acceleration appears on the body +y axis (turn center left)
        assert imu.accel[1] == pytest.approx(speed ** 2 / radius, rel=1e-3)
        assert imu.accel[0] == pytest.approx(0.0, abs=1e-3)
        assert imu.accel[2] == pytest.approx(9.81, abs=1e-9)

    def test_kinematic_only_toggle(self):
        _, imu = ins_read(RigidBodyState.at_rest(), np.zeros(3), 0.01,
                          gravity_inclusive=False)
        np.testing.assert_allclose(imu.accel, np.zeros(3), atol=1e-12)

    def test_noise_hooks(self):
        rng = np.random.default_rng(11)
        state = RigidBodyState.at_rest()
        pos, imu = ins_read(state, np.zeros(3), 0.01,
                            noise=InsNoise(sigma_position=0.1), rng=rng)
        assert np.any(pos != 0.0)


def scan_params(**kw):
    base = dict(mount=SE3.identity(), range_min=0.1, range_max=20.0,
                angle_min=-math.pi, angle_max=math.pi - math.radians(1),
                angle_res=math.radians(1))
    base.update(kw)
    return Lidar2DParams(**base)


class TestLidar2D:
    def test_empty_world_all_inf(self):
        world = World((), (-10, -10, 10, 10))
        pose = SE3.from_xyz_yaw(0, 0, 0.2, 0.0)
        scan = lidar2d_scan(world, pose, scan_params())
        assert np.all(np.isinf(scan.ranges))

    def test_square_room_center(self):
        world = box_room(0, 0, 10, 10, 1.0)
        pose = SE3.from_xyz_yaw(0, 0, 0.2, 0.0)
        params = scan_params(angle_min=0.0, angle_max=math.pi / 4,
                             angle_res=math.pi / 4)
        scan = lidar2d_scan(world, pose, params)
        assert scan.ranges[0] == pytest.approx(5.0, abs=1e-9)
        assert scan.ranges[1] == pytest.approx(math.sqrt(50.0), abs=1e-9)

    def test_min_range_threshold(self):
        world = World((Wall(0.05, -1, 0.05, 1, 1.0),), (-2, -2, 2, 2))
        pose = SE3.from_xyz_yaw(0, 0, 0.2, 0.0)
        params = scan_params(angle_min=0.0, angle_max=0.0, angle_res=1.0)
        scan = lidar2d_scan(world, pose, params)
        assert math.isinf(scan.ranges[0])

    def test_scan_length_rule(self):
        for n in (3, 90, 360, 721):
            res = math.radians(0.5)
            p = scan_params(angle_min=0.0, angle_max=(n - 1) * res, angle_res=res)
            assert p.n_rays == n
            world = World((), (-1, -1, 1, 1))
            scan = lidar2d_scan(world, SE3.from_xyz_yaw(0, 0, 0.2, 0), p)
            assert len(scan.ranges) == n

    def test_non_integral_span_rejected(self):
        with pytest.raises(ValueError, match="integer multiple"):
            scan_params(angle_min=0.0, angle_max=1.0, angle_res=0.3)

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(13)
        base = box_room(0, 0, 10, 8, 1.0)
        pose = SE3.from_xyz_yaw(1.2, -0.7, 0.2, 0.5)
        params = scan_params()
        ref = lidar2d_scan(base, pose, params)
        for alpha in rng.uniform(-math.pi, math.pi, 5):
            c, s = math.cos(alpha), math.sin(alpha)
            rot = lambda x, y: (c * x - s * y, s * x + c * y)
            walls = tuple(Wall(*rot(w.x1, w.y1), *rot(w.x2, w.y2), w.height)
                          for w in base.walls)
            world = World(walls, (-20, -20, 20, 20))
            rotated = compose(SE3.from_xyz_yaw(0, 0, 0, alpha), pose)
            scan = lidar2d_scan(world, rotated, params)
            np.testing.assert_allclose(scan.ranges, ref.ranges, atol=1e-9)

    def test_mount_offset_applies(self):
        world = box_room(0, 0, 10, 10, 1.0)
        mount = SE3.from_xyz_yaw(1.0, 0.0, 0.2, 0.0)
        params = scan_params(mount=mount, angle_min=0.0, angle_max=0.0,
                             angle_res=1.0)
        scan = lidar2d_scan(world, SE3.identity(), params)
        assert scan.ranges[0] == pytest.approx(4.0, abs=1e-9)


def params3d(**kw):
    base = dict(mount=SE3.from_xyz_yaw(0, 0, 0.5, 0), range_min=0.1,
                range_max=30.0, angle_min=-math.pi,
                angle_max=math.pi - math.radians(2),
                angle_res=math.radians(2),
                elev_min=-math.radians(10), elev_max=math.radians(10),
                elev_res=math.radians(5))
    base.update(kw)
    return Lidar3DParams(**base)


class TestLidar3D:
    def test_single_zero_channel_equals_2d(self):
        world = box_room(0, 0, 12, 9, 2.0)
        pose = SE3.from_xyz_yaw(0.8, 0.3, 0.0, 0.4)
        p3 = params3d(elev_min=0.0, elev_max=0.0, elev_res=1.0)
        p2 = scan_params(mount=p3.mount, range_min=p3.range_min,
                         range_max=p3.range_max, angle_min=p3.angle_min,
                         angle_max=p3.angle_max, angle_res=p3.angle_res)
        cloud = lidar3d_scan(world, pose, p3)
        scan = lidar2d_scan(world, pose, p2)
        finite = np.isfinite(scan.ranges)
        assert len(cloud.points) == finite.sum()
        planar = np.linalg.norm(cloud.points[:, :2], axis=1)
        np.testing.assert_allclose(planar, scan.ranges[finite], atol=1e-9)

    def test_upward_channels_miss_open_sky(self):
        world = box_room(0, 0, 10, 10, 0.4)  # sensor above the wall tops
        pose = SE3.from_xyz_yaw(0, 0, 0.0, 0.0)
        p = params3d(elev_min=-math.radians(30), elev_max=-math.radians(10),
                     elev_res=math.radians(10))
        cloud = lidar3d_scan(world, pose, p)
        assert len(cloud.points) == 0  # negative elevation points upward

    def test_point_count_bound(self):
        world = box_room(0, 0, 10, 10, 2.0)
        p = params3d()
        cloud = lidar3d_scan(world, SE3.identity(), p)
        assert len(cloud.points) <= p.n_rays * p.n_channels

    def test_downward_channels_hit_ground(self):
        world = World((), (-10, -10, 10, 10))
        p = params3d(elev_min=math.radians(20), elev_max=math.radians(20),
                     elev_res=1.0)
        cloud = lidar3d_scan(world, SE3.identity(), p)
        assert len(cloud.points) == p.n_rays
        # sensor frame: ground sits 0.5 m below the mount
        np.testing.assert_allclose(cloud.points[:, 2], -0.5, atol=1e-9)


CAM = CameraParams(focal=2.0, sensor_size=(36.0, 24.0), resolution=(1920, 1080),
                   near=0.1, far=100.0)


def oracle_project(point, pose, cam):
    """Independent 4x4 matrix pipeline, written out longhand."""
    r, t = pose.rotation, pose.translation
    view = np.eye(4)
    view[:3, :3] = r.T
    view[:3, 3] = -r.T @ t
    f, a = cam.focal, cam.sensor_size[1] / cam.sensor_size[0]
    n, fr = cam.near, cam.far
    proj = np.zeros((4, 4))
    proj[0, 0] = f
    proj[1, 1] = f / a
    proj[2, 2] = -(fr + n) / (fr - n)
    proj[2, 3] = -2 * fr * n / (fr - n)
    proj[3, 2] = -1.0
    clip = proj @ view @ np.array([*point, 1.0])
    if clip[3] <= 0:
        return None
    ndc = clip[:3] / clip[3]
    if np.any(np.abs(ndc) > 1.0 + 1e-9):
        return None
    return ((ndc[0] + 1) / 2 * cam.resolution[0],
            (1 - ndc[1]) / 2 * cam.resolution[1])


class TestCamera:
    def test_on_axis_point_hits_image_center(self):
        pose = SE3.from_rpy(0.0, 0.0, 0.0, translation=(0, 0, 0))
        uv = camera_project([0.0, 0.0, -5.0], pose, CAM)
        assert uv is not None
        assert uv[0] == pytest.approx(960.0, abs=1e-9)
        assert uv[1] == pytest.approx(540.0, abs=1e-9)

    def test_point_behind_camera_rejected(self):
        pose = SE3.identity()
        assert camera_project([0.0, 0.0, 5.0], pose, CAM) is None

    def test_beyond_far_plane_rejected(self):
        assert camera_project([0.0, 0.0, -200.0], SE3.identity(), CAM) is None

    def test_matches_independent_pipeline(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            pose = SE3.from_rpy(*rng.uniform(-0.5, 0.5, 3),
                                translation=rng.uniform(-5, 5, 3))
            point = rng.uniform(-20, 20, 3)
            expect = oracle_project(point, pose, CAM)
            got = camera_project(point, pose, CAM)
            if expect is None:
                assert got is None
            else:
                assert got is not None
                assert got[0] == pytest.approx(expect[0], abs=1e-9)
                assert got[1] == pytest.approx(expect[1], abs=1e-9)

    def test_near_plane_corners_on_ndc_boundary(self):
        # camera-frame frustum corners on the near plane map to |NDC| = 1
        f, a = CAM.focal, CAM.aspect
        n = CAM.near
        x, y = n / f, n * a / f
        for sx in (-1, 1):
            for sy in (-1, 1):
                uv = camera_project([sx * x, sy * y, -n * (1 + 1e-12)],
                                    SE3.identity(), CAM)
                assert uv is not None
                assert uv[0] == pytest.approx(0.0 if sx < 0 else 1920.0, abs=1e-6)
                assert uv[1] == pytest.approx(1080.0 if sy < 0 else 0.0, abs=1e-6)
