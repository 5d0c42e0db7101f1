import numpy as np
import pytest

from twinforge.worldcore import (
    RigidBodyState, SE3, SprungMass, SprungMassSet,
    aggregate_inertia, step_rigid_body,
)

BOX = SprungMassSet((
    SprungMass(1.0, [1, 1, 0]), SprungMass(1.0, [1, -1, 0]),
    SprungMass(1.0, [-1, 1, 0]), SprungMass(1.0, [-1, -1, 0]),
))


def test_equilibrium_state_unchanged():
    agg = aggregate_inertia(BOX)
    s = RigidBodyState.at_rest()
    for _ in range(10):
        s = step_rigid_body(s, agg, np.zeros(3), np.zeros(3), 0.01)
    np.testing.assert_array_equal(s.pose.translation, np.zeros(3))
    np.testing.assert_array_equal(s.velocity, np.zeros(3))
    np.testing.assert_array_equal(s.angular_velocity, np.zeros(3))


def test_constant_force_velocity_is_discrete_sum():
    # semi-implicit Euler: v_n = n*F*dt/M exactly
    agg = aggregate_inertia(BOX)
    f = np.array([2.0, 0.0, 0.0])
    dt, n = 0.01, 137
    s = RigidBodyState.at_rest()
    for _ in range(n):
        s = step_rigid_body(s, agg, f, np.zeros(3), dt)
    assert s.velocity[0] == pytest.approx(n * f[0] * dt / agg.total_mass, rel=1e-12)
    # position is the discrete sum of the updated velocities
    expect_x = sum((k + 1) * f[0] * dt / agg.total_mass * dt for k in range(n))
    assert s.pose.translation[0] == pytest.approx(expect_x, rel=1e-9)


def test_pure_z_torque_increments_yaw_rate():
    agg = aggregate_inertia(BOX)  # Iz = 4 * (1^2 + 1^2) = 8
    tau = np.array([0.0, 0.0, 0.4])
    dt = 0.01
    s = RigidBodyState.at_rest()
    for k in range(10):
        s = step_rigid_body(s, agg, np.zeros(3), tau, dt)
        assert s.angular_velocity[2] == pytest.approx(
            (k + 1) * tau[2] / agg.moments[2] * dt, rel=1e-12)


def test_bitwise_deterministic():
    agg = aggregate_inertia(BOX)
    rng = np.random.default_rng(21)
    f = rng.uniform(-5, 5, 3)
    tau = rng.uniform(-1, 1, 3)
    s0 = RigidBodyState(SE3.from_xyz_yaw(1, 2, 0.3, 0.7),
                        rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))

    def run():
        s = s0
        for _ in range(100):
            s = step_rigid_body(s, agg, f, tau, 0.01)
        return s

    a, b = run(), run()
    assert np.array_equal(a.pose.translation, b.pose.translation)
    assert np.array_equal(a.pose.rotation, b.pose.rotation)
    assert np.array_equal(a.velocity, b.velocity)
    assert np.array_equal(a.angular_velocity, b.angular_velocity)


def test_non_finite_input_rejected():
    agg = aggregate_inertia(BOX)
    s = RigidBodyState.at_rest()
    with pytest.raises(ValueError, match="non-finite input"):
        step_rigid_body(s, agg, np.array([np.nan, 0, 0]), np.zeros(3), 0.01)
    with pytest.raises(ValueError, match="non-finite input"):
        step_rigid_body(s, agg, np.zeros(3), np.array([np.inf, 0, 0]), 0.01)
