import numpy as np
import pytest

from twinforge.vehicle import TireSpline, compute_slip, tire_force


def random_spline(rng):
    s_e = rng.uniform(0.05, 0.3)
    s_a = s_e + rng.uniform(0.1, 1.0)
    f_e = rng.uniform(5.0, 5000.0)
    f_a = f_e * rng.uniform(0.6, 0.95)
    stiffness = rng.uniform(1.2, 2.5) * f_e / s_e
    return TireSpline(0.0, 0.0, s_e, f_e, s_a, f_a, stiffness)


def test_knot_values_and_stationarity():
    rng = np.random.default_rng(41)
    for _ in range(100):
        sp = random_spline(rng)
        assert sp.evaluate(sp.s_zero) == pytest.approx(sp.f_zero, abs=1e-9)
        assert sp.evaluate(sp.s_extremum) == pytest.approx(sp.f_extremum, abs=1e-9)
        # continuity across the extremum knot
        below = sp.evaluate(sp.s_extremum - 1e-13)
        above = sp.evaluate(sp.s_extremum + 1e-13)
        assert abs(below - above) < 1e-9
        assert sp.derivative(sp.s_extremum) == pytest.approx(0.0, abs=1e-9)
        assert sp.derivative(sp.s_asymptote - 1e-12) == pytest.approx(0.0, abs=1e-6)
        assert sp.evaluate(sp.s_asymptote) == pytest.approx(sp.f_asymptote, abs=1e-9)


def test_segment_matches_independent_cubic_fit():
    # independent oracle: solve the 4 boundary constraints as a Vandermonde
    # system and evaluate at the segment midpoint
    sp = TireSpline(0.0, 0.0, 0.2, 10.0, 0.6, 8.0, 90.0)
    x0, y0, m0 = 0.0, 0.0, 90.0
    x1, y1, m1 = 0.2, 10.0, 0.0
    a = np.array([
        [x0**3, x0**2, x0, 1],
        [3 * x0**2, 2 * x0, 1, 0],
        [x1**3, x1**2, x1, 1],
        [3 * x1**2, 2 * x1, 1, 0],
    ], dtype=float)
    coef = np.linalg.solve(a, [y0, m0, y1, m1])
    mid = 0.1
    expect = coef @ [mid**3, mid**2, mid, 1]
    assert sp.evaluate(mid) == pytest.approx(expect, abs=1e-12)


def test_odd_extension_and_saturation():
    sp = TireSpline(0.0, 0.0, 0.2, 10.0, 0.6, 8.0, 90.0)
    rng = np.random.default_rng(42)
    for s in rng.uniform(0.0, 1.5, 50):
        assert sp.evaluate(-s) == pytest.approx(-sp.evaluate(s), abs=1e-12)
    assert sp.evaluate(0.9) == pytest.approx(8.0)
    assert sp.evaluate(5.0) == pytest.approx(8.0)


def test_zero_at_zero_knot():
    sp = TireSpline(0.0, 0.0, 0.2, 10.0, 0.6, 8.0, 90.0)
    assert sp.evaluate(0.0) == 0.0


def test_invalid_knot_order_rejected():
    with pytest.raises(ValueError):
        TireSpline(0.0, 0.0, 0.5, 10.0, 0.3, 8.0, 90.0)


def test_pure_rolling_has_zero_slip():
    s_x, s_y = compute_slip(2.0, 0.0, 2.0 / 0.05, 0.05)
    assert s_x == pytest.approx(0.0, abs=1e-12)
    assert s_y == 0.0


def test_slip_direct_evaluation():
    s_x, _ = compute_slip(1.0, 0.0, 1.1 / 0.05, 0.05)
    assert s_x == pytest.approx(0.1, rel=1e-12)


def test_slip_low_speed_guard():
    # at standstill the denominator floors at the guard instead of blowing up
    s_x, s_y = compute_slip(0.0, 0.05, 10.0, 0.05, speed_guard=0.1)
    assert s_x == pytest.approx(10.0 * 0.05 / 0.1)
    assert s_y == pytest.approx(0.5)


def test_tire_force_load_scaling():
    sp = TireSpline(0.0, 0.0, 0.2, 10.0, 0.6, 8.0, 90.0)
    full = tire_force(0.2, sp, 100.0, 100.0)
    half = tire_force(0.2, sp, 50.0, 100.0)
    assert half == pytest.approx(full / 2.0)
    assert tire_force(0.2, sp, -5.0, 100.0) == 0.0
    with pytest.raises(ValueError):
        tire_force(0.2, sp, 100.0, 0.0)
