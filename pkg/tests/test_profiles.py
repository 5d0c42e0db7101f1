import math

import pytest

from twinforge.vehicle import load_profile
from twinforge.vehicle.params import FULL_SCALE, SMALL_SCALE

PROFILES = ("nigel", "f1tenth", "hunter_se", "opencav")


@pytest.mark.parametrize("name", PROFILES)
def test_profile_loads_and_is_consistent(name):
    p = load_profile(name)
    assert p.name == name
    assert p.variant in (SMALL_SCALE, FULL_SCALE)
    # geometry ties together
    assert p.front_offset + p.rear_offset == pytest.approx(p.steering.wheelbase)
    assert p.inertia.total_mass > 0
    assert all(l > 0 for l in p.static_loads)
    # the tire curves satisfy their knot ordering and continuity
    for spline in (p.tire_long, p.tire_lat):
        assert spline.s_zero < spline.s_extremum < spline.s_asymptote
        mid = spline.evaluate(spline.s_extremum)
        assert mid == pytest.approx(spline.f_extremum, rel=1e-9)
    k, b = p.suspension.rates(float(p.corner_masses[0]))
    assert k > 0 and b > 0


def test_full_scale_profile_has_powertrain():
    p = load_profile("opencav")
    assert p.variant == FULL_SCALE
    assert len(p.powertrain.torque_curve) >= 3
    assert len(p.powertrain.shift_map) == len(p.powertrain.gear_ratios)
    assert p.powertrain.engine_torque(p.powertrain.idle_rpm) > 0


def test_unknown_profile_rejected():
    with pytest.raises(FileNotFoundError):
        load_profile("batmobile")
