import numpy as np
import pytest

from twinforge.worldcore import SprungMass, SprungMassSet, aggregate_inertia


def test_single_point_mass_at_origin():
    agg = aggregate_inertia(SprungMassSet((SprungMass(2.0, [0, 0, 0]),)))
    assert agg.total_mass == 2.0
    np.testing.assert_allclose(agg.com, np.zeros(3))
    np.testing.assert_allclose(agg.moments, np.zeros(3))


def test_symmetric_pair_on_x_axis():
    agg = aggregate_inertia(SprungMassSet((
        SprungMass(1.0, [1, 0, 0]),
        SprungMass(1.0, [-1, 0, 0]),
    )))
    assert agg.total_mass == 2.0
    np.testing.assert_allclose(agg.com, np.zeros(3))
    # both masses on the x axis: no moment about x, 2*1*1^2 about y and z
    np.testing.assert_allclose(agg.moments, [0.0, 2.0, 2.0])


def test_weighted_mean_com():
    # 1 kg at origin plus 3 kg at (4,0,0): COM at 3*4/4 = 3
    agg = aggregate_inertia(SprungMassSet((
        SprungMass(1.0, [0, 0, 0]),
        SprungMass(3.0, [4, 0, 0]),
    )))
    np.testing.assert_allclose(agg.com, [3.0, 0.0, 0.0])
    # about COM: 1*3^2 + 3*1^2 = 12 on the y and z axes
    np.testing.assert_allclose(agg.moments, [0.0, 12.0, 12.0])


def test_permutation_invariant():
    rng = np.random.default_rng(11)
    masses = [SprungMass(float(m), p)
              for m, p in zip(rng.uniform(0.1, 5.0, 8), rng.uniform(-2, 2, (8, 3)))]
    a = aggregate_inertia(SprungMassSet(tuple(masses)))
    order = rng.permutation(8)
    b = aggregate_inertia(SprungMassSet(tuple(masses[i] for i in order)))
    assert a.total_mass == pytest.approx(b.total_mass, abs=1e-12)
    np.testing.assert_allclose(a.com, b.com, atol=1e-12)
    np.testing.assert_allclose(a.moments, b.moments, atol=1e-12)


def test_empty_set_rejected():
    with pytest.raises(ValueError, match="no sprung masses"):
        aggregate_inertia(SprungMassSet(()))


def test_nonpositive_mass_rejected():
    with pytest.raises(ValueError):
        SprungMass(0.0, [0, 0, 0])
