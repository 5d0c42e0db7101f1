"""Sprung-mass aggregation linking the lumped and rigid-body views.

A chassis is described as a set of point masses in the body frame. The
aggregate quantities (total mass, center of mass, per-axis moments about
the COM) feed the rigid-body integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SprungMass:
    mass: float  # kg
    position: np.ndarray  # body-frame (3,), m

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        p = np.array(self.position, dtype=float).reshape(3)
        p.flags.writeable = False
        object.__setattr__(self, "position", p)


@dataclass(frozen=True)
class SprungMassSet:
    masses: tuple[SprungMass, ...]

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple(self.masses))


@dataclass(frozen=True)
class InertiaAggregate:
    total_mass: float  # kg
    com: np.ndarray  # body frame, m
    moments: np.ndarray  # diagonal (Ix, Iy, Iz) about the COM, kg m^2


def aggregate_inertia(mass_set: SprungMassSet) -> InertiaAggregate:
    """Total mass, COM, and diagonal moments of a point-mass set.

    Moments are point-mass sums about the COM, one per axis
    (Ix = sum m*(dy^2+dz^2), etc.); products of inertia are dropped.
    """
    if not mass_set.masses:
        raise ValueError("no sprung masses")
    m = np.array([sm.mass for sm in mass_set.masses])
    x = np.stack([sm.position for sm in mass_set.masses])
    total = float(m.sum())
    com = (m[:, None] * x).sum(axis=0) / total
    d = x - com
    sq = d * d
    ix = float((m * (sq[:, 1] + sq[:, 2])).sum())
    iy = float((m * (sq[:, 0] + sq[:, 2])).sum())
    iz = float((m * (sq[:, 0] + sq[:, 1])).sum())
    return InertiaAggregate(total, com, np.array([ix, iy, iz]))
