"""Tire slip and the two-piece cubic friction spline.

The friction curve F(S) is built from three knots: the zero point
(S0, F0), the extremum (Se, Fe) and the asymptote (Sa, Fa). Each piece is
a cubic; users supply knots and an initial stiffness (slope at S0), and
the coefficients follow from the boundary conditions:

    f0(S0)=F0, f0'(S0)=stiffness, f0(Se)=Fe, f0'(Se)=0
    f1(Se)=Fe, f1'(Se)=0,         f1(Sa)=Fa, f1'(Sa)=0

Negative slip is handled by odd extension, F(-S) = -F(S); beyond the
asymptote the curve saturates at Fa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _fit_cubic(x0, y0, m0, x1, y1, m1) -> np.ndarray:
    """Coefficients (a, b, c, d) of the cubic matching value+slope at both ends."""
    a = np.array([
        [x0 ** 3, x0 ** 2, x0, 1.0],
        [3 * x0 ** 2, 2 * x0, 1.0, 0.0],
        [x1 ** 3, x1 ** 2, x1, 1.0],
        [3 * x1 ** 2, 2 * x1, 1.0, 0.0],
    ])
    return np.linalg.solve(a, np.array([y0, m0, y1, m1], dtype=float))


def _cubic(coef: np.ndarray, x: float) -> float:
    return float(((coef[0] * x + coef[1]) * x + coef[2]) * x + coef[3])


def _cubic_deriv(coef: np.ndarray, x: float) -> float:
    return float((3.0 * coef[0] * x + 2.0 * coef[1]) * x + coef[2])


@dataclass(frozen=True)
class TireSpline:
    s_zero: float
    f_zero: float
    s_extremum: float
    f_extremum: float
    s_asymptote: float
    f_asymptote: float
    stiffness: float  # dF/dS at the zero point, N per unit slip

    def __post_init__(self):
        if not (self.s_zero < self.s_extremum < self.s_asymptote):
            raise ValueError("tire spline knots must satisfy S0 < Se < Sa")
        c0 = _fit_cubic(self.s_zero, self.f_zero, self.stiffness,
                        self.s_extremum, self.f_extremum, 0.0)
        c1 = _fit_cubic(self.s_extremum, self.f_extremum, 0.0,
                        self.s_asymptote, self.f_asymptote, 0.0)
        for c in (c0, c1):
            c.flags.writeable = False
        object.__setattr__(self, "_c0", c0)
        object.__setattr__(self, "_c1", c1)

    def evaluate(self, s: float) -> float:
        """F(S) with odd extension and saturation past the asymptote."""
        sign = 1.0 if s >= 0 else -1.0
        a = abs(s)
        if a >= self.s_asymptote:
            return sign * self.f_asymptote
        if a >= self.s_extremum:
            return sign * _cubic(self._c1, a)
        return sign * _cubic(self._c0, a)

    def derivative(self, s: float) -> float:
        a = abs(s)
        if a >= self.s_asymptote:
            return 0.0
        coef = self._c1 if a >= self.s_extremum else self._c0
        return _cubic_deriv(coef, a)


def compute_slip(v_x: float, v_y: float, omega: float, radius: float,
                 speed_guard: float = 0.1) -> tuple[float, float]:
    """Longitudinal and lateral slip of one tire.

    S_x compares the wheel surface speed with the longitudinal contact
    velocity; S_y is tan(alpha). The denominator is floored at
    ``speed_guard`` to stay finite through standstill.
    """
    denom = max(abs(v_x), speed_guard)
    s_x = (radius * omega - v_x) / denom
    s_y = v_y / denom
    return s_x, s_y


def tire_force(s: float, spline: TireSpline, load: float,
               nominal_load: float) -> float:
    """Tire force for slip ``s``, scaled linearly with the vertical load."""
    if nominal_load <= 0:
        raise ValueError("nominal load must be > 0")
    load = max(0.0, load)
    return spline.evaluate(s) * (load / nominal_load)
