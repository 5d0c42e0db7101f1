"""Actuator feedback sensors.

Throttle and steering feedback report the actuator state after its own
rate limiting and clamping, i.e. the value the plant actually applied,
not the raw command. Optional additive Gaussian noise per channel.
"""

from __future__ import annotations

import numpy as np


def actuator_feedback(throttle_state: float, steering_state: float,
                      sigma_throttle: float = 0.0, sigma_steering: float = 0.0,
                      rng: np.random.Generator | None = None
                      ) -> tuple[float, float]:
    t, s = float(throttle_state), float(steering_state)
    if rng is not None:
        if sigma_throttle > 0.0:
            t += rng.normal(0.0, sigma_throttle)
        if sigma_steering > 0.0:
            s += rng.normal(0.0, sigma_steering)
    return t, s
