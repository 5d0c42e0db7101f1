"""Incremental wheel encoders."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class EncoderParams:
    ppr: int      # pulses per revolution
    cgr: float    # cumulative gear ratio between wheel and encoder shaft

    def __post_init__(self):
        if not self.ppr > 0:
            raise ValueError("PPR must be > 0")
        if not self.cgr > 0:
            raise ValueError("CGR must be > 0")


def encoder_read(revolutions: float, params: EncoderParams) -> int:
    """Tick count for a cumulative wheel revolution count.

    ticks = floor(PPR * CGR * N_rev); monotone in the revolutions, with
    sub-tick rotation quantized away.
    """
    return math.floor(params.ppr * params.cgr * revolutions)
