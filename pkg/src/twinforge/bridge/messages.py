"""Wire schema for the teleop bridge (JSON text frames).

Server to client: ``state`` frames at the streaming rate, plus
``authority``, ``pong`` and ``error`` frames. Client to server:
``command``, ``ping``, ``authority``, ``mode`` and ``snapshot`` frames.

Scan ranges stream as numbers with misses encoded as null, since JSON
has no infinity literal; on-disk logs keep the literal string "inf".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..vehicle import Commands

MAX_STREAM_RAYS = 180

RECORD_ACTIONS = ("start", "stop", "none")


class MessageError(ValueError):
    """Malformed or out-of-range client frame; connection survives."""


def downsample_scan(ranges, max_rays: int = MAX_STREAM_RAYS) -> list:
    """Uniform decimation to at most ``max_rays`` values, inf -> None."""
    if ranges is None:
        return []
    r = np.asarray(ranges, dtype=float)
    if len(r) > max_rays:
        step = int(math.ceil(len(r) / max_rays))
        r = r[::step]
    return [None if math.isinf(v) else float(v) for v in r]


@dataclass
class StateMessage:
    seq: int
    sim_time: float
    pose: tuple[float, float, float]      # x, y, yaw
    speed: float
    gear: int
    scan: list = field(default_factory=list)
    grid_patch: dict | None = None        # {x0, y0, w, h, cells}
    tracker: str | None = None
    mode: str = "sim"
    recording: bool = False
    degraded: bool = False
    safe_stop: bool = False
    grid_info: dict | None = None         # {resolution, origin, size}

    def to_json(self) -> str:
        x, y, yaw = self.pose
        return json.dumps({
            "type": "state",
            "seq": self.seq,
            "sim_time": self.sim_time,
            "pose": {"x": x, "y": y, "yaw": yaw},
            "speed": self.speed,
            "gear": self.gear,
            "scan": self.scan,
            "grid_patch": self.grid_patch,
            "tracker": self.tracker,
            "mode": self.mode,
            "recording": self.recording,
            "degraded": self.degraded,
            "safe_stop": self.safe_stop,
            "grid_info": self.grid_info,
        })


@dataclass
class CommandMessage:
    seq: int
    throttle: float = 0.0
    steering: float = 0.0
    brake: float = 0.0
    handbrake: bool = False
    record: str = "none"
    mode: str | None = None

    def to_commands(self, steer_limit_normalized: bool = True) -> Commands:
        return Commands(throttle=self.throttle, steering=self.steering,
                        brake=self.brake, handbrake=self.handbrake)

    def payload(self) -> str:
        """Canonical serialization used for mirroring byte-equality."""
        return json.dumps({
            "type": "command", "seq": self.seq, "throttle": self.throttle,
            "steering": self.steering, "brake": self.brake,
            "handbrake": self.handbrake, "record": self.record,
        }, sort_keys=True)


def _require_number(d: dict, key: str, lo: float, hi: float, default=0.0) -> float:
    v = d.get(key, default)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise MessageError(f"{key} must be a finite number")
    if not lo <= v <= hi:
        raise MessageError(f"{key} {v} outside [{lo}, {hi}]")
    return float(v)


def parse_command(d: dict, small_scale: bool) -> CommandMessage:
    """Validate a command frame; small-scale throttle spans [-1, 1]."""
    throttle_lo = -1.0 if small_scale else 0.0
    seq = d.get("seq", 0)
    if not isinstance(seq, int) or isinstance(seq, bool):
        raise MessageError("seq must be an integer")
    record = d.get("record", "none")
    if record not in RECORD_ACTIONS:
        raise MessageError(f"record must be one of {RECORD_ACTIONS}")
    return CommandMessage(
        seq=seq,
        throttle=_require_number(d, "throttle", throttle_lo, 1.0),
        steering=_require_number(d, "steering", -1.0, 1.0),
        brake=_require_number(d, "brake", 0.0, 1.0),
        handbrake=bool(d.get("handbrake", False)),
        record=record,
        mode=d.get("mode"),
    )


def parse_client_frame(text: str, small_scale: bool) -> tuple[str, object]:
    """(kind, payload) for one inbound frame; raises MessageError."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError:
        raise MessageError("frame is not valid JSON") from None
    if not isinstance(d, dict) or "type" not in d:
        raise MessageError("frame must be an object with a 'type'")
    kind = d["type"]
    if kind == "command":
        return kind, parse_command(d, small_scale)
    if kind == "ping":
        return kind, None
    if kind == "authority":
        action = d.get("action")
        if action not in ("request", "release"):
            raise MessageError("authority action must be request or release")
        return kind, action
    if kind == "mode":
        mode = d.get("mode")
        if mode not in ("gym", "sim", "testbed", "twin"):
            raise MessageError("unknown mode")
        return kind, mode
    if kind == "snapshot":
        return kind, None
    if kind == "external_state":
        for key in ("x", "y", "yaw"):
            if not isinstance(d.get(key), (int, float)):
                raise MessageError(f"external_state needs numeric {key}")
        return kind, d
    raise MessageError(f"unknown frame type {kind!r}")
