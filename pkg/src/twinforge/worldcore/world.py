"""2.5D ray-castable environment.

The world is a flat ground plane at z=0 plus vertical wall faces obtained
by extruding 2D line segments to per-segment heights. Segments keep ray
queries exact, which makes every sensor test checkable against a closed
form.

World file format (plain text, '#' comments, units meters)::

    BOUNDS xmin ymin xmax ymax
    WALL x1 y1 x2 y2 height
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_T_EPS = 1e-9  # ignore intersections closer than this along the ray


@dataclass(frozen=True)
class Wall:
    x1: float
    y1: float
    x2: float
    y2: float
    height: float

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError(f"wall height must be > 0, got {self.height}")
        if math.hypot(self.x2 - self.x1, self.y2 - self.y1) == 0.0:
            raise ValueError("wall segment has zero length")


@dataclass(frozen=True)
class World:
    walls: tuple[Wall, ...]
    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax

    def __post_init__(self):
        object.__setattr__(self, "walls", tuple(self.walls))
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise ValueError("degenerate world bounds")
        # cached per-wall arrays for batch queries
        if self.walls:
            p1 = np.array([[w.x1, w.y1] for w in self.walls])
            p2 = np.array([[w.x2, w.y2] for w in self.walls])
            h = np.array([w.height for w in self.walls])
        else:
            p1 = np.zeros((0, 2))
            p2 = np.zeros((0, 2))
            h = np.zeros(0)
        for a in (p1, p2, h):
            a.flags.writeable = False
        object.__setattr__(self, "_p1", p1)
        object.__setattr__(self, "_p2", p2)
        object.__setattr__(self, "_heights", h)


@dataclass(frozen=True)
class RayHit:
    hit: bool
    distance: float
    point: np.ndarray

    @staticmethod
    def miss() -> "RayHit":
        return RayHit(False, math.inf, np.full(3, np.nan))


def raycast(world: World, origin, direction, r_max: float) -> RayHit:
    """Nearest intersection of a ray with the walls or the ground plane.

    ``direction`` must be a unit vector; the returned distance is the
    Euclidean distance from origin to the hit point, or inf on a miss.
    """
    origin = np.asarray(origin, dtype=float).reshape(3)
    direction = np.asarray(direction, dtype=float).reshape(3)
    n = float(np.linalg.norm(direction))
    if n < 1e-12:
        raise ValueError("degenerate ray")
    if abs(n - 1.0) > 1e-6:
        raise ValueError("ray direction must be unit length")
    if not r_max > 0:
        raise ValueError("r_max must be > 0")
    t = _nearest_t(world, origin, direction, r_max)
    if not math.isfinite(t):
        return RayHit.miss()
    return RayHit(True, t, origin + t * direction)


def raycast_batch(world: World, origin, directions: np.ndarray,
                  r_max: float) -> np.ndarray:
    """Hit distances for many unit rays from one origin (inf for misses).

    Vectorized over rays x walls; agrees elementwise with raycast().
    """
    origin = np.asarray(origin, dtype=float).reshape(3)
    d = np.asarray(directions, dtype=float).reshape(-1, 3)
    best = np.full(len(d), np.inf)

    if len(world.walls) > 0:
        p1, p2, h = world._p1, world._p2, world._heights
        e = p2 - p1  # (W, 2)
        w0 = p1 - origin[:2]  # (W, 2)
        dx, dy = d[:, 0:1], d[:, 1:2]  # (R, 1)
        denom = dx * e[:, 1] - dy * e[:, 0]  # (R, W)
        safe = np.abs(denom) > 1e-15
        denom_s = np.where(safe, denom, 1.0)
        t = (w0[:, 0] * e[:, 1] - w0[:, 1] * e[:, 0]) / denom_s
        s = (w0[:, 0] * dy - w0[:, 1] * dx) / denom_s
        z = origin[2] + t * d[:, 2:3]
        ok = (safe & (t > _T_EPS) & (t <= r_max)
              & (s >= 0.0) & (s <= 1.0)
              & (z >= 0.0) & (z <= h))
        t = np.where(ok, t, np.inf)
        best = t.min(axis=1)

    # ground plane z = 0
    dz = d[:, 2]
    going_down = dz < -1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        tg = np.where(going_down, -origin[2] / dz, np.inf)
    tg = np.where((tg > _T_EPS) & (tg <= r_max), tg, np.inf)
    return np.minimum(best, tg)


def _nearest_t(world: World, origin, direction, r_max: float) -> float:
    best = math.inf
    ox, oy, oz = origin
    dx, dy, dz = direction
    for w in world.walls:
        ex, ey = w.x2 - w.x1, w.y2 - w.y1
        denom = dx * ey - dy * ex
        if abs(denom) < 1e-15:
            continue
        wx, wy = w.x1 - ox, w.y1 - oy
        t = (wx * ey - wy * ex) / denom
        s = (wx * dy - wy * dx) / denom
        if t <= _T_EPS or t > r_max or s < 0.0 or s > 1.0:
            continue
        z = oz + t * dz
        if z < 0.0 or z > w.height:
            continue
        if t < best:
            best = t
    if dz < -1e-15:
        tg = -oz / dz
        if _T_EPS < tg <= r_max and tg < best:
            best = tg
    return best


def load_world(path) -> World:
    walls: list[Wall] = []
    bounds = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0].upper()
        try:
            vals = [float(p) for p in parts[1:]]
        except ValueError as e:
            raise ValueError(f"{path}:{lineno}: bad number: {e}") from None
        if kind == "WALL":
            if len(vals) != 5:
                raise ValueError(f"{path}:{lineno}: WALL needs 5 values")
            walls.append(Wall(*vals))
        elif kind == "BOUNDS":
            if len(vals) != 4:
                raise ValueError(f"{path}:{lineno}: BOUNDS needs 4 values")
            bounds = tuple(vals)
        else:
            raise ValueError(f"{path}:{lineno}: unknown record {kind!r}")
    if bounds is None:
        raise ValueError(f"{path}: missing BOUNDS record")
    return World(tuple(walls), bounds)


def save_world(world: World, path) -> None:
    lines = ["# twinforge world", "BOUNDS %g %g %g %g" % world.bounds]
    lines += ["WALL %g %g %g %g %g" % (w.x1, w.y1, w.x2, w.y2, w.height)
              for w in world.walls]
    Path(path).write_text("\n".join(lines) + "\n")


def box_room(cx: float, cy: float, width: float, depth: float,
             height: float, margin: float = 1.0) -> World:
    """Axis-aligned rectangular room, handy for tests and demos."""
    hw, hd = width / 2.0, depth / 2.0
    corners = [(cx - hw, cy - hd), (cx + hw, cy - hd),
               (cx + hw, cy + hd), (cx - hw, cy + hd)]
    walls = tuple(
        Wall(corners[i][0], corners[i][1],
             corners[(i + 1) % 4][0], corners[(i + 1) % 4][1], height)
        for i in range(4))
    bounds = (cx - hw - margin, cy - hd - margin,
              cx + hw + margin, cy + hd + margin)
    return World(walls, bounds)
