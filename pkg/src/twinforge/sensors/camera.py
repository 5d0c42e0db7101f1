"""Pinhole camera projection math (view matrix, frustum, NDC, viewport).

Only the projection pipeline is modeled; there is no rasterization or
image synthesis. The camera looks down its local -z axis with a
symmetric frustum, so the focal parameter relates to the frustum as
f = 2N/(R-L) and f/a = 2N/(T-B) with aspect a = s_y/s_x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..worldcore import SE3

_NDC_TOL = 1e-9


@dataclass(frozen=True)
class CameraParams:
    focal: float                    # projection-matrix element, dimensionless
    sensor_size: tuple[float, float]  # (s_x, s_y), mm
    resolution: tuple[int, int]     # (width, height), px
    near: float                     # m
    far: float                      # m

    def __post_init__(self):
        if not (0 < self.near < self.far):
            raise ValueError("requires 0 < near < far")
        if self.focal <= 0:
            raise ValueError("focal parameter must be > 0")

    @property
    def aspect(self) -> float:
        return self.sensor_size[1] / self.sensor_size[0]

    def projection_matrix(self) -> np.ndarray:
        f, a = self.focal, self.aspect
        n, fr = self.near, self.far
        return np.array([
            [f, 0.0, 0.0, 0.0],
            [0.0, f / a, 0.0, 0.0],
            [0.0, 0.0, -(fr + n) / (fr - n), -2.0 * fr * n / (fr - n)],
            [0.0, 0.0, -1.0, 0.0],
        ])


def camera_project(point_world, camera_pose: SE3,
                   params: CameraParams) -> tuple[float, float] | None:
    """Pixel (u, v) of a world point, or None when outside the frustum.

    The pipeline is C = P * V * W with V the inverse camera pose, then
    perspective division to NDC and the viewport map
    u = (x+1)/2 * W, v = (1-y)/2 * H.
    """
    w = np.ones(4)
    w[:3] = np.asarray(point_world, dtype=float).reshape(3)
    view = camera_pose.inverse().as_matrix()
    clip = params.projection_matrix() @ (view @ w)
    w_c = clip[3]
    if w_c <= _NDC_TOL:
        return None  # at or behind the camera plane
    ndc = clip[:3] / w_c
    if np.any(np.abs(ndc) > 1.0 + _NDC_TOL):
        return None
    width, height = params.resolution
    u = (ndc[0] + 1.0) / 2.0 * width
    v = (1.0 - ndc[1]) / 2.0 * height
    return float(u), float(v)
