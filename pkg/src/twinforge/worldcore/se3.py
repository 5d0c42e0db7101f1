"""Rigid-body transforms on SE(3).

Rotations are stored as 3x3 orthonormal matrices and renormalized on
composition so long chains of updates stay on the manifold. Quaternions
and Euler angles are exposed only as conversions at sensor boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_ORTHO_TOL = 1e-9


def _renormalize(rotation: np.ndarray) -> np.ndarray:
    """Project a near-orthonormal matrix back onto SO(3) via SVD."""
    u, _, vt = np.linalg.svd(rotation)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] = -u[:, -1]
        r = u @ vt
    return r


@dataclass(frozen=True)
class SE3:
    """A rigid transform: ``p_out = rotation @ p_in + translation``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.array(self.rotation, dtype=float).reshape(3, 3)
        t = np.array(self.translation, dtype=float).reshape(3)
        if not (np.isfinite(r).all() and np.isfinite(t).all()):
            raise ValueError("non-finite transform")
        err = np.abs(r @ r.T - np.eye(3)).max()
        if err > 1e-6:
            raise ValueError(f"rotation not orthonormal (err={err:.3g})")
        if err > _ORTHO_TOL:
            r = _renormalize(r)
        r.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def identity() -> "SE3":
        return SE3(np.eye(3), np.zeros(3))

    @staticmethod
    def from_xyz_yaw(x: float, y: float, z: float, yaw: float) -> "SE3":
        c, s = math.cos(yaw), math.sin(yaw)
        r = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        return SE3(r, np.array([x, y, z]))

    @staticmethod
    def from_rpy(roll: float, pitch: float, yaw: float,
                 translation=(0.0, 0.0, 0.0)) -> "SE3":
        """ZYX convention: yaw about z, then pitch about y, then roll about x."""
        cr, sr = math.cos(roll), math.sin(roll)
        cp, sp = math.cos(pitch), math.sin(pitch)
        cy, sy = math.cos(yaw), math.sin(yaw)
        rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1]], dtype=float)
        ry = np.array([[cp, 0, sp], [0, 1, 0], [-sp, 0, cp]], dtype=float)
        rx = np.array([[1, 0, 0], [0, cr, -sr], [0, sr, cr]], dtype=float)
        return SE3(rz @ ry @ rx, np.array(translation, dtype=float))

    def inverse(self) -> "SE3":
        rt = self.rotation.T
        return SE3(rt, -rt @ self.translation)

    def apply(self, point) -> np.ndarray:
        """Transform one point (3,) or many points (N, 3)."""
        p = np.asarray(point, dtype=float)
        if p.ndim == 1:
            return self.rotation @ p + self.translation
        return p @ self.rotation.T + self.translation

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    @property
    def yaw(self) -> float:
        return math.atan2(self.rotation[1, 0], self.rotation[0, 0])

    def rpy(self) -> tuple[float, float, float]:
        """Euler angles (roll, pitch, yaw) in the ZYX convention."""
        r = self.rotation
        pitch = math.asin(max(-1.0, min(1.0, -r[2, 0])))
        if abs(r[2, 0]) < 1.0 - 1e-12:
            roll = math.atan2(r[2, 1], r[2, 2])
            yaw = math.atan2(r[1, 0], r[0, 0])
        else:
            # gimbal lock: fold yaw into roll
            roll = math.atan2(-r[1, 2], r[1, 1])
            yaw = 0.0
        return roll, pitch, yaw

    def quaternion(self) -> np.ndarray:
        """Unit quaternion (w, x, y, z) with w >= 0."""
        r = self.rotation
        t = np.trace(r)
        if t > 0:
            s = math.sqrt(t + 1.0) * 2.0
            q = np.array([0.25 * s,
                          (r[2, 1] - r[1, 2]) / s,
                          (r[0, 2] - r[2, 0]) / s,
                          (r[1, 0] - r[0, 1]) / s])
        else:
            i = int(np.argmax(np.diag(r)))
            j, k = (i + 1) % 3, (i + 2) % 3
            s = math.sqrt(max(0.0, 1.0 + r[i, i] - r[j, j] - r[k, k])) * 2.0
            q = np.empty(4)
            q[0] = (r[k, j] - r[j, k]) / s
            q[1 + i] = 0.25 * s
            q[1 + j] = (r[j, i] + r[i, j]) / s
            q[1 + k] = (r[k, i] + r[i, k]) / s
        if q[0] < 0:
            q = -q
        return q / np.linalg.norm(q)


def compose(a: SE3, b: SE3) -> SE3:
    """Transform composition: result applies ``b`` first, then ``a``."""
    return SE3(_renormalize(a.rotation @ b.rotation),
               a.rotation @ b.translation + a.translation)


def rotation_exp(omega: np.ndarray) -> np.ndarray:
    """Rodrigues exponential: rotation matrix for a rotation vector (rad)."""
    theta = float(np.linalg.norm(omega))
    if theta < 1e-12:
        return np.eye(3)
    axis = omega / theta
    k = np.array([[0.0, -axis[2], axis[1]],
                  [axis[2], 0.0, -axis[0]],
                  [-axis[1], axis[0], 0.0]])
    return np.eye(3) + math.sin(theta) * k + (1.0 - math.cos(theta)) * (k @ k)
