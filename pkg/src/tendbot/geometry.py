"""2D poses and rigid 3D transforms shared by every subsystem.

Conventions: meters, radians, seconds. Angles are normalized to (-pi, pi]
at type boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ROT_TOL = 1e-9


def normalize_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(float(a), math.tau)
    if r <= -math.pi:
        r += math.tau
    return r


@dataclass(frozen=True)
class Pose2D:
    """Planar pose of the mobile base (x, y in meters, theta in radians)."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def distance_to(self, other: "Pose2D") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def compose(self, local: "Pose2D") -> "Pose2D":
        """Apply a pose expressed in this pose's frame."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return Pose2D(
            self.x + c * local.x - s * local.y,
            self.y + s * local.x + c * local.y,
            self.theta + local.theta,
        )

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "theta": self.theta}

    @staticmethod
    def from_dict(d) -> "Pose2D":
        if isinstance(d, (list, tuple)):
            return Pose2D(*d)
        return Pose2D(d["x"], d["y"], d.get("theta", 0.0))


def _check_rotation(rotation: np.ndarray) -> np.ndarray:
    R = np.asarray(rotation, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got {R.shape}")
    if not np.allclose(R.T @ R, np.eye(3), atol=1e-9):
        raise ValueError("rotation matrix is not orthonormal within 1e-9")
    if np.linalg.det(R) < 0.0:
        raise ValueError("rotation matrix has negative determinant (reflection)")
    return R


@dataclass(frozen=True)
class Transform3D:
    """Rigid transform: orthonormal rotation plus translation in meters."""

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        R = _check_rotation(self.rotation)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def identity() -> "Transform3D":
        return Transform3D(np.eye(3), np.zeros(3))

    def compose(self, other: "Transform3D") -> "Transform3D":
        return Transform3D(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def inverse(self) -> "Transform3D":
        Rt = self.rotation.T
        return Transform3D(Rt, -Rt @ self.translation)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform one point (3,) or many points (N, 3)."""
        p = np.asarray(points, dtype=float)
        return p @ self.rotation.T + self.translation

    def apply_vector(self, vec: np.ndarray) -> np.ndarray:
        return np.asarray(vec, dtype=float) @ self.rotation.T

    def matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.translation
        return T

    def rotation_distance(self, other: "Transform3D") -> float:
        """Geodesic angle between the two rotations."""
        c = (np.trace(self.rotation.T @ other.rotation) - 1.0) / 2.0
        return float(math.acos(min(1.0, max(-1.0, c))))

    def as_dict(self) -> dict:
        return {
            "rotation": self.rotation.tolist(),
            "translation": self.translation.tolist(),
        }

    @staticmethod
    def from_dict(d) -> "Transform3D":
        return Transform3D(np.array(d["rotation"]), np.array(d["translation"]))


def rot_x(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def look_at(eye: np.ndarray, target: np.ndarray, up_hint=(0.0, 0.0, 1.0)) -> Transform3D:
    """Camera pose whose +z axis points from eye toward target."""
    eye = np.asarray(eye, dtype=float)
    fwd = np.asarray(target, dtype=float) - eye
    n = np.linalg.norm(fwd)
    if n < 1e-12:
        raise ValueError("look_at: eye coincides with target")
    z = fwd / n
    up = np.asarray(up_hint, dtype=float)
    x = np.cross(up, z)
    if np.linalg.norm(x) < 1e-6:
        # view axis parallel to up hint; pick another hint
        x = np.cross(np.array([1.0, 0.0, 0.0]), z)
        if np.linalg.norm(x) < 1e-6:
            x = np.cross(np.array([0.0, 1.0, 0.0]), z)
    x = x / np.linalg.norm(x)
    y = np.cross(z, x)
    R = np.column_stack([x, y, z])
    return Transform3D(R, eye)
