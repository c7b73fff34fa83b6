"""Pinhole camera with a two-term even radial distortion.

Pixels are ``(u, v)`` with ``u`` growing to the right and ``v`` downward;
the camera frame has ``x`` along ``u``, ``y`` along ``v`` and ``z`` along the
optical axis. Distortion acts on normalized coordinates ``(X/Z, Y/Z)`` about
the principal point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BehindCamera, DegenerateFrontalPose, InvalidCamera, NoConvergence


@dataclass(frozen=True)
class CameraIntrinsics:
    f: float
    pp: tuple[float, float]
    image_size: tuple[int, int] = (1920, 1080)

    def __post_init__(self):
        u0, v0 = self.pp
        w, h = self.image_size
        if not self.f > 0:
            raise InvalidCamera(f"focal length must be positive, got {self.f}")
        if not (0 <= u0 < w and 0 <= v0 < h):
            raise InvalidCamera(f"principal point {self.pp} outside image {self.image_size}")
        object.__setattr__(self, "pp", (float(u0), float(v0)))
        object.__setattr__(self, "f", float(self.f))

    @property
    def K(self) -> np.ndarray:
        u0, v0 = self.pp
        return np.array([[self.f, 0.0, u0], [0.0, self.f, v0], [0.0, 0.0, 1.0]])

    def working_radius(self) -> float:
        """Normalized radius of the image corner farthest from the principal point."""
        u0, v0 = self.pp
        w, h = self.image_size
        du = max(u0, w - u0)
        dv = max(v0, h - v0)
        return float(np.hypot(du, dv) / self.f)

    def to_normalized(self, pixels) -> np.ndarray:
        p = np.asarray(pixels, dtype=float)
        return (p - np.asarray(self.pp)) / self.f

    def to_pixels(self, normalized) -> np.ndarray:
        return np.asarray(normalized, dtype=float) * self.f + np.asarray(self.pp)


@dataclass(frozen=True)
class RadialDistortion:
    k1: float = 0.0
    k2: float = 0.0
    # normalized radius over which the model must stay positive and monotone
    max_radius: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.max_radius is not None:
            r2 = np.linspace(0.0, self.max_radius**2, 257)
            factor = 1 + self.k1 * r2 + self.k2 * r2**2
            slope = 1 + 3 * self.k1 * r2 + 5 * self.k2 * r2**2
            if np.any(factor <= 0) or np.any(slope <= 0):
                raise InvalidCamera(
                    f"distortion ({self.k1}, {self.k2}) folds the image within radius {self.max_radius:.4f}"
                )

    @classmethod
    def for_camera(cls, cam: CameraIntrinsics, k1: float, k2: float) -> "RadialDistortion":
        return cls(k1, k2, max_radius=cam.working_radius())

    @property
    def is_zero(self) -> bool:
        return self.k1 == 0.0 and self.k2 == 0.0

    def factor(self, r2):
        return 1 + self.k1 * r2 + self.k2 * r2 * r2


@dataclass(frozen=True)
class BoardPose:
    """Rigid transform taking board-plane points ``(x, y, 0)`` into the camera frame."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.allclose(R.T @ R, np.eye(3), atol=1e-10, rtol=0):
            raise ValueError("rotation is not orthonormal")
        if abs(np.linalg.det(R) - 1) > 1e-10:
            raise ValueError("rotation is not proper")
        if not t[2] > 0:
            raise BehindCamera(f"board center depth {t[2]} is not positive")
        R.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @property
    def normal(self) -> np.ndarray:
        """Board plane normal ``r1 x r2`` in the camera frame."""
        return np.cross(self.rotation[:, 0], self.rotation[:, 1])

    def to_camera(self, board_points) -> np.ndarray:
        p = np.atleast_2d(np.asarray(board_points, dtype=float))
        return p[:, :2] @ self.rotation[:, :2].T + self.translation

    def homography(self, cam: CameraIntrinsics) -> np.ndarray:
        """Exact board-to-pixel homography ``K [r1 r2 t]`` (distortion ignored)."""
        R = self.rotation
        return cam.K @ np.column_stack([R[:, 0], R[:, 1], self.translation])


def distort_normalized(dist: RadialDistortion, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    r2 = np.sum(p * p, axis=-1, keepdims=True)
    return p * dist.factor(r2)


def undistort_normalized(dist: RadialDistortion, p_d, tol: float = 1e-12, max_iter: int = 50) -> np.ndarray:
    """Invert :func:`distort_normalized` by Newton iteration on the radius.

    Works on a single point or an ``(N, 2)`` array.
    """
    p_d = np.asarray(p_d, dtype=float)
    if dist.is_zero:
        return p_d.copy()
    rd = np.linalg.norm(p_d, axis=-1)
    r = rd.copy()
    k1, k2 = dist.k1, dist.k2
    for _ in range(max_iter):
        r2 = r * r
        g = r * (1 + k1 * r2 + k2 * r2 * r2) - rd
        dg = 1 + 3 * k1 * r2 + 5 * k2 * r2 * r2
        step = g / dg
        r = r - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, rd)):
            break
    else:
        raise NoConvergence("radial inversion did not converge in %d iterations" % max_iter)
    r2 = r * r
    if np.any(r < 0) or np.any(1 + 3 * k1 * r2 + 5 * k2 * r2 * r2 <= 0):
        # Newton settled on a root past the fold of the model
        raise NoConvergence("distorted radius lies outside the invertible range of the model")
    scale = np.where(rd > 0, r / np.where(rd > 0, rd, 1.0), 1.0)
    return p_d * scale[..., None]


def project(cam: CameraIntrinsics, dist: RadialDistortion, pose: BoardPose, board_points) -> np.ndarray:
    """Project board points ``(N, 2)`` to distorted pixels ``(N, 2)``."""
    board_points = np.asarray(board_points, dtype=float)
    single = board_points.ndim == 1
    return project_camera_points(cam, dist, pose.to_camera(board_points), single=single)


def project_camera_points(cam: CameraIntrinsics, dist: RadialDistortion, P, single: bool = False) -> np.ndarray:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if np.any(P[:, 2] <= 0):
        raise BehindCamera(f"{int(np.sum(P[:, 2] <= 0))} point(s) at or behind the camera")
    xy = P[:, :2] / P[:, 2:3]
    uv = cam.to_pixels(distort_normalized(dist, xy))
    return uv[0] if single else uv


def ground_truth_principal_line(cam: CameraIntrinsics, pose: BoardPose, tol: float = 1e-12):
    """Principal line of a pose: through the principal point along ``(n_x, n_y)``."""
    from .principal_line import ImageLine

    n = pose.normal
    if abs(n[0]) + abs(n[1]) < tol:
        raise DegenerateFrontalPose("board plane is parallel to the image plane")
    d = n[:2] / np.hypot(n[0], n[1])
    u0, v0 = cam.pp
    # normal of the line is the direction rotated by 90 degrees
    a, b = -d[1], d[0]
    return ImageLine.from_coefficients(a, b, -(a * u0 + b * v0))
