"""Normalized DLT estimation of board-to-image homographies."""
from __future__ import annotations

import numpy as np

from .errors import DegenerateConfiguration, TooFewPoints
from .linalg import smallest_right_singular_vector

COND_LIMIT = 1e12


def normalize_homography(H) -> np.ndarray:
    """Scale ``H`` to unit Frobenius norm with its largest-magnitude entry positive."""
    H = np.asarray(H, dtype=float)
    H = H / np.linalg.norm(H)
    flat = H.ravel()
    if flat[np.argmax(np.abs(flat))] < 0:
        H = -H
    return H


def hartley_transform(points) -> np.ndarray:
    """Similarity moving ``points`` to zero centroid and mean distance sqrt(2)."""
    p = np.asarray(points, dtype=float)
    c = p.mean(axis=0)
    d = np.mean(np.linalg.norm(p - c, axis=1))
    if d == 0:
        raise DegenerateConfiguration("all points coincide")
    s = np.sqrt(2) / d
    return np.array([[s, 0.0, -s * c[0]], [0.0, s, -s * c[1]], [0.0, 0.0, 1.0]])


def apply_homography(H, points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    q = p @ H[:, :2].T + H[:, 2]
    return q[:, :2] / q[:, 2:3]


def estimate_homography_from_points(board_points, pixels) -> np.ndarray:
    src = np.asarray(board_points, dtype=float)
    dst = np.asarray(pixels, dtype=float)
    if src.shape[0] < 4:
        raise TooFewPoints(f"{src.shape[0]} correspondences, need at least 4")
    Ts = hartley_transform(src)
    Td = hartley_transform(dst)
    xs = src @ Ts[:2, :2].T + Ts[:2, 2]
    xd = dst @ Td[:2, :2].T + Td[:2, 2]

    n = xs.shape[0]
    ones = np.ones(n)
    zeros = np.zeros((n, 3))
    P = np.column_stack([xs, ones])
    A = np.empty((2 * n, 9))
    A[0::2] = np.hstack([P, zeros, -xd[:, :1] * P])
    A[1::2] = np.hstack([zeros, P, -xd[:, 1:2] * P])

    s = np.linalg.svd(A, compute_uv=False)
    # the nullspace is one-dimensional: s[-2] must stay clear of zero
    if s[-2] < s[0] / COND_LIMIT:
        raise DegenerateConfiguration("correspondences do not determine a unique homography")
    Hn = smallest_right_singular_vector(A).reshape(3, 3)
    H = np.linalg.solve(Td, Hn @ Ts)
    if np.linalg.cond(H) > COND_LIMIT:
        raise DegenerateConfiguration("estimated homography is singular")
    return normalize_homography(H)


def estimate_homography(obs) -> np.ndarray:
    """Board-to-pixel homography of an :class:`~plcalib.scene.ObservationSet`."""
    return estimate_homography_from_points(obs.board_points, obs.pixels)


def reprojection_error(H, obs) -> tuple[float, float]:
    """``(rms, max)`` pixel distance between ``H``-mapped board points and observations."""
    err = np.linalg.norm(apply_homography(H, obs.board_points) - obs.pixels, axis=1)
    return float(np.sqrt(np.mean(err**2))), float(err.max())
