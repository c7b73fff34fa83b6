"""Algebraic planar calibration baseline.

Closed-form intrinsics from the image of the absolute conic (zero skew,
unit aspect), homography decomposition for the poses, a linear fit of the
radial coefficients, alternation between the two, and an optional joint
Gauss-Newton polish of the reprojection error.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .camera import BoardPose, CameraIntrinsics, RadialDistortion, undistort_normalized
from .errors import CalibrationError, DegenerateSet, Diverged
from .homography import estimate_homography_from_points, hartley_transform
from .linalg import gauss_newton, solve_least_squares

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CalibrationResult:
    intrinsics: CameraIntrinsics
    distortion: RadialDistortion
    per_pose: tuple[BoardPose, ...]
    rms_reprojection: float
    iterations: int
    refined: bool = False


def _constraint_rows(H: np.ndarray) -> np.ndarray:
    """Rows acting on ``(B11, B13, B23, B33)`` for one homography."""

    def v(x, y):
        return np.array([x[0] * y[0] + x[1] * y[1], x[0] * y[2] + x[2] * y[0], x[1] * y[2] + x[2] * y[1], x[2] * y[2]])

    h1, h2 = H[:, 0], H[:, 1]
    return np.vstack([v(h1, h2), v(h1, h1) - v(h2, h2)])


def intrinsics_from_homographies(Hs, image_size=(1920, 1080), pixel_hint=None) -> CameraIntrinsics:
    """Closed-form ``(f, u0, v0)`` from at least two non-parallel board views.

    ``pixel_hint`` (any representative pixels) sets the conditioning
    similarity applied before solving.
    """
    Hs = [np.asarray(H, dtype=float) for H in Hs]
    if pixel_hint is None:
        pixel_hint = np.array([[0.0, 0.0], list(image_size)])
    T = hartley_transform(np.asarray(pixel_hint, dtype=float))
    rows = []
    for H in Hs:
        Hc = T @ H
        rows.append(_constraint_rows(Hc / np.linalg.norm(Hc)))
    V = np.vstack(rows)
    _, s, Vt = np.linalg.svd(V)
    if V.shape[0] < 4 or s[-2] < 1e-10 * s[0]:
        raise DegenerateSet("board orientations do not constrain the intrinsics")
    b = Vt[-1]
    B11, B13, B23, B33 = b
    u0c, v0c = -B13 / B11, -B23 / B11
    f2 = B33 / B11 - u0c**2 - v0c**2
    if not f2 > 0:
        raise DegenerateSet(f"closed form gave non-positive f^2 ({f2:.3e})")
    s_, tx, ty = T[0, 0], T[0, 2], T[1, 2]
    f = np.sqrt(f2) / s_
    u0, v0 = (u0c - tx) / s_, (v0c - ty) / s_
    return CameraIntrinsics(f, (u0, v0), image_size)


def pose_from_homography(cam: CameraIntrinsics, H) -> BoardPose:
    A = np.linalg.solve(cam.K, np.asarray(H, dtype=float))
    lam = 1.0 / np.linalg.norm(A[:, 0])
    if A[2, 2] * lam < 0:
        lam = -lam
    r1, r2, t = lam * A[:, 0], lam * A[:, 1], lam * A[:, 2]
    R = np.column_stack([r1, r2, np.cross(r1, r2)])
    U, _, Vt = np.linalg.svd(R)
    R = U @ np.diag([1.0, 1.0, np.linalg.det(U @ Vt)]) @ Vt
    return BoardPose(R, t)


def _ideal_normalized(pose: BoardPose, board_points) -> np.ndarray:
    P = pose.to_camera(board_points)
    return P[:, :2] / P[:, 2:3]


def estimate_radial(cam: CameraIntrinsics, poses, observations) -> tuple[float, float]:
    """Linear least-squares ``(k1, k2)`` from ideal-vs-observed radial displacement."""
    blocks, rhs = [], []
    u0, v0 = cam.pp
    for pose, obs in zip(poses, observations):
        xy = _ideal_normalized(pose, obs.board_points)
        r2 = np.sum(xy**2, axis=1)
        uv = cam.to_pixels(xy)
        du = uv - np.array([u0, v0])
        for k in range(2):
            blocks.append(np.column_stack([du[:, k] * r2, du[:, k] * r2**2]))
            rhs.append(obs.pixels[:, k] - uv[:, k])
    sol = solve_least_squares(np.vstack(blocks), np.concatenate(rhs))
    return float(sol.solution[0]), float(sol.solution[1])


def reprojection_residuals(cam, dist, poses, observations) -> np.ndarray:
    out = []
    for pose, obs in zip(poses, observations):
        xy = _ideal_normalized(pose, obs.board_points)
        r2 = np.sum(xy**2, axis=1, keepdims=True)
        out.append((cam.to_pixels(xy * dist.factor(r2)) - obs.pixels).ravel())
    return np.concatenate(out)


def reprojection_rms(cam, dist, poses, observations) -> float:
    r = reprojection_residuals(cam, dist, poses, observations).reshape(-1, 2)
    return float(np.sqrt(np.mean(np.sum(r**2, axis=1))))


def _undistorted_pixels(cam, dist, obs) -> np.ndarray:
    if dist.is_zero:
        return obs.pixels
    return cam.to_pixels(undistort_normalized(dist, cam.to_normalized(obs.pixels)))


def _distortion(k1, k2) -> RadialDistortion:
    return RadialDistortion(float(k1), float(k2))


def _round(observations, cam, dist, image_size, pixel_hint):
    """One alternation step: undistort, refit homographies, intrinsics, poses and radial terms."""
    Hs = []
    for obs in observations:
        pix = obs.pixels if dist.is_zero else _undistorted_pixels(cam, dist, obs)
        Hs.append(estimate_homography_from_points(obs.board_points, pix))
    cam = intrinsics_from_homographies(Hs, image_size, pixel_hint)
    poses = tuple(pose_from_homography(cam, H) for H in Hs)
    dist = _distortion(*estimate_radial(cam, poses, observations))
    return cam, dist, poses, reprojection_rms(cam, dist, poses, observations)


# scales putting (f, u0, v0, k1, k2) on comparable footing for the mixing step
_STATE_SCALE = np.array([1000.0, 1000.0, 1000.0, 1.0, 1.0])


def _state(cam, dist) -> np.ndarray:
    return np.array([cam.f, cam.pp[0], cam.pp[1], dist.k1, dist.k2]) / _STATE_SCALE


def _from_state(z, image_size):
    f, u0, v0, k1, k2 = z * _STATE_SCALE
    return CameraIntrinsics(f, (u0, v0), image_size), _distortion(k1, k2)


def _alternate(observations, image_size, max_rounds, rms_tol, depth=3):
    """Alternate intrinsics and radial estimation until the rms settles.

    The plain alternation contracts slowly (the homographies absorb most of
    the distortion each round), so successive rounds are combined by
    Anderson mixing over ``depth`` previous states. A mixed step is only
    kept if it does not raise the rms; otherwise the plain step is tried.
    """
    pixel_hint = np.vstack([o.pixels for o in observations])
    best = _round(observations, None, RadialDistortion(), image_size, pixel_hint)
    rounds = 1
    xs, fs = [], []
    while rounds < max_rounds:
        z_best = _state(best[0], best[1])
        candidates = []
        if len(fs) >= 2:
            dF = np.diff(np.array(fs), axis=0).T
            dX = np.diff(np.array(xs), axis=0).T
            gamma = np.linalg.lstsq(dF, fs[-1], rcond=None)[0]
            candidates.append((xs[-1] + fs[-1]) - (dX + dF) @ gamma)
        candidates.append(z_best)
        accepted = None
        for z_in in candidates:
            if rounds >= max_rounds:
                break
            try:
                cam_in, dist_in = _from_state(z_in, image_size)
                result = _round(observations, cam_in, dist_in, image_size, pixel_hint)
            except (CalibrationError, ValueError):
                continue
            finally:
                rounds += 1
            if result[3] <= best[3]:
                accepted = (z_in, result)
                break
        if accepted is None:
            break
        z_in, result = accepted
        if z_in is z_best and len(candidates) > 1:
            xs, fs = [], []
        xs.append(z_in)
        fs.append(_state(result[0], result[1]) - z_in)
        xs, fs = xs[-depth - 1 :], fs[-depth - 1 :]
        improvement = best[3] - result[3]
        best = result
        if improvement < rms_tol:
            break
    return best, rounds


def _pack(cam, dist, poses) -> np.ndarray:
    head = [cam.f, cam.pp[0], cam.pp[1], dist.k1, dist.k2]
    tail = [np.concatenate([Rotation.from_matrix(p.rotation).as_rotvec(), p.translation]) for p in poses]
    return np.concatenate([head, *tail])


def _residual_fn(observations):
    board = [o.board_points for o in observations]
    observed = np.concatenate([o.pixels.ravel() for o in observations])
    counts = [len(b) for b in board]
    B = np.vstack(board)
    pose_index = np.repeat(np.arange(len(board)), counts)

    def residual(x):
        f, u0, v0, k1, k2 = x[:5]
        params = x[5:].reshape(-1, 6)
        R = Rotation.from_rotvec(params[:, :3]).as_matrix()
        Ri = R[pose_index]
        P = Ri[:, :, 0] * B[:, :1] + Ri[:, :, 1] * B[:, 1:2] + params[pose_index, 3:]
        xy = P[:, :2] / P[:, 2:3]
        r2 = np.sum(xy**2, axis=1, keepdims=True)
        xy = xy * (1 + k1 * r2 + k2 * r2 * r2)
        uv = xy * f + np.array([u0, v0])
        return uv.ravel() - observed

    return residual, np.repeat(pose_index, 2)


def _forward_jacobian(residual, residual_pose_index):
    """Forward-difference Jacobian exploiting the per-view block structure.

    The five shared intrinsic columns are differenced one at a time; the
    j-th pose parameter of every view is perturbed in the same evaluation,
    since each view's residuals depend only on its own pose.
    """

    def jac(x):
        r0 = residual(x)
        n_views = (x.size - 5) // 6
        J = np.zeros((r0.size, x.size))
        for j in range(5):
            h = 1e-7 * max(1.0, abs(x[j]))
            xp = x.copy()
            xp[j] += h
            J[:, j] = (residual(xp) - r0) / (xp[j] - x[j])
        rows = np.arange(r0.size)
        for j in range(6):
            cols = 5 + 6 * np.arange(n_views) + j
            xp = x.copy()
            xp[cols] += 1e-7 * np.maximum(1.0, np.abs(x[cols]))
            h = xp[cols] - x[cols]
            col = cols[residual_pose_index]
            J[rows, col] = (residual(xp) - r0) / h[residual_pose_index]
        return J

    return jac


def _refine(observations, cam, dist, poses, image_size):
    residual, row_view = _residual_fn(observations)
    jacobian = _forward_jacobian(residual, row_view)
    # forward differences limit the attainable relative decrease to ~1e-8
    x = gauss_newton(residual, jacobian, _pack(cam, dist, poses), max_iter=30, tol=1e-9, stationary_rtol=1e-8)
    f, u0, v0, k1, k2 = x[:5]
    cam = CameraIntrinsics(f, (u0, v0), image_size)
    params = x[5:].reshape(-1, 6)
    poses = tuple(BoardPose(Rotation.from_rotvec(p[:3]).as_matrix(), p[3:]) for p in params)
    return cam, _distortion(k1, k2), poses


def calibrate_zhang(
    observations,
    refine: bool = False,
    image_size=(1920, 1080),
    max_rounds: int = 20,
    rms_tol: float = 1e-6,
) -> CalibrationResult:
    """Calibrate ``f, u0, v0, k1, k2`` and per-view poses from board observations.

    Each alternation round undistorts the observations with the current
    estimate, re-fits the homographies and closed-form intrinsics, and
    re-fits the radial coefficients. The reprojection rms never rises
    between kept rounds. With ``refine`` the result is polished by joint
    Gauss-Newton over every parameter.
    """
    observations = list(observations)
    if len(observations) < 3:
        raise DegenerateSet(f"need at least 3 views, got {len(observations)}")
    (cam, dist, poses, rms), rounds = _alternate(observations, image_size, max_rounds, rms_tol)
    result = CalibrationResult(cam, dist, poses, rms, rounds)
    return refine_calibration(result, observations) if refine else result


def refine_calibration(result: CalibrationResult, observations) -> CalibrationResult:
    """Joint Gauss-Newton polish of an alternation result."""
    observations = list(observations)
    image_size = result.intrinsics.image_size
    try:
        cam, dist, poses = _refine(observations, result.intrinsics, result.distortion, result.per_pose, image_size)
    except CalibrationError as exc:
        raise Diverged(f"refinement failed: {exc}") from exc
    rms = reprojection_rms(cam, dist, poses, observations)
    return CalibrationResult(cam, dist, poses, rms, result.iterations, refined=True)


def baseline_pp_for_subset(observations, subset, refine: bool = False, **kwargs) -> tuple[float, float]:
    observations = list(observations)
    return calibrate_zhang([observations[i] for i in subset], refine=refine, **kwargs).intrinsics.pp
