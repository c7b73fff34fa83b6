import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plcalib import BoardPose, CameraIntrinsics, RadialDistortion, ground_truth_principal_line, project
from plcalib.camera import distort_normalized, project_camera_points, undistort_normalized
from plcalib.errors import BehindCamera, DegenerateFrontalPose, InvalidCamera, NoConvergence
from plcalib.homography import normalize_homography
from plcalib.principal_line import vanishing_line
from plcalib.scene import PoseRecipe, realize_pose

from conftest import random_rotation


def test_intrinsics_validation():
    with pytest.raises(InvalidCamera):
        CameraIntrinsics(0.0, (960, 540))
    with pytest.raises(InvalidCamera):
        CameraIntrinsics(1600.0, (1920, 540))
    with pytest.raises(InvalidCamera):
        CameraIntrinsics(1600.0, (960, -1))


def test_distortion_folding_rejected(cam):
    with pytest.raises(InvalidCamera):
        RadialDistortion.for_camera(cam, -1.0, 0.0)
    RadialDistortion.for_camera(cam, -0.1, -0.02)


def test_pose_validation():
    with pytest.raises(BehindCamera):
        BoardPose(np.eye(3), [0, 0, -1])
    with pytest.raises(ValueError):
        BoardPose(np.diag([1.0, 1.0, -1.0]), [0, 0, 1])


@pytest.mark.parametrize("k", [(0.0, 0.0), (-0.1, -0.02), (0.05, 0.01)])
def test_optical_axis_maps_to_pp(cam, k):
    pose = BoardPose(np.eye(3), [0, 0, 2600])
    assert np.allclose(project(cam, RadialDistortion(*k), pose, [0.0, 0.0]), [960, 540], atol=1e-12)


def test_pinhole_arithmetic(cam, no_dist, dist):
    P = np.array([[1300.0, 0.0, 2600.0]])
    assert np.allclose(project_camera_points(cam, no_dist, P), [[1760.0, 540.0]], atol=1e-12)
    assert np.allclose(project_camera_points(cam, dist, P), [[1739.0, 540.0]], atol=1e-9)


def test_behind_camera(cam, no_dist):
    with pytest.raises(BehindCamera):
        project_camera_points(cam, no_dist, [[0.0, 0.0, 0.0]])


def test_distort_examples():
    k = RadialDistortion(-0.1, -0.02)
    assert np.allclose(distort_normalized(RadialDistortion(), [0.3, -0.7]), [0.3, -0.7])
    assert np.allclose(distort_normalized(k, [0.0, 0.0]), [0.0, 0.0])
    assert np.allclose(distort_normalized(k, [0.5, 0.0]), [0.486875, 0.0], atol=1e-15)


def test_undistort_examples():
    k = RadialDistortion(-0.1, -0.02)
    assert np.allclose(undistort_normalized(RadialDistortion(), [0.3, 0.2]), [0.3, 0.2])
    assert np.allclose(undistort_normalized(k, [0.486875, 0.0]), [0.5, 0.0], atol=1e-9)


def test_undistort_round_trip_1000():
    k = RadialDistortion(-0.1, -0.02)
    rng = np.random.default_rng(0)
    r = 0.6 * np.sqrt(rng.uniform(size=1000))
    t = rng.uniform(0, 2 * np.pi, size=1000)
    p = np.column_stack([r * np.cos(t), r * np.sin(t)])
    assert np.max(np.abs(undistort_normalized(k, distort_normalized(k, p)) - p)) < 1e-9


def test_undistort_no_convergence():
    # beyond the fold radius of this model Newton cannot settle
    with pytest.raises(NoConvergence):
        undistort_normalized(RadialDistortion(-0.5, 0.0), [2.0, 0.0])


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(0, 2 * np.pi))
def test_radial_symmetry(x, y, theta):
    k = RadialDistortion(-0.1, -0.02)
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    p = np.array([x, y])
    assert np.allclose(distort_normalized(k, R @ p), R @ distort_normalized(k, p), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_zero_distortion_is_pinhole(seed):
    rng = np.random.default_rng(seed)
    cam = CameraIntrinsics(rng.uniform(500, 3000), (rng.uniform(0, 1919), rng.uniform(0, 1079)))
    R = random_rotation(rng)
    pose = BoardPose(R, [rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(2000, 4000)])
    B = rng.uniform(-400, 400, size=(20, 2))
    P = B @ R[:, :2].T + pose.translation
    if np.any(P[:, 2] <= 0):
        return
    want = np.column_stack([cam.f * P[:, 0] / P[:, 2] + cam.pp[0], cam.f * P[:, 1] / P[:, 2] + cam.pp[1]])
    assert np.allclose(project(cam, RadialDistortion(), pose, B), want, atol=1e-12 * max(1.0, np.abs(want).max()), rtol=0)


def test_fig1a_pl_vertical(cam):
    line = ground_truth_principal_line(cam, realize_pose(PoseRecipe(45.0, 0.0)))
    assert abs(line.b) < 1e-15 and line.distance((960, 0)) < 1e-12 and line.distance((960, 1000)) < 1e-12


def test_alpha90_pl_horizontal(cam):
    line = ground_truth_principal_line(cam, realize_pose(PoseRecipe(45.0, 90.0)))
    assert abs(line.a) < 1e-15 and line.distance((0, 540)) < 1e-12


def test_frontal_pose_degenerate(cam):
    with pytest.raises(DegenerateFrontalPose):
        ground_truth_principal_line(cam, BoardPose(np.eye(3), [0, 0, 2600]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pl_through_pp_perpendicular_to_vanishing_line(seed):
    rng = np.random.default_rng(seed)
    cam = CameraIntrinsics(1600.0, (960.0, 540.0))
    R = random_rotation(rng)
    pose = BoardPose(R, [0, 0, 2600])
    n = pose.normal
    if np.hypot(n[0], n[1]) < 1e-3:
        return
    line = ground_truth_principal_line(cam, pose)
    assert line.distance(cam.pp) < 1e-9
    vl = vanishing_line(normalize_homography(pose.homography(cam)))
    # perpendicular lines have orthogonal normals
    cosang = abs(vl[:2] @ np.array([line.a, line.b])) / np.hypot(vl[0], vl[1])
    assert cosang < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_points_in_principal_plane_project_onto_pl(seed):
    rng = np.random.default_rng(seed)
    cam = CameraIntrinsics(1600.0, (960.0, 540.0))
    pose = BoardPose(random_rotation(rng), [0, 0, 2600])
    n = pose.normal
    if np.hypot(n[0], n[1]) < 1e-3:
        return
    line = ground_truth_principal_line(cam, pose)
    # the principal plane is spanned by the optical axis and (n_x, n_y, 0)
    d = np.array([n[0], n[1], 0.0]) / np.hypot(n[0], n[1])
    s = rng.uniform(-1500, 1500, size=20)
    z = rng.uniform(500, 5000, size=20)
    P = s[:, None] * d + z[:, None] * np.array([0, 0, 1.0])
    uv = project_camera_points(cam, RadialDistortion(), P)
    assert np.max(np.abs(line.signed_distance(uv))) < 1e-9
