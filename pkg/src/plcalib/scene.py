"""Checkerboard geometry, pose recipes and synthetic corner rendering."""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from .camera import BoardPose, CameraIntrinsics, RadialDistortion, project
from .errors import InvalidDimensions, InvalidRecipe, TooFewPoints, TooFewRemaining


@dataclass(frozen=True)
class Checkerboard:
    inner_rows: int = 9
    inner_cols: int = 6
    square_size: float = 160.0

    def __post_init__(self):
        if self.inner_rows < 3 or self.inner_cols < 3:
            raise InvalidDimensions(f"need at least 3x3 inner corners, got {self.inner_rows}x{self.inner_cols}")
        if not self.square_size > 0:
            raise InvalidDimensions(f"square size must be positive, got {self.square_size}")

    @property
    def corner_ids(self) -> np.ndarray:
        """``(N, 2)`` array of ``(row, col)`` in row-major order."""
        i, j = np.meshgrid(np.arange(self.inner_rows), np.arange(self.inner_cols), indexing="ij")
        return np.column_stack([i.ravel(), j.ravel()])

    @property
    def corners(self) -> np.ndarray:
        """Board coordinates ``(x, y)`` of every inner corner, centred on the origin."""
        ids = self.corner_ids
        s = self.square_size
        x = (ids[:, 1] - (self.inner_cols - 1) / 2) * s
        y = (ids[:, 0] - (self.inner_rows - 1) / 2) * s
        return np.column_stack([x, y])


def make_checkerboard(inner_rows: int, inner_cols: int, square_size: float) -> Checkerboard:
    return Checkerboard(inner_rows, inner_cols, square_size)


@dataclass(frozen=True)
class PoseRecipe:
    """How to place the board for one view.

    The board is tilted by ``dihedral_deg`` about the camera x-axis and its
    centre is put at ``(tx, ty, depth)``. That whole arrangement is then
    turned by ``alpha_deg`` about the line parallel to the optical axis
    through ``rotation_center`` (camera x-y, world units), so translations
    rotate together with the board.
    """

    dihedral_deg: float = 45.0
    alpha_deg: float = 0.0
    rotation_center: tuple[float, float] = (0.0, 0.0)
    translation: tuple[float, float] = (0.0, 0.0)
    depth: float = 2600.0

    def __post_init__(self):
        if not 0 < self.dihedral_deg < 90:
            raise InvalidRecipe(f"dihedral angle must be in (0, 90), got {self.dihedral_deg}")
        if not self.depth > 0:
            raise InvalidRecipe(f"depth must be positive, got {self.depth}")
        object.__setattr__(self, "rotation_center", tuple(float(c) for c in self.rotation_center))
        object.__setattr__(self, "translation", tuple(float(c) for c in self.translation))

    @property
    def pose_id(self) -> str:
        tx, ty = self.translation
        cx, cy = self.rotation_center
        return f"a{self.alpha_deg:g}_d{self.dihedral_deg:g}_t{tx:g},{ty:g}_c{cx:g},{cy:g}_z{self.depth:g}"


def _rot_x(deg: float) -> np.ndarray:
    c, s = np.cos(np.radians(deg)), np.sin(np.radians(deg))
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot_z(deg: float) -> np.ndarray:
    # alpha + 180 reuses the cos/sin of alpha negated, so 180-degree pairs are exact mirrors
    key = deg % 360
    flip = key >= 180
    key = key - 180 if flip else key
    if key == 0:
        c, s = 1.0, 0.0
    elif key == 90:
        c, s = 0.0, 1.0
    else:
        c, s = np.cos(np.radians(key)), np.sin(np.radians(key))
    if flip:
        c, s = -c, -s
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def realize_pose(recipe: PoseRecipe) -> BoardPose:
    Rz = _rot_z(recipe.alpha_deg)
    R = Rz @ _rot_x(recipe.dihedral_deg)
    c = np.array([*recipe.rotation_center, 0.0])
    t0 = np.array([*recipe.translation, recipe.depth])
    return BoardPose(R, Rz @ (t0 - c) + c)


def pose_ring(recipe_base: PoseRecipe, count: int = 8, delta_alpha_deg: float = 45.0) -> list[PoseRecipe]:
    if count < 2:
        raise ValueError(f"a ring needs at least 2 poses, got {count}")
    return [replace(recipe_base, alpha_deg=recipe_base.alpha_deg + k * delta_alpha_deg) for k in range(count)]


def paired_poses(alphas, recipe_base: PoseRecipe) -> list[tuple[PoseRecipe, PoseRecipe]]:
    """One ``(alpha, alpha + 180)`` pair per entry of ``alphas``."""
    return [
        (replace(recipe_base, alpha_deg=float(a)), replace(recipe_base, alpha_deg=float(a) + 180.0))
        for a in alphas
    ]


def skip_sets(count: int = 8, n: int = 0) -> list[tuple[int, ...]]:
    """Index subsets left after removing each cyclic run of ``n`` consecutive poses."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > count - 3:
        raise TooFewRemaining(f"skipping {n} of {count} poses leaves fewer than 3")
    if n == 0:
        return [tuple(range(count))]
    subsets = []
    for s in range(count):
        skipped = {(s + k) % count for k in range(n)}
        subsets.append(tuple(i for i in range(count) if i not in skipped))
    return subsets


def sub_seed(seed: int, pose_id: str) -> np.random.SeedSequence:
    """Per-pose seed derived from the run seed and a stable hash of the pose id."""
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(pose_id.encode())])


@dataclass(frozen=True)
class ObservationSet:
    pose_id: str
    board_points: np.ndarray
    pixels: np.ndarray
    noise_sigma: float | None = 0.0
    seed: int | None = None
    corner_ids: np.ndarray | None = None
    out_of_frame: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        b = np.asarray(self.board_points, dtype=float).reshape(-1, 2)
        p = np.asarray(self.pixels, dtype=float).reshape(-1, 2)
        if b.shape != p.shape:
            raise ValueError(f"board points {b.shape} and pixels {p.shape} differ in shape")
        if b.shape[0] < 4:
            raise TooFewPoints(f"pose {self.pose_id}: {b.shape[0]} correspondences, need 4")
        if not np.all(np.isfinite(p)):
            raise ValueError(f"pose {self.pose_id}: non-finite pixel coordinates")
        centred = b - b.mean(axis=0)
        if np.linalg.matrix_rank(centred, tol=1e-9 * max(1.0, np.abs(centred).max())) < 2:
            raise TooFewPoints(f"pose {self.pose_id}: board points are collinear")
        object.__setattr__(self, "board_points", b)
        object.__setattr__(self, "pixels", p)
        if self.corner_ids is not None:
            object.__setattr__(self, "corner_ids", np.asarray(self.corner_ids, dtype=int).reshape(-1, 2))

    def __len__(self):
        return self.board_points.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ObservationSet):
            return NotImplemented
        ids_equal = (self.corner_ids is None and other.corner_ids is None) or (
            self.corner_ids is not None
            and other.corner_ids is not None
            and np.array_equal(self.corner_ids, other.corner_ids)
        )
        return (
            self.pose_id == other.pose_id
            and np.array_equal(self.board_points, other.board_points)
            and np.array_equal(self.pixels, other.pixels)
            and self.noise_sigma == other.noise_sigma
            and self.seed == other.seed
            and ids_equal
        )

    __hash__ = None


def render_corners(
    cam: CameraIntrinsics,
    dist: RadialDistortion,
    recipe: PoseRecipe,
    board: Checkerboard,
    noise_sigma: float = 0.0,
    seed: int = 0,
    pose_id: str | None = None,
) -> ObservationSet:
    """Project every board corner and add i.i.d. Gaussian pixel noise.

    Noise comes from numpy's PCG64 generator seeded with
    ``sub_seed(seed, pose_id)``. Corners landing outside the image are kept
    and listed in ``out_of_frame``.
    """
    pose_id = recipe.pose_id if pose_id is None else pose_id
    pose = realize_pose(recipe)
    exact = project(cam, dist, pose, board.corners)
    pixels = exact
    if noise_sigma > 0:
        rng = np.random.Generator(np.random.PCG64(sub_seed(seed, pose_id)))
        pixels = exact + rng.normal(0.0, noise_sigma, size=exact.shape)
    w, h = cam.image_size
    outside = np.flatnonzero((pixels[:, 0] < 0) | (pixels[:, 0] >= w) | (pixels[:, 1] < 0) | (pixels[:, 1] >= h))
    return ObservationSet(
        pose_id=pose_id,
        board_points=board.corners,
        pixels=pixels,
        noise_sigma=float(noise_sigma),
        seed=int(seed),
        corner_ids=board.corner_ids,
        out_of_frame=tuple(int(i) for i in outside),
    )
