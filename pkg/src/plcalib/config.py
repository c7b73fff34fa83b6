"""Experiment configuration: a flat YAML mapping of documented keys.

Every key is optional; omitted keys take the defaults below, which follow
the synthetic setup used throughout the package (f = 1600 px,
``(k1, k2) = (-0.1, -0.02)``, board centre at depth 2600, 45-degree tilt,
eight views 45 degrees apart). Unknown keys are rejected.

=====================  ==========================================================
key                    meaning
=====================  ==========================================================
focal_px               focal length in pixels
principal_point        ``[u0, v0]`` in pixels
image_size             ``[width, height]`` in pixels
k1, k2                 radial distortion coefficients
board_rows             inner corner rows
board_cols             inner corner columns
square_size            board square size, world units
dihedral_deg           tilt between board and image plane
depth                  board centre depth, world units
rotation_center        ``[x, y]`` where the rotation axis pierces the x-y plane
ring_count             number of views in the ring
delta_alpha_deg        angular step between views
translations           list of ``[tx, ty]`` board-centre shifts (world units)
sweep_steps            shift magnitudes for the translation sweep
pair_alphas            first member angles of the 180-degree pairs
skip_n                 list of run lengths for the skip protocol
noise_sigma            corner noise standard deviation, pixels
seed                   run seed
method                 ``pl``, ``zhang`` or ``both``
zhang_variants         subset of ``[alternation, refined]``
outlier_threshold_px   trim lines farther than this from the PP (null = off)
=====================  ==========================================================
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import yaml

from .camera import CameraIntrinsics, RadialDistortion
from .errors import CalibrationError, ConfigError
from .scene import Checkerboard, PoseRecipe

METHODS = ("pl", "zhang", "both")
ZHANG_VARIANTS = ("alternation", "refined")


def _pairs(value, name):
    try:
        out = tuple((float(a), float(b)) for a, b in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a list of [x, y] pairs") from exc
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    focal_px: float = 1600.0
    principal_point: tuple[float, float] = (960.0, 540.0)
    image_size: tuple[int, int] = (1920, 1080)
    k1: float = -0.1
    k2: float = -0.02
    board_rows: int = 9
    board_cols: int = 6
    square_size: float = 160.0
    dihedral_deg: float = 45.0
    depth: float = 2600.0
    rotation_center: tuple[float, float] = (0.0, 0.0)
    ring_count: int = 8
    delta_alpha_deg: float = 45.0
    translations: tuple[tuple[float, float], ...] = ((0.0, 0.0), (50.0, 0.0), (0.0, 50.0))
    sweep_steps: tuple[float, ...] = tuple(float(t) for t in range(0, 201, 25))
    pair_alphas: tuple[float, ...] = (0.0, 45.0, 90.0, 135.0)
    skip_n: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
    noise_sigma: float = 0.0
    seed: int = 0
    method: str = "both"
    zhang_variants: tuple[str, ...] = ZHANG_VARIANTS
    outlier_threshold_px: float | None = None

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        try:
            set_("principal_point", tuple(float(x) for x in self.principal_point))
            set_("image_size", tuple(int(x) for x in self.image_size))
            set_("rotation_center", tuple(float(x) for x in self.rotation_center))
            set_("translations", _pairs(self.translations, "translations"))
            set_("sweep_steps", tuple(float(t) for t in self.sweep_steps))
            set_("pair_alphas", tuple(float(a) for a in self.pair_alphas))
            set_("skip_n", tuple(int(n) for n in self.skip_n))
            set_("zhang_variants", tuple(str(v) for v in self.zhang_variants))
            for name in ("focal_px", "k1", "k2", "square_size", "dihedral_deg", "depth", "delta_alpha_deg", "noise_sigma"):
                set_(name, float(getattr(self, name)))
            for name in ("board_rows", "board_cols", "ring_count", "seed"):
                set_(name, int(getattr(self, name)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        bad = [v for v in self.zhang_variants if v not in ZHANG_VARIANTS]
        if bad:
            raise ConfigError(f"unknown zhang variants {bad}")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be non-negative")
        if self.ring_count < 3:
            raise ConfigError("ring_count must be at least 3")
        if any(n < 0 for n in self.skip_n):
            raise ConfigError("skip_n entries must be non-negative")
        # module-level invariants are enforced by constructing the objects
        try:
            self.camera()
            self.distortion()
            self.board()
            self.base_recipe()
        except CalibrationError as exc:
            raise ConfigError(str(exc)) from exc

    def camera(self) -> CameraIntrinsics:
        return CameraIntrinsics(self.focal_px, self.principal_point, self.image_size)

    def distortion(self) -> RadialDistortion:
        return RadialDistortion.for_camera(self.camera(), self.k1, self.k2)

    def board(self) -> Checkerboard:
        return Checkerboard(self.board_rows, self.board_cols, self.square_size)

    def base_recipe(self, translation=(0.0, 0.0)) -> PoseRecipe:
        return PoseRecipe(
            dihedral_deg=self.dihedral_deg,
            rotation_center=self.rotation_center,
            translation=tuple(translation),
            depth=self.depth,
        )

    @property
    def methods(self) -> tuple[str, ...]:
        """Method labels as they appear in reports."""
        out = []
        if self.method in ("pl", "both"):
            out.append("pl")
        if self.method in ("zhang", "both"):
            out += ["zhang" if v == "alternation" else "zhang_refined" for v in self.zhang_variants]
        return tuple(out)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_items(self) -> list[tuple[str, str]]:
        """Resolved ``(key, json value)`` pairs in declaration order."""
        out = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            out.append((f.name, json.dumps(v, sort_keys=True)))
        return out


def config_from_mapping(data) -> ExperimentConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of keys to values")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return ExperimentConfig(**data)


def load_config(path) -> ExperimentConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_mapping(data)


def dump_config(config: ExperimentConfig) -> str:
    data = {}
    for f in dataclasses.fields(config):
        v = getattr(config, f.name)
        if isinstance(v, tuple):
            v = [list(x) if isinstance(x, tuple) else x for x in v]
        data[f.name] = v
    return yaml.safe_dump(data, sort_keys=False)
