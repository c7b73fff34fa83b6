"""Principal lines from single homographies and their least-squares intersection.

A principal line (PL) of a board view is the image of the plane that holds
the optical axis and the board normal. Every PL passes through the principal
point, so intersecting the PLs of several views yields the principal point
without knowing the focal length or the lens distortion.

With zero skew and unit aspect ratio the image of the absolute conic is,
up to scale::

    w = [[ 1,   0,  -u0],
         [ 0,   1,  -v0],
         [-u0, -v0,  f^2 + u0^2 + v0^2]]

so the two orthonormality constraints ``h1' w h2 = 0`` and
``h1' w h1 = h2' w h2`` are linear in ``(u0, v0, f^2 + u0^2 + v0^2)``.
Eliminating the last unknown leaves a single linear equation in
``(u0, v0)``: the principal line of that homography.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrontalPose, IllConditioned, NearParallelLines, TooFewLines


@dataclass(frozen=True)
class ImageLine:
    """Line ``a u + b v + c = 0`` with ``a^2 + b^2 = 1`` and ``(a, b)`` lexicographically positive."""

    a: float
    b: float
    c: float

    @classmethod
    def from_coefficients(cls, a, b, c) -> "ImageLine":
        n = float(np.hypot(a, b))
        if n == 0 or not np.isfinite(n):
            raise ValueError(f"not a line: ({a}, {b}, {c})")
        a, b, c = float(a) / n, float(b) / n, float(c) / n
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        return cls(a + 0.0, b + 0.0, c + 0.0)

    @classmethod
    def through(cls, point, direction) -> "ImageLine":
        dx, dy = direction
        a, b = -dy, dx
        return cls.from_coefficients(a, b, -(a * point[0] + b * point[1]))

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    @property
    def direction(self) -> np.ndarray:
        return np.array([self.b, -self.a])

    @property
    def angle_deg(self) -> float:
        """Direction angle folded into ``[0, 180)``."""
        return float(np.degrees(np.arctan2(-self.a, self.b)) % 180.0)

    def distance(self, point) -> float:
        return float(abs(self.a * point[0] + self.b * point[1] + self.c))

    def signed_distance(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return p[..., 0] * self.a + p[..., 1] * self.b + self.c

    def rotated_180(self, center) -> "ImageLine":
        """Image of this line under a half-turn about ``center``."""
        cx, cy = center
        # p -> 2c - p maps a u + b v + c = 0 to a u + b v - (c + 2 (a cx + b cy)) = 0
        return ImageLine.from_coefficients(self.a, self.b, -(self.c + 2 * (self.a * cx + self.b * cy)))


@dataclass(frozen=True)
class PrincipalPointEstimate:
    pp: tuple[float, float]
    per_line_distance: tuple[float, ...]
    rms_distance: float
    lines_used: tuple[str, ...]


@dataclass(frozen=True)
class DeflectionMeasure:
    angle_deg: float
    offset_px: float


def _conditioning(H: np.ndarray) -> np.ndarray:
    """Pixel similarity taking the image of the board origin to 0 and ~unit scale."""
    o = H[:2, 2] / H[2, 2] if H[2, 2] != 0 else np.zeros(2)
    s = 1.0 / max(1.0, float(np.max(np.abs(o))))
    return np.array([[s, 0.0, -s * o[0]], [0.0, s, -s * o[1]], [0.0, 0.0, 1.0]])


def _pl_coefficients(H: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    h1, h2 = H[:, 0], H[:, 1]

    def row(x, y):
        # x' w y = x1 y1 + x2 y2 - u0 (x1 y3 + x3 y1) - v0 (x2 y3 + x3 y2) + W x3 y3
        return np.array([-(x[0] * y[2] + x[2] * y[0]), -(x[1] * y[2] + x[2] * y[1]), x[2] * y[2]]), -(
            x[0] * y[0] + x[1] * y[1]
        )

    r12, d12 = row(h1, h2)
    r11, d11 = row(h1, h1)
    r22, d22 = row(h2, h2)
    e1, rhs1 = r12, d12
    e2, rhs2 = r11 - r22, d11 - d22

    scale = max(np.abs(np.concatenate([e1, e2])).max(), abs(rhs1), abs(rhs2))
    if max(abs(e1[2]), abs(e2[2])) <= rel_tol * scale:
        raise DegenerateFrontalPose("homography carries no tilt: board is parallel to the image")
    # eliminate W = f^2 + u0^2 + v0^2
    line = e1 * e2[2] - e2 * e1[2]
    c = -(rhs1 * e2[2] - rhs2 * e1[2])
    if np.hypot(line[0], line[1]) <= rel_tol * scale * max(abs(e1[2]), abs(e2[2])):
        raise IllConditioned("orthonormality constraints do not determine a line")
    return np.array([line[0], line[1], c])


def principal_line_from_homography(H) -> ImageLine:
    H = np.asarray(H, dtype=float)
    T = _conditioning(H)
    Hc = T @ H
    Hc = Hc / np.linalg.norm(Hc)
    lc = _pl_coefficients(Hc)
    # a line l' in conditioned pixels is T' l' in raw pixels
    l = T.T @ lc
    return ImageLine.from_coefficients(*l)


def vanishing_line(H) -> np.ndarray:
    H = np.asarray(H, dtype=float)
    return np.cross(H[:, 0], H[:, 1])


def _max_angular_separation(angles_deg) -> float:
    best = 0.0
    for x, y in itertools.combinations(angles_deg, 2):
        d = abs(x - y) % 180.0
        best = max(best, min(d, 180.0 - d))
    return best


def _fit_point(coeffs: np.ndarray, weights: np.ndarray, cond_limit: float):
    ab = coeffs[:, :2]
    N = (ab * weights[:, None]).T @ ab
    rhs = -(ab * weights[:, None]).T @ coeffs[:, 2]
    ev = np.linalg.eigvalsh(N)
    if ev[0] <= 0 or ev[-1] / ev[0] > cond_limit:
        raise NearParallelLines(f"line normal matrix condition {ev[-1] / max(ev[0], 1e-300):.3e}")
    return np.linalg.solve(N, rhs)


def principal_point_from_lines(
    lines,
    ids=None,
    weights=None,
    min_angle_deg: float = 1.0,
    cond_limit: float = 1e10,
) -> PrincipalPointEstimate:
    """Least-squares intersection of at least two non-parallel lines.

    Minimises the (optionally weighted) sum of squared point-line distances
    through the 2x2 normal equations.
    """
    lines = list(lines)
    if len(lines) < 2:
        raise TooFewLines(f"need at least 2 lines, got {len(lines)}")
    ids = tuple(str(i) for i in (range(len(lines)) if ids is None else ids))
    if _max_angular_separation([l.angle_deg for l in lines]) < min_angle_deg:
        raise NearParallelLines(f"all lines lie within {min_angle_deg} deg of parallel")
    coeffs = np.array([l.coefficients for l in lines])
    w = np.ones(len(lines)) if weights is None else np.asarray(weights, dtype=float)
    pp = _fit_point(coeffs, w, cond_limit)
    d = np.abs(coeffs[:, :2] @ pp + coeffs[:, 2])
    return PrincipalPointEstimate(
        pp=(float(pp[0]), float(pp[1])),
        per_line_distance=tuple(float(x) for x in d),
        rms_distance=float(np.sqrt(np.mean(d**2))),
        lines_used=ids,
    )


def _mean_angle(a_deg: float, b_deg: float) -> float:
    # average of undirected orientations via doubled angles
    t = np.radians([2 * a_deg, 2 * b_deg])
    return float(np.degrees(np.arctan2(np.sin(t).sum(), np.cos(t).sum())) / 2 % 180.0)


def principal_point_from_pairs(pairs, min_angle_deg: float = 1.0, **kwargs) -> PrincipalPointEstimate:
    """Intersect pairs of nearly parallel lines (one view and its 180-degree partner)."""
    pairs = list(pairs)
    if len(pairs) < 2:
        raise NearParallelLines(f"need at least 2 pairs, got {len(pairs)}")
    mean_dirs = [_mean_angle(p.angle_deg, q.angle_deg) for p, q in pairs]
    if _max_angular_separation(mean_dirs) < min_angle_deg:
        raise NearParallelLines(f"pair directions lie within {min_angle_deg} deg of each other")
    lines = [l for pair in pairs for l in pair]
    ids = [f"pair{k}:{m}" for k in range(len(pairs)) for m in (0, 1)]
    return principal_point_from_lines(lines, ids=ids, min_angle_deg=min_angle_deg, **kwargs)


def reject_outlier_lines(lines, max_rounds: int = 10, distance_threshold_px: float = 25.0, ids=None):
    """Greedy trimming of lines that miss the common intersection.

    Each round refits the point and drops the single farthest line if it is
    beyond ``distance_threshold_px``. Returns ``(kept_lines, removed_ids)``.
    """
    lines = list(lines)
    if len(lines) < 3:
        raise TooFewLines(f"outlier rejection needs at least 3 lines, got {len(lines)}")
    ids = [str(i) for i in (range(len(lines)) if ids is None else ids)]
    removed = []
    for _ in range(max_rounds):
        if len(lines) <= 2:
            break
        est = principal_point_from_lines(lines, ids=ids)
        worst = int(np.argmax(est.per_line_distance))
        if not est.per_line_distance[worst] > distance_threshold_px:
            break
        removed.append(ids.pop(worst))
        lines.pop(worst)
    return lines, removed


def line_deflection(line: ImageLine, reference_line: ImageLine, reference_point) -> DeflectionMeasure:
    """Orientation change against ``reference_line`` and distance of ``reference_point`` from ``line``."""
    # atan2 stays accurate for nearly parallel lines, where arccos of the dot product does not
    cross = abs(line.a * reference_line.b - line.b * reference_line.a)
    dot = abs(line.a * reference_line.a + line.b * reference_line.b)
    return DeflectionMeasure(float(np.degrees(np.arctan2(cross, dot))), line.distance(reference_point))


def principal_line_of(obs) -> ImageLine:
    """Convenience: estimate the homography of an observation set and return its PL."""
    from .homography import estimate_homography

    return principal_line_from_homography(estimate_homography(obs))

