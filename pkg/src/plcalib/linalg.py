"""Small dense least-squares and nullspace helpers.

Everything here operates on plain ``numpy`` arrays; the matrices involved
(DLT systems, 2x2 normal equations, calibration Jacobians) are at most a few
thousand rows by a few dozen columns.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import Diverged, NoConvergence, RankDeficient

RANK_TOL = 1e-12


@dataclass(frozen=True)
class LeastSquaresSolution:
    solution: np.ndarray
    residual_norm: float


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def _svd(A: np.ndarray):
    try:
        return np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def solve_least_squares(A, b, rank_tol: float = RANK_TOL) -> LeastSquaresSolution:
    """Minimise ``|A x - b|`` for a tall, full-column-rank ``A``.

    Raises :class:`RankDeficient` when the smallest singular value falls
    below ``rank_tol`` times the largest.
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=float).reshape(-1)
    m, n = A.shape
    if m < n:
        raise RankDeficient(f"underdetermined system ({m} rows < {n} cols)")
    if b.shape[0] != m:
        raise ValueError(f"rhs length {b.shape[0]} does not match {m} rows")
    U, s, Vt = _svd(A)
    if s[0] == 0.0 or s[-1] < rank_tol * s[0]:
        raise RankDeficient(f"singular value ratio {s[-1] / s[0] if s[0] else 0.0:.3e}")
    x = Vt.T @ ((U.T @ b) / s)
    return LeastSquaresSolution(x, float(np.linalg.norm(A @ x - b)))


def fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so that its first nonzero entry is positive."""
    v = np.asarray(v, dtype=float)
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def smallest_right_singular_vector(A) -> np.ndarray:
    """Unit vector ``v`` minimising ``|A v|``, first nonzero entry positive."""
    A = _as_matrix(A)
    m, n = A.shape
    if m < n:
        # pad with zero rows so the full V basis is always available
        A = np.vstack([A, np.zeros((n - m, n))])
    _, _, Vt = _svd(A)
    v = Vt[-1]
    return fix_sign(v / np.linalg.norm(v))


def gauss_newton(
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    x0,
    max_iter: int = 50,
    tol: float = 1e-12,
    max_halvings: int = 20,
    stationary_rtol: float = 1e-10,
) -> np.ndarray:
    """Gauss-Newton iteration with step halving.

    The sum of squared residuals never increases between accepted iterates.
    Iteration stops once the accepted step is shorter than ``tol`` or after
    ``max_iter`` steps. :class:`Diverged` is raised when ``max_halvings``
    halvings cannot reduce the objective while the linear model still
    predicts a decrease above ``stationary_rtol`` times the cost; below that
    the iterate is returned as converged.
    """
    x = np.asarray(x0, dtype=float).copy()
    r = np.asarray(residual(x), dtype=float)
    cost = float(r @ r)
    for _ in range(max_iter):
        J = _as_matrix(jacobian(x))
        step = -solve_least_squares(J, r).solution
        predicted = cost - float(np.sum((r + J @ step) ** 2))
        t = 1.0
        for _ in range(max_halvings + 1):
            x_new = x + t * step
            r_new = np.asarray(residual(x_new), dtype=float)
            cost_new = float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                break
            t *= 0.5
        else:
            if predicted <= stationary_rtol * max(cost, 1e-300) or np.linalg.norm(step) < tol:
                return x
            raise Diverged(f"step halving failed to decrease cost {cost:.6e} (predicted decrease {predicted:.3e})")
        x, r, cost = x_new, r_new, cost_new
        if np.linalg.norm(t * step) < tol:
            break
    return x
