"""Inverse quadric RBF interpolation over small pixel windows.

The estimator fits F(x) = sum_j c_j * k(||x - x_j||) through the known pixels
(x_j, y_j), where k(r) = 1 / (1 + (eps*r)^2). Intensities are first mapped to
Y_j = exp(-y_j) so the linear system stays in a numerically small range, and
the estimate is mapped back with -log. The shape parameter follows the
heuristic eps = 0.8 * sqrt(n) / w for n centers in a window of side w.

All arithmetic is double precision. The kernel matrix is symmetric positive
definite in exact arithmetic; the solver uses a Cholesky factorization with a
small ridge ladder as a fallback for borderline conditioning, and verifies the
residual against the unmodified matrix after every solve.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# exp(-255): the smallest transformed intensity. F(x) is clamped into
# [F_FLOOR, 1] before -log, so estimates cannot leave [0, 255].
F_FLOOR = float(np.exp(-255.0))

RESIDUAL_RTOL = 1e-10
RIDGE_LADDER = (0.0, 1e-12, 1e-9, 1e-6)


class SolveFailure(ArithmeticError):
    """The interpolation system could not be solved to the residual bound."""


@njit(cache=True)
def inverse_quadric(r, epsilon):
    """Kernel value 1 / (1 + (epsilon*r)^2); 1 at r=0, strictly decreasing."""
    return 1.0 / (1.0 + (epsilon * r) ** 2)


@njit(cache=True)
def shape_parameter(n, w, coeff=0.8):
    """Shape parameter for n centers in a window of nominal side length w."""
    return coeff * np.sqrt(n) / w


@njit(cache=True)
def assemble_matrix(centers, epsilon):
    """Pairwise kernel matrix Q[i, j] = k(||x_i - x_j||) for (n, 2) centers.

    Symmetric with unit diagonal. Duplicate centers are rejected: they would
    make the matrix singular.
    """
    n = centers.shape[0]
    q = np.empty((n, n))
    for i in range(n):
        q[i, i] = 1.0
        for j in range(i):
            dr = centers[i, 0] - centers[j, 0]
            dc = centers[i, 1] - centers[j, 1]
            d2 = dr * dr + dc * dc
            if d2 == 0.0:
                raise ValueError("duplicate interpolation centers")
            v = 1.0 / (1.0 + epsilon * epsilon * d2)
            q[i, j] = v
            q[j, i] = v
    return q


@njit(cache=True)
def _cholesky_solve(a, y):
    """Solve a @ x = y for SPD a. Returns (x, ok); ok=False if not SPD."""
    n = a.shape[0]
    low = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s = a[i, j]
            for k in range(j):
                s -= low[i, k] * low[j, k]
            if i == j:
                if not (s > 0.0) or not np.isfinite(s):
                    return np.zeros(n), False
                low[i, i] = np.sqrt(s)
            else:
                low[i, j] = s / low[j, j]
    x = np.empty(n)
    for i in range(n):
        s = y[i]
        for k in range(i):
            s -= low[i, k] * x[k]
        x[i] = s / low[i, i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        for k in range(i + 1, n):
            s -= low[k, i] * x[k]
        x[i] = s / low[i, i]
    return x, True


@njit(cache=True)
def _solve_ridge(q, y):
    """Solve q @ c = y by Cholesky with a ridge ladder. Returns (c, ok).

    The residual is always checked against the original q, so a ridge rung
    only counts if the unmodified system is still satisfied to tolerance.
    """
    n = q.shape[0]
    tol = RESIDUAL_RTOL * max(np.max(np.abs(y)), 1e-300)
    for lam in RIDGE_LADDER:
        a = q.copy()
        for i in range(n):
            a[i, i] += lam
        c, ok = _cholesky_solve(a, y)
        if not ok:
            continue
        resid = 0.0
        for i in range(n):
            s = -y[i]
            for j in range(n):
                s += q[i, j] * c[j]
            resid = max(resid, abs(s))
        if resid <= tol:
            return c, True
    return np.zeros(n), False


@njit(cache=True)
def _estimate(target_r, target_c, centers, values, epsilon):
    """Full estimate at one point. Returns (intensity, ok)."""
    q = assemble_matrix(centers, epsilon)
    y = np.exp(-values)
    c, ok = _solve_ridge(q, y)
    if not ok:
        return 0.0, False
    f = 0.0
    for j in range(centers.shape[0]):
        dr = target_r - centers[j, 0]
        dc = target_c - centers[j, 1]
        f += c[j] * (1.0 / (1.0 + epsilon * epsilon * (dr * dr + dc * dc)))
    if f < F_FLOOR:
        f = F_FLOOR
    elif f > 1.0:
        f = 1.0
    return -np.log(f), True


def solve_coefficients(matrix: np.ndarray, transformed_values: np.ndarray) -> np.ndarray:
    """Solve the assembled system Q @ C = Y for the kernel coefficients.

    Y holds the exp(-intensity) transformed values. Raises SolveFailure when
    even the ridge ladder cannot meet ||Q@C - Y||_inf <= 1e-10 * ||Y||_inf.
    """
    q = np.ascontiguousarray(matrix, dtype=np.float64)
    y = np.ascontiguousarray(transformed_values, dtype=np.float64)
    c, ok = _solve_ridge(q, y)
    if not ok:
        raise SolveFailure(f"{q.shape[0]}x{q.shape[0]} kernel system not solvable to tolerance")
    return c


def estimate_intensity(target, centers, values, epsilon: float) -> float:
    """Estimate the intensity at `target` from known pixels.

    Args:
        target: (row, col) of the pixel to estimate.
        centers: (n, 2) array of known-pixel coordinates.
        values: n intensities in [0, 255] at those coordinates.
        epsilon: kernel shape parameter.

    Returns the back-transformed estimate -log(F), clamped into [0, 255].
    """
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    est, ok = _estimate(float(target[0]), float(target[1]), centers, values, float(epsilon))
    if not ok:
        raise SolveFailure(f"estimate at {tuple(target)} failed: system not solvable")
    return est
