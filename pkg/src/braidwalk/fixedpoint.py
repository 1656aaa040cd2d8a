"""Monotone fixed-point iteration for first-passage systems.

Both first-passage systems in this package have a right-hand side that is
a polynomial with nonnegative coefficients, so iterating from the zero
vector produces a nondecreasing sequence converging to the minimal
nonnegative solution, which is the probabilistic one.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

TOL = 1e-14
MAX_ITER = 1_000_000


class NonConvergence(RuntimeError):
    pass


class MonotonicityError(AssertionError):
    pass


def iterate(
    rhs: Callable[[np.ndarray], np.ndarray],
    start: np.ndarray,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
    monotone: bool = True,
) -> tuple[np.ndarray, int]:
    """Iterate ``y <- rhs(y)`` until the max-norm step is below ``tol``.

    With ``monotone=True`` every sweep is checked to be componentwise
    nondecreasing (up to rounding), as it must be from the zero vector.
    """
    y = np.asarray(start, dtype=float)
    for it in range(1, max_iter + 1):
        z = rhs(y)
        if monotone and np.any(z < y - 1e-15):
            raise MonotonicityError(f"iterate decreased at sweep {it}")
        if np.max(np.abs(z - y)) < tol:
            return z, it
        y = z
    raise NonConvergence(f"no convergence within {max_iter} sweeps (near-critical input?)")


def minimal_solution(rhs, size: int, **kw) -> tuple[np.ndarray, int]:
    return iterate(rhs, np.zeros(size), **kw)


def newton(rhs, jac, start: np.ndarray, tol: float = TOL, max_iter: int = 200) -> tuple[np.ndarray, int]:
    """Newton's method on ``y - rhs(y) = 0``.

    Used to land on non-minimal (repelling) fixed points, which plain
    iteration cannot reach.
    """
    y = np.asarray(start, dtype=float)
    eye = np.eye(len(y))
    for it in range(1, max_iter + 1):
        step = np.linalg.solve(eye - jac(y), y - rhs(y))
        y = y - step
        if np.max(np.abs(step)) < tol:
            return y, it
    raise NonConvergence(f"Newton did not converge within {max_iter} steps")
