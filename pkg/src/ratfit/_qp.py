"""Primal active-set method for linear least squares under linear inequality constraints."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg
from pydantic.dataclasses import dataclass

from .exceptions import InfeasibleRelaxationError, NonConvergenceError
from .objects import Vector, _arrays

__all__ = ["ConstrainedLsqSolution", "solve_constrained_lsq"]

logger = logging.getLogger(__name__)

RCOND = 1e-12
NULL_RCOND = 1e-10


@dataclass(config=_arrays, eq=False)
class ConstrainedLsqSolution:
    x: Vector
    objective: float
    working_set: tuple[int, ...]
    multipliers: Vector
    iterations: int
    stationarity: float
    infeasibility: float


def _kkt_multipliers(G: np.ndarray, working: list[int], gradient: np.ndarray) -> np.ndarray:
    if not working:
        return np.zeros(0)
    return scipy.linalg.lstsq(G[working].T, gradient, lapack_driver="gelsd")[0]


def _free_directions(G: np.ndarray, working: list[int], n: int) -> np.ndarray:
    """Orthonormal basis of the directions that keep every working constraint at its bound."""
    if not working:
        return np.eye(n)
    return scipy.linalg.null_space(G[working], rcond=NULL_RCOND)


def solve_constrained_lsq(
    C: np.ndarray,
    d: np.ndarray,
    G: np.ndarray,
    h: np.ndarray,
    x0: np.ndarray,
    *,
    max_iterations: int | None = None,
    tol: float = 1e-10,
) -> ConstrainedLsqSolution:
    """
    Minimise ||C x - d||^2 subject to G x >= h, starting from the feasible point x0.

    Each iteration solves the equality-constrained subproblem on the working set through a
    null-space basis of the working rows (minimum-norm when the reduced problem is singular).
    A zero step triggers the multiplier check; a non-zero step is cut at the first blocking
    constraint, which then joins the working set. Working rows stay linearly independent: a
    row that lies in the span of the working rows cannot block. After a zero-length step the
    smallest eligible index is dropped or added (Bland's rule), so degenerate vertices do not cycle.
    """
    C = np.asarray(C, dtype=float)
    d = np.asarray(d, dtype=float)
    G = np.atleast_2d(np.asarray(G, dtype=float))
    h = np.asarray(h, dtype=float)
    x = np.array(x0, dtype=float)

    n = x.shape[0]
    g_norms = np.maximum(np.linalg.norm(G, axis=1), 1e-300)
    feasibility_tol = 1e-9 * max(1.0, float(np.max(np.abs(h), initial=0.0)))
    if np.any(G @ x - h < -feasibility_tol):
        raise InfeasibleRelaxationError("The starting point of the constrained least-squares solve is infeasible")

    if max_iterations is None:
        max_iterations = 10 * (n + G.shape[0])

    working: list[int] = []
    degenerate = False
    at_minimum = False
    Z = np.eye(n)
    for iteration in range(1, max_iterations + 1):
        residual = C @ x - d

        if not at_minimum:
            Z = _free_directions(G, working, n)
            if Z.shape[1]:
                p = Z @ scipy.linalg.lstsq(C @ Z, -residual, cond=RCOND, lapack_driver="gelsd")[0]
            else:
                p = np.zeros(n)
            at_minimum = bool(np.linalg.norm(p) <= tol * max(1.0, float(np.linalg.norm(x))))

        if at_minimum:
            gradient = 2 * C.T @ residual
            lam = _kkt_multipliers(G, working, gradient)
            scale = max(1.0, float(np.max(np.abs(lam), initial=0.0)))
            negative = np.flatnonzero(lam < -tol * scale)
            if negative.size == 0:
                multipliers = np.zeros(G.shape[0])
                multipliers[working] = np.maximum(lam, 0.0)
                stationarity = float(np.linalg.norm(gradient - G.T @ multipliers))
                infeasibility = float(max(0.0, -(G @ x - h).min()))
                logger.debug("Constrained least squares solved in %d iterations, %d active constraints", iteration, len(working))
                return ConstrainedLsqSolution(
                    x=x,
                    objective=float(residual @ residual),
                    working_set=tuple(sorted(working)),
                    multipliers=multipliers,
                    iterations=iteration,
                    stationarity=stationarity,
                    infeasibility=infeasibility,
                )

            if degenerate:
                position = min(negative, key=lambda k: working[k])
            else:
                position = int(negative[np.argmin(lam[negative])])
            dropped = working.pop(int(position))
            at_minimum = False
            logger.debug("Dropping constraint %d from the working set", dropped)
            continue

        Gp = G @ p
        slack = np.maximum(G @ x - h, 0.0)
        independent = np.linalg.norm(G @ Z, axis=1) > NULL_RCOND * g_norms  # rows in the span of the working set never block
        candidates = np.flatnonzero((Gp < -1e-14 * g_norms * np.linalg.norm(p)) & independent)

        step, blocking = 1.0, None
        if candidates.size:
            ratios = slack[candidates] / -Gp[candidates]
            first = int(np.argmin(ratios))  # ties go to the smallest index
            if ratios[first] < 1.0:
                step, blocking = float(ratios[first]), int(candidates[first])

        x = x + step * p
        degenerate = step == 0.0
        at_minimum = blocking is None
        if blocking is not None:
            working.append(blocking)
            logger.debug("Constraint %d blocks the step at length %.3e", blocking, step)

    raise NonConvergenceError(f"The active-set solve did not converge within {max_iterations} iterations")
