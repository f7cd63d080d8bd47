from __future__ import annotations

import logging

import numpy as np
import pandas as pd

from .exceptions import LCurveError
from .objects import SampleSet
from .sipfit import solve_relaxation

__all__ = ["lcurve_sweep", "find_corner", "lcurve"]

logger = logging.getLogger(__name__)

STRAIGHT = 1e-12


def lcurve_sweep(samples: SampleSet, M: int, N: int, sigmas: list[float], tau: float = 1.0) -> pd.DataFrame:
    """
    Solve the regularized relaxation for every sigma, constrained at the sample points.

    Returns one row per sigma, ascending: the data misfit ||A theta|| and the coefficient norm ||theta||.
    """
    sigmas = np.asarray(sigmas, dtype=float)
    if sigmas.size < 3:
        raise LCurveError(f"An L-curve needs at least 3 sigma values, got {sigmas.size}")
    if np.any(sigmas <= 0) or not np.all(np.isfinite(sigmas)):
        raise LCurveError("Every sigma of an L-curve should be a positive number")
    if np.unique(sigmas).size != sigmas.size:
        raise LCurveError("The sigma values of an L-curve should be distinct")

    rows = []
    for sigma in np.sort(sigmas):
        relaxed = solve_relaxation(samples, samples.points, M, N, tau, float(sigma))
        theta = np.concatenate([relaxed.a, relaxed.b])
        coefficient_norm = float(np.linalg.norm(theta))
        residual_norm = float(np.sqrt(max(relaxed.objective - sigma * coefficient_norm**2, 0.0)))
        rows.append({"sigma": float(sigma), "residual_norm": residual_norm, "coefficient_norm": coefficient_norm})
        logger.debug("sigma=%.3e: residual %.6e, coefficients %.6e", sigma, residual_norm, coefficient_norm)

    return pd.DataFrame(rows, columns=["sigma", "residual_norm", "coefficient_norm"])


def find_corner(residual_norms, coefficient_norms) -> int:
    """Index of the point of the log-log curve furthest from the chord joining its ends."""
    x = np.log10(np.maximum(np.asarray(residual_norms, dtype=float), 1e-300))
    y = np.log10(np.maximum(np.asarray(coefficient_norms, dtype=float), 1e-300))
    if x.size < 3 or x.size != y.size:
        raise LCurveError(f"Need at least 3 matching points to find a corner, got {x.size} and {y.size}")

    chord = np.array([x[-1] - x[0], y[-1] - y[0]])
    length = float(np.hypot(*chord))
    distance = np.abs(chord[0] * (y - y[0]) - chord[1] * (x - x[0])) / length if length else np.zeros_like(x)

    if not length or distance.max() <= STRAIGHT * max(length, 1.0):
        logger.warning("The L-curve has no corner; taking its first point")
        return 0

    return int(np.argmax(distance))


def lcurve(samples: SampleSet, M: int, N: int, sigmas: list[float], tau: float = 1.0) -> tuple[pd.DataFrame, float]:
    curve = lcurve_sweep(samples, M, N, sigmas, tau)
    corner = find_corner(curve["residual_norm"], curve["coefficient_norm"])
    sigma = float(curve["sigma"].iloc[corner])
    logger.info("L-curve corner at sigma = %.3e", sigma)
    return curve, sigma
