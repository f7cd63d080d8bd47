from __future__ import annotations

import logging

import numpy as np

from .models import RationalModel
from .objects import PoleMetrics

__all__ = ["test_error", "pole_points", "residuals"]

logger = logging.getLogger(__name__)


def residuals(model: RationalModel, points: np.ndarray, values: np.ndarray) -> np.ndarray:
    """r(x) - f(x) per point; a vanishing denominator gives +inf there."""
    p, q = model.parts(points)
    zero = q == 0
    if np.any(zero):
        logger.warning("The denominator vanishes at %d of %d test points", int(zero.sum()), q.shape[0])

    with np.errstate(divide="ignore", invalid="ignore"):
        out = p / q - np.asarray(values, dtype=float)
    out[zero] = np.inf
    return out


def test_error(model: RationalModel, test_points: np.ndarray, test_values: np.ndarray) -> float:
    """Discrete L2 error: the root of the summed squared residuals."""
    res = residuals(model, test_points, test_values)
    return float(np.sqrt(np.sum(np.square(res))))


test_error.__test__ = False  # not a pytest test


def _pole_like(r: np.ndarray, f: np.ndarray, t: float) -> np.ndarray:
    f_max = float(np.max(np.abs(f), initial=0.0))
    return ~(np.abs(r) / max(1.0, f_max) <= t)


def pole_points(
    model: RationalModel,
    face_points: np.ndarray,
    face_values: np.ndarray,
    interior_points: np.ndarray,
    interior_values: np.ndarray,
    t: float,
) -> PoleMetrics:
    """
    Count the test points where |r| exceeds t times the largest |f| of their set (floored at 1).

    Faces and interior are normalised separately. The error is split over the pole-like points
    and the rest, so that E_pole^2 + E_nonpole^2 = delta_r^2.
    """
    if t <= 1:
        raise ValueError(f"The pole threshold should exceed 1, got {t}")

    face_values = np.asarray(face_values, dtype=float)
    interior_values = np.asarray(interior_values, dtype=float)

    with np.errstate(divide="ignore", invalid="ignore"):
        r_face = model(face_points) if len(face_values) else np.zeros(0)
        r_in = model(interior_points) if len(interior_values) else np.zeros(0)

    w_face = _pole_like(r_face, face_values, t)
    w_in = _pole_like(r_in, interior_values, t)

    squared = np.square(np.concatenate([r_face - face_values, r_in - interior_values]))
    squared[np.isnan(squared)] = np.inf
    in_w = np.concatenate([w_face, w_in])

    return PoleMetrics(
        t=t,
        count_face=int(w_face.sum()),
        count_in=int(w_in.sum()),
        E_pole=float(np.sqrt(squared[in_w].sum())),
        E_nonpole=float(np.sqrt(squared[~in_w].sum())),
        delta_r=float(np.sqrt(squared.sum())),
        face_indices=tuple(np.flatnonzero(w_face).tolist()),
        interior_indices=tuple(np.flatnonzero(w_in).tolist()),
    )
