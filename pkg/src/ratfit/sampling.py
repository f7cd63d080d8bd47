from __future__ import annotations

import logging
from typing import Literal

import numpy as np
from scipy.stats import qmc

from .exceptions import DomainError
from .multiindex import alpha
from .objects import Box, DesignCounts, DesignSpec

__all__ = ["lhs", "dlhd", "design_points", "add_noise", "test_points", "tensor_grid", "sample_size"]

logger = logging.getLogger(__name__)

Strategy = Literal["lhs", "dlhd"]


def sample_size(n: int, M: int, N: int) -> int:
    """Twice the number of coefficients of a (M, N) rational function."""
    return 2 * (alpha(n, M) + alpha(n, N))


def _unit_lhs(d: int, K: int, rng: np.random.Generator) -> np.ndarray:
    return qmc.LatinHypercube(d=d, scramble=True, seed=rng).random(K)


def lhs(spec: DesignSpec) -> np.ndarray:
    """
    Latin hypercube sample: per coordinate one point in each of K equal-width strata.

    Example:
    -------
    >>> points = lhs(DesignSpec(domain=Box.unit(2), K=84, seed=1))
    >>> points.shape
    (84, 2)
    """
    sample = _unit_lhs(spec.n, spec.K, np.random.default_rng(spec.seed))
    return qmc.scale(sample, spec.domain.lower, spec.domain.upper)


def dlhd(n: int, M: int, N: int, domain: Box, seed: int = 0) -> tuple[np.ndarray, DesignCounts]:
    """
    Decoupled Latin hypercube design.

    Every facet gets its own (n-1)-dimensional LHS of K_fc points with the fixed coordinate at its
    bound, the interior an independent n-dimensional LHS of the remaining K_in points. Face points
    come first, ordered lower then upper facet per coordinate.
    """
    if n < 2:
        raise DomainError(f"A decoupled design needs at least 2 dimensions, got {n}")
    if domain.n != n:
        raise DomainError(f"The domain has {domain.n} coordinates, expected {n}")

    K = sample_size(n, M, N)
    K_fc = (alpha(n - 1, M) + alpha(n - 1, N)) // n
    K_in = K - 2 * n * K_fc
    if K_in < 0:
        raise DomainError(f"Degrees ({M}, {N}) leave no interior points in {n} dimensions")

    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2 * n + 1)]

    parts = []
    if K_fc:
        for facet in range(2 * n):
            i, upper = divmod(facet, 2)
            others = [c for c in range(n) if c != i]
            face = np.empty((K_fc, n))
            face[:, others] = qmc.scale(_unit_lhs(n - 1, K_fc, streams[facet]), domain.lower[others], domain.upper[others])
            face[:, i] = domain.upper[i] if upper else domain.lower[i]
            parts.append(face)

    if K_in:
        parts.append(qmc.scale(_unit_lhs(n, K_in, streams[-1]), domain.lower, domain.upper))

    logger.debug("Decoupled design with %d points: %d per face, %d inside", K, K_fc, K_in)
    return np.vstack(parts), DesignCounts(K=K, K_fc=K_fc, K_in=K_in)


def design_points(strategy: Strategy, domain: Box, M: int, N: int, seed: int = 0) -> np.ndarray:
    if strategy == "dlhd":
        return dlhd(domain.n, M, N, domain, seed)[0]
    if strategy == "lhs":
        return lhs(DesignSpec(domain=domain, K=sample_size(domain.n, M, N), seed=seed))
    raise ValueError(f"Unknown sampling strategy {strategy!r}")


def add_noise(values: np.ndarray, epsilon: float, seed: int = 0) -> np.ndarray:
    """Multiplicative noise f * (1 + epsilon * z) with z standard normal."""
    if epsilon < 0:
        raise ValueError(f"The noise level cannot be negative, got {epsilon}")

    values = np.asarray(values, dtype=float)
    z = np.random.default_rng(seed).standard_normal(values.shape)
    return values * (1 + epsilon * z)


def test_points(domain: Box, face_count: int, interior_count: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Uniform random points on the 2n facets and inside the box."""
    rng = np.random.default_rng(seed)
    n = domain.n

    base, extra = divmod(face_count, 2 * n)
    faces = []
    for facet in range(2 * n):
        i, upper = divmod(facet, 2)
        face = rng.uniform(domain.lower, domain.upper, size=(base + (facet < extra), n))
        face[:, i] = domain.upper[i] if upper else domain.lower[i]
        faces.append(face)

    interior = rng.uniform(domain.lower, domain.upper, size=(interior_count, n))
    return np.vstack(faces), interior


test_points.__test__ = False  # not a pytest test


def tensor_grid(domain: Box, per_axis: int) -> np.ndarray:
    """Equispaced tensor grid including the bounds."""
    if per_axis < 2:
        raise ValueError(f"A tensor grid needs at least 2 nodes per axis, got {per_axis}")

    axes = [np.linspace(lo, hi, per_axis) for lo, hi in domain.bounds]
    return np.stack([g.reshape(-1) for g in np.meshgrid(*axes, indexing="ij")], axis=1)
