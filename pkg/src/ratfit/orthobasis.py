from __future__ import annotations

import logging
from functools import cached_property
from typing import Annotated

import numpy as np
from pydantic.dataclasses import Field, dataclass

from .exceptions import RankDeficiencyError
from .multiindex import MultiIndexOrder, alpha, generate_order
from .objects import Matrix, SampleSet, _arrays

__all__ = ["OrthonormalBasis", "build_basis", "evaluate_basis", "evaluate_series", "RANK_TOLERANCE"]

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10


@dataclass(config=_arrays, eq=False)
class OrthonormalBasis:
    """
    Polynomials orthonormal for the discrete inner product of a sample set.

    Column i of ``R`` holds the projection coefficients of ``x_j * phi_k`` onto the earlier
    basis functions (rows < i) and the normalisation on the diagonal, where (k, j) is the parent
    of monomial i in the ordering. ``R[0, 0]`` is ``norm0``.
    """

    n: Annotated[int, Field(ge=1)]
    L: Annotated[int, Field(ge=0)]
    norm0: Annotated[float, Field(gt=0)]
    R: Matrix

    def __post_init__(self):
        size = alpha(self.n, self.L)
        if self.R.shape != (size, size):
            raise ValueError(f"The recurrence matrix should be {size}x{size}, got {self.R.shape[0]}x{self.R.shape[1]}")

    @cached_property
    def order(self) -> MultiIndexOrder:
        return generate_order(self.n, self.L)

    @property
    def size(self) -> int:
        return self.R.shape[0]

    def truncate(self, L: int) -> OrthonormalBasis:
        """The basis of degree <= L; its functions are the leading ones of this basis, unchanged."""
        if L > self.L:
            raise ValueError(f"Cannot extend a degree {self.L} basis to degree {L}")
        size = alpha(self.n, L)
        return OrthonormalBasis(n=self.n, L=L, norm0=self.norm0, R=self.R[:size, :size].copy())


def build_basis(samples: SampleSet, L: int) -> tuple[OrthonormalBasis, np.ndarray]:
    """
    Stieltjes process: orthonormalise ``x_j * phi_k`` against all earlier columns, twice.

    Returns the basis and the K x alpha(L) matrix V of its values at the sample points.
    """
    order = generate_order(samples.n, L)
    points = samples.points
    K, size = samples.K, len(order)

    norm0 = float(np.sqrt(K))
    V = np.zeros((K, size))
    R = np.zeros((size, size))
    V[:, 0] = 1.0 / norm0
    R[0, 0] = norm0

    largest = 0.0
    for i in range(1, size):
        parent, variable = order.parents[i]
        v = points[:, variable] * V[:, parent]
        raw = float(np.linalg.norm(v))

        first = V[:, :i].T @ v
        v = v - V[:, :i] @ first
        second = V[:, :i].T @ v
        v = v - V[:, :i] @ second

        r_ii = float(np.linalg.norm(v))
        reference = max(largest, raw)
        if r_ii <= RANK_TOLERANCE * reference:
            raise RankDeficiencyError(i, r_ii / reference if reference else 0.0)

        R[:i, i] = first + second
        R[i, i] = r_ii
        V[:, i] = v / r_ii
        largest = max(largest, r_ii)

    logger.debug("Built a degree %d orthonormal basis with %d functions on %d points", L, size, K)
    return OrthonormalBasis(n=samples.n, L=L, norm0=norm0, R=R), V


def evaluate_basis(basis: OrthonormalBasis, x: np.ndarray) -> np.ndarray:
    """
    All basis functions at x, by running the recurrence; never touches a monomial.

    A single point gives a vector of length alpha(L), a P x n matrix of points gives P x alpha(L).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    points = x.reshape(1, -1) if single else x
    if points.shape[1] != basis.n:
        raise ValueError(f"Expected points of dimension {basis.n}, got {points.shape[1]}")

    R = basis.R
    parents = basis.order.parents
    phi = np.empty((points.shape[0], basis.size))
    phi[:, 0] = 1.0 / basis.norm0
    for i in range(1, basis.size):
        parent, variable = parents[i]
        phi[:, i] = (points[:, variable] * phi[:, parent] - phi[:, :i] @ R[:i, i]) / R[i, i]

    return phi[0] if single else phi


def evaluate_series(basis: OrthonormalBasis, coeffs: np.ndarray, x: np.ndarray) -> float | np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
    if coeffs.shape[0] != basis.size:
        raise ValueError(f"Expected {basis.size} coefficients, got {coeffs.shape[0]}")

    return evaluate_basis(basis, x) @ coeffs
