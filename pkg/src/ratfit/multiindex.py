from __future__ import annotations

import functools
import math
from functools import cached_property

import numpy as np
from pydantic import field_validator
from pydantic.dataclasses import dataclass

from .exceptions import DegreeOverflowError

__all__ = ["MAX_DEGREE", "MultiIndex", "MultiIndexOrder", "alpha", "compare_order", "generate_order"]

MAX_DEGREE = 255


def _check_degree(d: int) -> None:
    if d > MAX_DEGREE:
        raise DegreeOverflowError(f"Degree {d} is larger than the supported maximum of {MAX_DEGREE}")


@functools.cache
def alpha(n: int, d: int) -> int:
    """Dimension of the space of n-variate polynomials of total degree at most d."""
    if n < 1:
        raise ValueError(f"The dimension should be at least 1, got {n}")
    if d < 0:
        raise ValueError(f"The degree should be non-negative, got {d}")
    _check_degree(d)

    return math.comb(n + d, d)


@dataclass(frozen=True)
class MultiIndex:
    exponents: tuple[int, ...]

    @field_validator("exponents")
    @classmethod
    def _small_unsigned(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("A multi-index needs at least one exponent")
        if any(e < 0 or e > MAX_DEGREE for e in value):
            raise ValueError(f"Exponents should lie in [0, {MAX_DEGREE}], got {value}")
        return value

    @property
    def n(self) -> int:
        return len(self.exponents)

    def degree(self) -> int:
        return sum(self.exponents)

    def times(self, variable: int) -> MultiIndex:
        """The index of this monomial multiplied by x_{variable}."""
        bumped = list(self.exponents)
        bumped[variable] += 1
        return MultiIndex(tuple(bumped))

    def __lt__(self, other: MultiIndex) -> bool:
        return compare_order(self, other) < 0

    def __str__(self) -> str:
        if self.degree() == 0:
            return "1"

        names = "xyz" if self.n <= 3 else [f"x{i + 1}" for i in range(self.n)]
        parts = []
        for name, e in zip(names, self.exponents):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if self.n > 3 else "".join(parts)


def compare_order(a: MultiIndex, b: MultiIndex) -> int:
    """
    Three-way comparison in the degree-compatible monomial order.

    Lower total degree comes first. Equal degrees are broken at the first differing
    exponent: the index with the LARGER exponent there is the smaller one (x^2 < xy).
    """
    if a.n != b.n:
        raise ValueError(f"Cannot compare multi-indices of different dimensions ({a.n} and {b.n})")

    da, db = a.degree(), b.degree()
    if da != db:
        return -1 if da < db else 1

    for i, j in zip(a.exponents, b.exponents):
        if i != j:
            return -1 if i > j else 1

    return 0


@dataclass(frozen=True)
class MultiIndexOrder:
    """
    The ordered monomials of degree at most L in n variables.

    Alongside the sequence we keep, for every entry but the constant, the earlier entry it was
    produced from and the variable it was multiplied by. The orthonormal basis recurrence walks
    the exact same parent table.
    """

    n: int
    L: int
    sequence: tuple[MultiIndex, ...]
    parents: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.sequence)

    def __iter__(self):
        yield from self.sequence

    def __getitem__(self, item: int) -> MultiIndex:
        return self.sequence[item]

    def size(self, d: int) -> int:
        """Number of leading entries with degree <= d."""
        return alpha(self.n, d)

    @cached_property
    def exponent_matrix(self) -> np.ndarray:
        return np.array([idx.exponents for idx in self.sequence], dtype=np.int64)

    @cached_property
    def position(self) -> dict[tuple[int, ...], int]:
        return {idx.exponents: i for i, idx in enumerate(self.sequence)}

    def monomials(self, points: np.ndarray, d: int | None = None) -> np.ndarray:
        """Values of the first alpha(d) monomials at each point, built by the same multiply-by-variable sweep."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        count = len(self) if d is None else self.size(d)

        out = np.empty((points.shape[0], count))
        out[:, 0] = 1.0
        for i in range(1, count):
            parent, variable = self.parents[i]
            out[:, i] = out[:, parent] * points[:, variable]
        return out

    def derivative_coefficients(self, coeffs: np.ndarray) -> np.ndarray:
        """
        Coefficients of the partial derivatives of sum_i coeffs[i] * m_i, in the same monomials.

        Column j holds d/dx_j; the result has shape (len(coeffs), n).
        """
        coeffs = np.asarray(coeffs, dtype=float)
        exps = self.exponent_matrix[: coeffs.shape[0]]

        out = np.zeros((coeffs.shape[0], self.n))
        for i, j in zip(*np.nonzero(exps)):
            lowered = list(exps[i])
            lowered[j] -= 1
            out[self.position[tuple(lowered)], j] += exps[i, j] * coeffs[i]
        return out


def generate_order(n: int, L: int) -> MultiIndexOrder:
    """
    List the monomials of degree <= L in order, inductively.

    For every degree, each variable x_j multiplies the run of previous-degree monomials that
    contain no variable before x_j. `starts[j]` marks where that run begins; `starts[n]` is the
    last index of the previous degree.
    """
    if n < 1:
        raise ValueError(f"The dimension should be at least 1, got {n}")
    if L < 0:
        raise ValueError(f"The degree should be non-negative, got {L}")
    _check_degree(L)

    sequence = [MultiIndex((0,) * n)]
    parents = [(-1, -1)]
    starts = [0] * (n + 1)

    i = 1
    for _ in range(1, L + 1):
        for j in range(n):
            i_star = i
            for k in range(starts[j], starts[n] + 1):
                sequence.append(sequence[k].times(j))
                parents.append((k, j))
                i += 1
            starts[j] = i_star
        starts[n] = i - 1

    assert len(sequence) == alpha(n, L), "The inductive sweep should produce exactly alpha(n, L) monomials"
    return MultiIndexOrder(n=n, L=L, sequence=tuple(sequence), parents=tuple(parents))
