from __future__ import annotations

import logging
from functools import cached_property
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import RootModel, TypeAdapter, ValidationError
from pydantic.dataclasses import dataclass

from .exceptions import DomainError, ModelFormatError
from .multiindex import MultiIndexOrder, alpha, generate_order
from .objects import Box, Vector, _arrays
from .orthobasis import OrthonormalBasis, evaluate_basis

__all__ = ["RationalModel", "ModelFile", "AffineMap", "dump_model", "save_model", "load_model", "FORMAT_VERSION"]

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

BasisKind = Literal["orthonormal", "monomial"]


@dataclass(config=_arrays, eq=False)
class RationalModel:
    """
    r(x) = p(x) / q(x) with p of degree M and q of degree N.

    The orthonormal kind carries the basis its coefficients live in. The monomial kind evaluates
    monomials of the coordinates mapped affinely from ``domain`` onto [-1, 1]^n.

    Example:
    -------
    >>> model = RationalModel(basis_kind="monomial", M=1, N=0, a=[1.0, 2.0], b=[1.0], domain=Box.unit(1))
    >>> model(np.array([[0.5]]))
    array([2.])
    """

    basis_kind: BasisKind
    M: int
    N: int
    a: Vector
    b: Vector
    domain: Box
    basis: OrthonormalBasis | None = None

    def __post_init__(self):
        if self.M < 0 or self.N < 0:
            raise ValueError(f"Degrees cannot be negative, got M={self.M}, N={self.N}")
        if self.a.shape[0] != alpha(self.n, self.M):
            raise ValueError(f"Expected {alpha(self.n, self.M)} numerator coefficients, got {self.a.shape[0]}")
        if self.b.shape[0] != alpha(self.n, self.N):
            raise ValueError(f"Expected {alpha(self.n, self.N)} denominator coefficients, got {self.b.shape[0]}")
        if not np.any(self.b):
            raise ValueError("The denominator coefficients cannot all be zero")

        if self.basis_kind == "orthonormal":
            if self.basis is None:
                raise ValueError("An orthonormal model needs its basis")
            if self.basis.n != self.n or self.basis.L < max(self.M, self.N):
                raise ValueError(f"The basis (n={self.basis.n}, L={self.basis.L}) cannot carry degrees ({self.M}, {self.N})")
            if abs(np.linalg.norm(self.b) - 1.0) > 1e-8:
                raise ValueError("An orthonormal model needs a unit-norm denominator")
        elif self.basis is not None:
            raise ValueError("A monomial model does not carry an orthonormal basis")

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def is_polynomial(self) -> bool:
        return self.N == 0

    @cached_property
    def order(self) -> MultiIndexOrder:
        return generate_order(self.n, max(self.M, self.N))

    def _design(self, x: np.ndarray) -> np.ndarray:
        if self.basis_kind == "orthonormal":
            return evaluate_basis(self.basis, x)
        return self.order.monomials(self.domain.to_unit(x))

    def _as_points(self, x: np.ndarray) -> np.ndarray:
        points = np.asarray(x, dtype=float)
        if points.ndim == 1:
            points = points.reshape(1, -1)
        if points.shape[1] != self.n:
            raise DomainError(f"The model expects points of dimension {self.n}, got {points.shape[1]}")
        return points

    def parts(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Numerator and denominator values at every row of x."""
        design = self._design(self._as_points(x))
        return design[:, : self.a.shape[0]] @ self.a, design[:, : self.b.shape[0]] @ self.b

    def numerator(self, x: np.ndarray) -> np.ndarray:
        return self.parts(x)[0]

    def denominator(self, x: np.ndarray) -> np.ndarray:
        return self.parts(x)[1]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        p, q = self.parts(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return p / q

    def to_file(self) -> ModelFile:
        unit_map = None
        if self.basis_kind == "monomial":
            unit_map = AffineMap(center=self.domain.centroid.tolist(), scale=self.domain.half_width.tolist())

        return ModelFile(
            format_version=FORMAT_VERSION,
            n=self.n,
            basis_kind=self.basis_kind,
            M=self.M,
            N=self.N,
            a=self.a.tolist(),
            b=self.b.tolist(),
            domain=[list(pair) for pair in self.domain.bounds],
            L=self.basis.L if self.basis else None,
            norm0=self.basis.norm0 if self.basis else None,
            R=self.basis.R.tolist() if self.basis else None,
            unit_map=unit_map,
        )


@dataclass
class AffineMap:
    """x_unit = (x - center) / scale"""

    center: list[float]
    scale: list[float]


@dataclass
class ModelFile:
    format_version: int
    n: int
    basis_kind: BasisKind
    M: int
    N: int
    a: list[float]
    b: list[float]
    domain: list[list[float]]
    L: int | None = None
    norm0: float | None = None
    R: list[list[float]] | None = None
    unit_map: AffineMap | None = None

    def to_model(self) -> RationalModel:
        if self.format_version != FORMAT_VERSION:
            raise ModelFormatError(f"Unsupported model format version {self.format_version}")

        try:
            domain = Box(tuple(tuple(pair) for pair in self.domain))
            if domain.n != self.n:
                raise ModelFormatError(f"The model declares n={self.n} but its domain has {domain.n} coordinates")

            basis = None
            if self.basis_kind == "orthonormal":
                if self.L is None or self.norm0 is None or self.R is None:
                    raise ModelFormatError("An orthonormal model file needs L, norm0 and R")
                basis = OrthonormalBasis(n=self.n, L=self.L, norm0=self.norm0, R=self.R)
            else:
                if self.unit_map is None:
                    raise ModelFormatError("A monomial model file needs its unit map")
                if self.unit_map.center != domain.centroid.tolist() or self.unit_map.scale != domain.half_width.tolist():
                    raise ModelFormatError("The unit map does not match the model domain")

            return RationalModel(basis_kind=self.basis_kind, M=self.M, N=self.N, a=self.a, b=self.b, domain=domain, basis=basis)
        except (ValueError, DomainError) as ex:
            raise ModelFormatError(f"Inconsistent model file: {ex}") from ex


def dump_model(model: RationalModel) -> str:
    return RootModel[ModelFile](model.to_file()).model_dump_json(indent=4)


def save_model(model: RationalModel, filename: str | Path) -> Path:
    filename = Path(filename)
    filename.write_text(dump_model(model), encoding="utf8")
    logger.debug("Saved a (%d, %d) %s model to %s", model.M, model.N, model.basis_kind, filename)
    return filename


def load_model(filename: str | Path) -> RationalModel:
    filename = Path(filename)
    try:
        text = filename.read_text(encoding="utf8")
    except OSError as ex:
        raise ModelFormatError(f"Cannot read model {filename}: {ex}") from ex

    try:
        model_file = TypeAdapter(ModelFile).validate_json(text)
    except ValidationError as ex:
        raise ModelFormatError(f"Malformed model file {filename}: {ex.error_count()} validation error(s)") from ex

    return model_file.to_model()
