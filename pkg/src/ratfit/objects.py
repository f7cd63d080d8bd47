from __future__ import annotations

import re
from functools import cached_property
from typing import Annotated, Literal

import numpy as np
from pydantic import BeforeValidator, ConfigDict, PlainSerializer, field_validator
from pydantic.dataclasses import Field, dataclass

from .exceptions import DomainError

__all__ = [
    "Vector",
    "Matrix",
    "Box",
    "SampleSet",
    "FitReport",
    "PoleMetrics",
    "SipConfig",
    "DesignSpec",
    "DesignCounts",
    "RelaxationResult",
]

_arrays = ConfigDict(arbitrary_types_allowed=True)


def convert_to_vector(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1)


def convert_to_matrix(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:  # a column of univariate points
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"Expected a matrix, got an array with {arr.ndim} dimensions")
    return arr


Vector = Annotated[np.ndarray, BeforeValidator(convert_to_vector), PlainSerializer(lambda a: a.tolist(), return_type=list)]
Matrix = Annotated[np.ndarray, BeforeValidator(convert_to_matrix), PlainSerializer(lambda a: a.tolist(), return_type=list)]

_BOX_PART = re.compile(r"^\s*([^:\s]+)\s*:\s*([^:\s]+)\s*$")


@dataclass
class Box:
    """
    An axis-aligned box, one (lower, upper) pair per coordinate.

    Example:
    -------
    >>> box = Box.parse("-1:1,0:2")
    >>> box.centroid
    array([0., 1.])
    >>> str(box)
    '-1.0:1.0,0.0:2.0'
    """

    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.bounds:
            raise DomainError("A domain needs at least one coordinate")
        for i, (lo, hi) in enumerate(self.bounds):
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise DomainError(f"Coordinate {i} of the domain is unbounded: {lo}:{hi}")
            if not lo < hi:
                raise DomainError(f"Coordinate {i} of the domain is empty: {lo}:{hi}")

    @classmethod
    def parse(cls, spec: str) -> Box:
        bounds = []
        for part in spec.split(","):
            m = _BOX_PART.match(part)
            if not m:
                raise DomainError(f"Malformed domain {spec!r}: expected 'lo:hi[,lo:hi...]'")
            try:
                bounds.append((float(m.group(1)), float(m.group(2))))
            except ValueError as ex:
                raise DomainError(f"Malformed domain {spec!r}: {ex}") from ex
        return cls(tuple(bounds))

    @classmethod
    def unit(cls, n: int) -> Box:
        return cls(((-1.0, 1.0),) * n)

    @classmethod
    def bounding(cls, points: np.ndarray) -> Box:
        points = convert_to_matrix(points)
        return cls(tuple(zip(points.min(axis=0).tolist(), points.max(axis=0).tolist())))

    @property
    def n(self) -> int:
        return len(self.bounds)

    @cached_property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @cached_property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])

    @property
    def centroid(self) -> np.ndarray:
        return (self.lower + self.upper) / 2

    @property
    def half_width(self) -> np.ndarray:
        return (self.upper - self.lower) / 2

    def contains(self, points: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
        points = np.atleast_2d(points)
        slack = rtol * (self.upper - self.lower)
        return np.all((points >= self.lower - slack) & (points <= self.upper + slack), axis=1)

    def to_unit(self, points: np.ndarray) -> np.ndarray:
        """Map the box affinely onto [-1, 1]^n."""
        return (np.asarray(points, dtype=float) - self.centroid) / self.half_width

    def from_unit(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) * self.half_width + self.centroid

    def __str__(self) -> str:
        return ",".join(f"{lo!r}:{hi!r}" for lo, hi in self.bounds)


@dataclass(config=_arrays, eq=False)
class SampleSet:
    points: Matrix
    values: Vector
    domain: Box

    def __post_init__(self):
        if self.points.shape[0] < 1:
            raise DomainError("A sample set needs at least one point")
        if self.points.shape[1] != self.domain.n:
            raise DomainError(f"Points have dimension {self.points.shape[1]} but the domain has {self.domain.n}")
        if self.values.shape[0] != self.points.shape[0]:
            raise DomainError(f"Got {self.points.shape[0]} points but {self.values.shape[0]} values")
        outside = np.flatnonzero(~self.domain.contains(self.points))
        if outside.size:
            raise DomainError(f"{outside.size} sample point(s) lie outside the domain {self.domain}, first at row {outside[0]}")

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def K(self) -> int:
        return self.points.shape[0]

    def with_values(self, values: np.ndarray) -> SampleSet:
        return SampleSet(points=self.points, values=values, domain=self.domain)


@dataclass
class FitReport:
    method: Literal["poly", "ra", "ra-dr", "ra-sip"]
    singular_values: list[float] = Field(default_factory=list)
    reduced_from: tuple[int, int] | None = None
    numerator_reduction_skipped: bool = False
    sip_iterations: int | None = None
    added_points: list[list[float]] | None = None
    objectives: list[float] | None = None
    global_minima: list[float] | None = None
    converged: bool | None = None
    wall_times: dict[str, float] = Field(default_factory=dict)

    @field_validator("singular_values")
    @classmethod
    def _descending(cls, value: list[float]) -> list[float]:
        if any(s < 0 for s in value):
            raise ValueError("Singular values cannot be negative")
        if any(a < b for a, b in zip(value, value[1:])):
            raise ValueError("Singular values should be sorted in descending order")
        return value


@dataclass
class PoleMetrics:
    t: float
    count_face: int
    count_in: int
    E_pole: float
    E_nonpole: float
    delta_r: float
    face_indices: tuple[int, ...] = ()
    interior_indices: tuple[int, ...] = ()

    @property
    def count(self) -> int:
        return self.count_face + self.count_in


@dataclass
class SipConfig:
    tau: float = Field(default=1.0, gt=0)
    sigma: float = Field(default=0.0, ge=0)
    max_iterations: int = Field(default=200, gt=0)
    multistart_cap: int = Field(default=5000, gt=0)
    local_tol: float = Field(default=1e-8, gt=0)
    seed: int = 0

    @classmethod
    def from_settings(cls, settings, **overrides) -> SipConfig:
        kwargs = {
            "tau": settings.tau,
            "sigma": settings.sigma,
            "max_iterations": settings.max_iterations,
            "multistart_cap": settings.multistart_cap,
            "local_tol": settings.local_tol,
            "seed": settings.seed,
        }
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


@dataclass
class DesignSpec:
    domain: Box
    K: Annotated[int, Field(ge=1)]
    seed: int = 0

    @property
    def n(self) -> int:
        return self.domain.n


@dataclass
class DesignCounts:
    K: int
    K_fc: int
    K_in: int


@dataclass(config=_arrays, eq=False)
class RelaxationResult:
    a: Vector
    b: Vector
    objective: float
    active: tuple[int, ...]
    multipliers: Vector
    iterations: int
