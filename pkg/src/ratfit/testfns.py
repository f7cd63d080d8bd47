from __future__ import annotations

import math
from typing import Callable, Literal

import numpy as np
from pydantic import ConfigDict
from pydantic.dataclasses import dataclass

from .exceptions import DomainError, UnknownFunctionError
from .objects import Box

__all__ = ["TestFunction", "catalog", "get", "evaluate"]

Kind = Literal["rational", "poly-denominator", "polynomial", "transcendental"]


@dataclass(config=ConfigDict(arbitrary_types_allowed=True))
class TestFunction:
    """
    An analytic benchmark on a box that contains none of its poles.

    ``M`` and ``N`` are the true numerator and denominator degrees, ``None`` where that part is
    not a polynomial.
    """

    __test__ = False

    id: str
    description: str
    domain: Box
    formula: Callable[[np.ndarray], np.ndarray]
    M: int | None = None
    N: int | None = None

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def true_degrees(self) -> tuple[int, int] | None:
        if self.M is None or self.N is None:
            return None
        return self.M, self.N

    @property
    def kind(self) -> Kind:
        if self.M is not None and self.N is not None:
            return "rational"
        if self.N is not None:
            return "poly-denominator"
        if self.M is not None:
            return "polynomial"
        return "transcendental"

    def __call__(self, x: np.ndarray) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        points = x.reshape(1, -1) if single else x
        if points.shape[1] != self.n:
            raise DomainError(f"{self.id} takes {self.n} coordinates, got {points.shape[1]}")
        outside = np.flatnonzero(~self.domain.contains(points))
        if outside.size:
            raise DomainError(f"{outside.size} point(s) lie outside the domain {self.domain} of {self.id}")

        values = self.formula(points)
        return float(values[0]) if single else values


def _breit_wigner(x: np.ndarray) -> np.ndarray:
    E, G, M = x[:, 0], x[:, 1], x[:, 2]
    gamma = np.sqrt(M**2 * (M**2 + G**2))
    return 2 * math.sqrt(2) * M * G * gamma / (math.pi * np.sqrt(M**2 + gamma) * ((E**2 - M**2) ** 2 + M**2 * G**2))


def _sinc(x: np.ndarray) -> np.ndarray:
    return 10 * np.prod(np.sin(x) / x, axis=1)


def _quartic(x1, x2):
    return x1**4 + x2**4 + x1**2 * x2**2 + x1 * x2


def _q14(x1, x2):
    return x1**2 * x2**2 - 2 * x1**2 - 2 * x2**2 + 4


_UNIT2 = Box.unit(2)
_UNIT4 = Box.unit(4)
_SINC_RANGE = (1e-6, 4 * math.pi)

_CATALOG: dict[str, TestFunction] = {
    fn.id: fn
    for fn in (
        TestFunction(
            "f1", "function with a polynomial denominator", _UNIT2, lambda x: np.exp(x[:, 0] * x[:, 1]) / ((x[:, 0] ** 2 - 1.44) * (x[:, 1] ** 2 - 1.44)), N=4
        ),
        TestFunction("f2", "log function", _UNIT2, lambda x: np.log(2.25 - x[:, 0] ** 2 - x[:, 1] ** 2)),
        TestFunction("f3", "hyperbolic tangent", _UNIT2, lambda x: np.tanh(5 * (x[:, 0] - x[:, 1]))),
        TestFunction("f4", "exponential function", _UNIT2, lambda x: np.exp(-(x[:, 0] ** 2 + x[:, 1] ** 2) / 1000)),
        TestFunction("f5", "absolute value function", _UNIT2, lambda x: np.abs(x[:, 0] - x[:, 1]) ** 3),
        TestFunction("f7", "rational function", Box(((0.0, 1.0), (0.0, 1.0))), lambda x: (x[:, 0] + x[:, 1] ** 3) / (x[:, 0] * x[:, 1] ** 2 + 1), M=3, N=3),
        TestFunction(
            "f8",
            "rational function",
            _UNIT2,
            lambda x: (x[:, 0] ** 2 + x[:, 1] ** 2 + x[:, 0] - x[:, 1] - 1) / ((x[:, 0] - 1.1) * (x[:, 1] - 1.1)),
            M=2,
            N=2,
        ),
        TestFunction(
            "f9", "rational function", _UNIT2, lambda x: _quartic(x[:, 0], x[:, 1]) / ((x[:, 0] ** 2 - 1.1) * (x[:, 1] ** 2 - 1.1)), M=4, N=4
        ),
        TestFunction(
            "f10",
            "rational function",
            _UNIT4,
            lambda x: (x[:, 0] ** 2 + x[:, 1] ** 2 + x[:, 0] - x[:, 1] + 1) / ((x[:, 2] - 1.5) * (x[:, 3] - 1.5)),
            M=2,
            N=2,
        ),
        TestFunction(
            "f12",
            "rational function",
            _UNIT2,
            lambda x: (x[:, 0] ** 2 + x[:, 1] ** 2 + x[:, 0] - x[:, 1] - 1) / (x[:, 0] ** 3 + x[:, 1] ** 3 + 4),
            M=2,
            N=3,
        ),
        TestFunction("f13", "rational function", _UNIT2, lambda x: (x[:, 0] ** 3 + x[:, 1] ** 3) / (x[:, 0] ** 2 + x[:, 1] ** 2 + 3), M=3, N=2),
        TestFunction("f14", "rational function", _UNIT2, lambda x: _quartic(x[:, 0], x[:, 1]) / _q14(x[:, 0], x[:, 1]), M=4, N=4),
        TestFunction("f15", "rational function", _UNIT2, lambda x: (x[:, 0] ** 3 + x[:, 1] ** 3) / _q14(x[:, 0], x[:, 1]), M=3, N=4),
        TestFunction("f16", "rational function", _UNIT2, lambda x: _quartic(x[:, 0], x[:, 1]) / (x[:, 0] ** 3 + x[:, 1] ** 3 + 4), M=4, N=3),
        TestFunction("f17", "Breit-Wigner function", Box(((80.0, 100.0), (5.0, 10.0), (90.0, 93.0))), _breit_wigner),
        TestFunction(
            "f18",
            "function with a polynomial denominator",
            Box(((-0.95, 0.95),) * 4),
            lambda x: np.arctan(x).sum(axis=1) / (x[:, 0] ** 2 * x[:, 1] ** 2 - x[:, 0] ** 2 - x[:, 1] ** 2 + 1),
            N=4,
        ),
        TestFunction(
            "f19",
            "function with a polynomial denominator",
            _UNIT4,
            lambda x: np.exp(np.prod(x, axis=1)) / (x[:, 0] ** 2 + x[:, 1] ** 2 - x[:, 2] * x[:, 3] + 3),
            N=2,
        ),
        TestFunction("f20", "sinc function", Box((_SINC_RANGE,) * 4), _sinc),
        TestFunction("f21", "sinc function", Box((_SINC_RANGE,) * 2), _sinc),
        TestFunction("f22", "polynomial function", _UNIT2, lambda x: x[:, 0] ** 2 + x[:, 1] ** 2 + x[:, 0] * x[:, 1] - x[:, 1] + 1, M=2),
    )
}


def catalog() -> list[TestFunction]:
    return list(_CATALOG.values())


def get(id_: str) -> TestFunction:
    try:
        return _CATALOG[id_.strip().lower()]
    except KeyError:
        raise UnknownFunctionError(f"Unknown test function {id_!r}; known ids: {', '.join(_CATALOG)}") from None


def evaluate(id_: str, x: np.ndarray) -> np.ndarray | float:
    return get(id_)(x)
