from __future__ import annotations

import functools
import logging
import time
from pathlib import Path
from typing import Any, Callable

import numpy as np
import pandas as pd
from pydantic import RootModel

from .exceptions import ConfigurationError, DomainError, RatfitException
from .objects import Box, SampleSet

__all__ = [
    "capture_all_exceptions",
    "to_json",
    "save_json",
    "read_table",
    "read_points",
    "read_samples",
    "write_points",
    "parse_list",
    "point_columns",
]

logger = logging.getLogger(__name__)


def capture_all_exceptions(func: Callable[..., int | None]) -> Callable[..., int]:
    """Turn every failure of a command into a logged message and its exit code."""

    @functools.wraps(func)
    def inner(*args, **kwargs) -> int:
        function_signature = func.__name__
        logger.debug("[%s] Start", function_signature)
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except RatfitException as ex:
            logger.error("[%s] %s: %s", function_signature, type(ex).__name__, ex)
            return ex.exit_code
        except Exception as ex:
            logger.exception("[%s] An unexpected exception happened: %s", function_signature, ex)
            return 1

        logger.debug("[%s] Finished in %.3fs", function_signature, time.perf_counter() - start)
        return 0 if result is None else result

    return inner


def to_json(data: Any) -> str:
    return RootModel[data.__class__](data).model_dump_json(indent=4)


def save_json(data: Any, filename: str | Path) -> Path:
    filename = Path(filename)
    filename.write_text(to_json(data), encoding="utf8")
    return filename


def point_columns(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def read_table(filename: str | Path) -> pd.DataFrame:
    try:
        return pd.read_csv(filename, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as ex:
        raise DomainError(f"Cannot read {filename}: {ex}") from ex


def _split(df: pd.DataFrame, filename: str | Path) -> tuple[np.ndarray, np.ndarray | None]:
    x_cols = [c for c in df.columns if str(c).strip().lower().startswith("x")]
    if not x_cols:
        raise DomainError(f"{filename} has no x1..xn columns in its header")

    points = df[x_cols].to_numpy(dtype=float)
    values = df["f"].to_numpy(dtype=float) if "f" in df.columns else None
    if not np.all(np.isfinite(points)):
        raise DomainError(f"{filename} holds non-finite coordinates")
    return points, values


def read_points(filename: str | Path) -> np.ndarray:
    return _split(read_table(filename), filename)[0]


def read_samples(filename: str | Path, domain: Box | None = None) -> SampleSet:
    """Read "x1,...,xn,f" rows; without a domain the bounding box of the points is used."""
    points, values = _split(read_table(filename), filename)
    if values is None:
        raise DomainError(f"{filename} has no f column with function values")
    return SampleSet(points=points, values=values, domain=domain or Box.bounding(points))


def write_points(filename: str | Path, points: np.ndarray, values: np.ndarray | None = None, value_name: str = "f") -> Path:
    points = np.atleast_2d(points)
    df = pd.DataFrame(points, columns=point_columns(points.shape[1]))
    if values is not None:
        df[value_name] = values

    filename = Path(filename)
    df.to_csv(filename, index=False)
    return filename


def parse_list(text: str | None, type_: Callable[[str], Any] = str) -> list:
    if not text:
        return []
    try:
        return [type_(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as ex:
        raise ConfigurationError(f"Cannot parse the list {text!r}: {ex}") from ex
