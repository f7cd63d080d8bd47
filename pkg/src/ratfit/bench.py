from __future__ import annotations

import logging
import time
from pathlib import Path

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from . import sampling, testfns
from .config import Settings
from .linfit import fit_polynomial, fit_rational_onb, fit_rational_reduced
from .metrics import pole_points, test_error
from .models import RationalModel
from .multiindex import alpha
from .objects import FitReport, SampleSet, SipConfig
from .sipfit import fit_rational_polefree

__all__ = ["METHODS", "poly_degree", "fit_by_method", "run_bench", "summarize", "write_bench"]

logger = logging.getLogger(__name__)

METHODS = ("poly", "ra", "ra-dr", "ra-sip")
KEYS = ["function", "method", "epsilon", "seed"]


def poly_degree(n: int, M: int, N: int) -> int:
    """Smallest polynomial degree with at least as many coefficients as a (M, N) rational function."""
    target = alpha(n, M) + alpha(n, N)
    d = 0
    while alpha(n, d) < target:
        d += 1
    return d


def reduction_threshold(epsilon: float, settings: Settings) -> float:
    """Ten times the relative noise level, or the configured threshold for exact data."""
    return min(10 * epsilon, 1.0) if epsilon > 0 else settings.eta


def fit_by_method(
    method: str, samples: SampleSet, M: int, N: int, settings: Settings, *, epsilon: float = 0.0, seed: int | None = None
) -> tuple[RationalModel, FitReport]:
    if method == "poly":
        return fit_polynomial(samples, M)
    if method == "ra":
        return fit_rational_onb(samples, M, N)
    if method == "ra-dr":
        return fit_rational_reduced(samples, M, N, reduction_threshold(epsilon, settings))
    if method == "ra-sip":
        return fit_rational_polefree(samples, M, N, SipConfig.from_settings(settings, seed=seed))
    raise ValueError(f"Unknown method {method!r}; choose from {', '.join(METHODS)}")


def _run_cell(function: str, method: str, epsilon: float, seed: int, thresholds: list[float], M: int, N: int, settings: Settings) -> dict:
    row: dict = {"function": function, "method": method, "epsilon": epsilon, "seed": seed, "error": None}
    start = time.perf_counter()
    try:
        fn = testfns.get(function)
        strategy = "dlhd" if fn.n >= 2 else "lhs"
        points = sampling.design_points(strategy, fn.domain, M, N, seed)
        values = sampling.add_noise(fn(points), epsilon, seed)
        samples = SampleSet(points=points, values=values, domain=fn.domain)

        fit_M = poly_degree(fn.n, M, N) if method == "poly" else M
        model, report = fit_by_method(method, samples, fit_M, N, settings, epsilon=epsilon, seed=seed)

        face, interior = sampling.test_points(fn.domain, settings.face_test_points, settings.interior_test_points, seed)
        face_values, interior_values = fn(face), fn(interior)

        row.update(
            {
                "M": model.M,
                "N": model.N,
                "fit_seconds": sum(report.wall_times.values()),
                "sip_iterations": report.sip_iterations,
            }
        )
        row["delta_r"] = test_error(model, np.vstack([face, interior]), np.concatenate([face_values, interior_values]))
        for t in thresholds:
            pm = pole_points(model, face, face_values, interior, interior_values, t)
            row[f"count_face_t{t:g}"] = pm.count_face
            row[f"count_in_t{t:g}"] = pm.count_in
            row[f"E_pole_t{t:g}"] = pm.E_pole
            row[f"E_nonpole_t{t:g}"] = pm.E_nonpole
    except Exception as ex:  # every cell reports, the grid keeps going
        logger.warning("Cell %s/%s/eps=%g/seed=%d failed: %s", function, method, epsilon, seed, ex)
        row["error"] = f"{type(ex).__name__}: {ex}"

    row["cell_seconds"] = time.perf_counter() - start
    logger.info("Finished %s/%s/eps=%g/seed=%d", function, method, epsilon, seed)
    return row


def _geomean(values: pd.Series) -> float:
    values = values[values > 0]
    return float(np.exp(np.log(values).mean())) if len(values) else float("nan")


def summarize(rows: pd.DataFrame) -> pd.DataFrame:
    """Mean, median and standard deviation per (function, method, epsilon) of the successful cells."""
    ok = rows[rows["error"].isna()] if "error" in rows else rows
    if ok.empty or "delta_r" not in ok:
        return pd.DataFrame(columns=["function", "method", "epsilon"])

    grouped = ok.groupby(["function", "method", "epsilon"], sort=True)
    stats = {
        column: ["mean", "median", "std"]
        for column in ("delta_r", "fit_seconds", "sip_iterations")
        if column in ok and ok[column].notna().any()
    }
    summary = grouped.agg(stats)
    summary.columns = [f"{column}_{stat}" for column, stat in summary.columns]
    summary["delta_r_geomean"] = grouped["delta_r"].apply(_geomean)
    summary["cells"] = grouped.size()
    return summary.reset_index()


def run_bench(
    functions: list[str],
    methods: list[str],
    epsilons: list[float],
    seeds: list[int],
    thresholds: list[float],
    M: int,
    N: int,
    settings: Settings,
) -> tuple[pd.DataFrame, pd.DataFrame]:
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"Unknown method {method!r}; choose from {', '.join(METHODS)}")

    cells = [(f, m, e, s) for f in functions for m in methods for e in epsilons for s in seeds]
    logger.info("Running %d benchmark cells on %d worker(s)", len(cells), settings.threads)

    results = Parallel(n_jobs=settings.threads, prefer="threads")(delayed(_run_cell)(f, m, e, s, thresholds, M, N, settings) for f, m, e, s in cells)

    rows = pd.DataFrame(results)
    if not rows.empty:
        rows = rows.sort_values(KEYS, kind="stable").reset_index(drop=True)
    return rows, summarize(rows)


def write_bench(rows: pd.DataFrame, summary: pd.DataFrame, filename: str | Path) -> tuple[Path, Path]:
    filename = Path(filename)
    summary_file = filename.with_name(f"{filename.stem}.summary.csv")
    rows.to_csv(filename, index=False)
    summary.to_csv(summary_file, index=False)
    return filename, summary_file
