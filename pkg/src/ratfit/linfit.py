from __future__ import annotations

import logging
import time

import numpy as np
import scipy.linalg

from .exceptions import UnderdeterminedFitError
from .models import RationalModel
from .multiindex import alpha, generate_order
from .objects import FitReport, SampleSet
from .orthobasis import OrthonormalBasis, build_basis, evaluate_basis

__all__ = ["fit_rational_onb", "reduce_degrees", "fit_rational_reduced", "fit_polynomial", "numerator_reduction_allowed"]

logger = logging.getLogger(__name__)

ZERO_VALUE = 1e-300
POLY_CUTOFF = 1e-12


def _require_samples(samples: SampleSet, needed: int, what: str) -> None:
    if samples.K < needed:
        raise UnderdeterminedFitError(f"{what} needs at least {needed} sample points, got {samples.K}")


def _solve_linearized(V: np.ndarray, values: np.ndarray, n: int, M: int, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Denominator from the smallest right singular vector of W = V_M Z - F V_N, numerator a = Z b."""
    VM = V[:, : alpha(n, M)]
    FVN = values[:, None] * V[:, : alpha(n, N)]

    Z = VM.T @ FVN
    W = VM @ Z - FVN
    logger.debug("SVD of a %dx%d linearized system", *W.shape)

    _, s, vh = scipy.linalg.svd(W, full_matrices=W.shape[0] < W.shape[1])
    b = vh[-1]
    return Z @ b, b, s


def _orient(basis: OrthonormalBasis, centroid: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q_center = evaluate_basis(basis, centroid)[: b.shape[0]] @ b
    if q_center < 0:
        return -a, -b
    if q_center == 0 and b[np.flatnonzero(b)[0]] < 0:
        return -a, -b
    return a, b


def _build_model(samples: SampleSet, basis: OrthonormalBasis, V: np.ndarray, M: int, N: int) -> tuple[RationalModel, np.ndarray, float]:
    start = time.perf_counter()
    a, b, s = _solve_linearized(V, samples.values, samples.n, M, N)
    basis = basis.truncate(max(M, N))
    a, b = _orient(basis, samples.domain.centroid, a, b)
    model = RationalModel(basis_kind="orthonormal", M=M, N=N, a=a, b=b, domain=samples.domain, basis=basis)
    return model, s, time.perf_counter() - start


def fit_rational_onb(samples: SampleSet, M: int, N: int) -> tuple[RationalModel, FitReport]:
    """
    Linearized least-squares fit in the orthonormal basis of the samples.

    Example:
    -------
    >>> model, report = fit_rational_onb(samples, 3, 3)
    >>> model(samples.points[:5])
    """
    n = samples.n
    _require_samples(samples, alpha(n, M) + alpha(n, N) - 1, f"A ({M}, {N}) rational fit in {n} dimensions")

    start = time.perf_counter()
    basis, V = build_basis(samples, max(M, N))
    basis_time = time.perf_counter() - start

    model, s, svd_time = _build_model(samples, basis, V, M, N)
    return model, FitReport(method="ra", singular_values=s.tolist(), wall_times={"basis": basis_time, "svd": svd_time})


def numerator_reduction_allowed(values: np.ndarray) -> bool:
    return bool(np.all(np.abs(values) >= ZERO_VALUE))


def _deficient(basis_part: np.ndarray, scaled: np.ndarray, eta: float) -> bool:
    """True when the part of ``scaled`` outside the span of ``basis_part`` has a negligible singular value."""
    outside = scaled - basis_part @ (basis_part.T @ scaled)
    s = scipy.linalg.svdvals(outside)
    if s.size < scaled.shape[1] or s[0] <= eta * np.linalg.norm(scaled, 2):
        return True
    return bool(s[-1] < eta * s[0])


def reduce_degrees(V: np.ndarray, values: np.ndarray, n: int, M: int, N: int, eta: float) -> tuple[int, int]:
    """
    Lower N, then M, while a fit of lower degree still matches the data to the relative level eta.

    N drops while W = (I - V_M V_M^T) F V_{N-1}, the linearized system of a (M, N-1) fit, has
    sigma_min < eta * sigma_max. M then drops on the reciprocal data: while (I - V_N V_N^T) F^-1 V_{M-1}
    is deficient, some p of degree M-1 makes p/f a polynomial of degree N on the samples. The second
    loop needs F^-1 and is skipped when a value is (nearly) zero. A complement below eta times the
    norm of the scaled block counts as deficient. V must hold at least alpha(n, max(M, N)) columns.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta should lie in (0, 1], got {eta}")
    if V.shape[1] < alpha(n, max(M, N)):
        raise ValueError(f"V has {V.shape[1]} columns, the degrees need {alpha(n, max(M, N))}")

    values = np.asarray(values, dtype=float)
    M0, N0 = M, N

    VM = V[:, : alpha(n, M)]
    while N > 0 and _deficient(VM, values[:, None] * V[:, : alpha(n, N - 1)], eta):
        N -= 1

    if numerator_reduction_allowed(values):
        VN = V[:, : alpha(n, N)]
        while M > 0 and _deficient(VN, V[:, : alpha(n, M - 1)] / values[:, None], eta):
            M -= 1
    else:
        logger.warning("Some values are (nearly) zero, skipping the reduction of M")

    if (M, N) != (M0, N0):
        logger.info("Reduced the degrees from (%d, %d) to (%d, %d)", M0, N0, M, N)
    return M, N


def fit_rational_reduced(samples: SampleSet, M: int, N: int, eta: float = 1e-12) -> tuple[RationalModel, FitReport]:
    n = samples.n
    _require_samples(samples, alpha(n, M) + alpha(n, N) - 1, f"A ({M}, {N}) rational fit in {n} dimensions")

    start = time.perf_counter()
    basis, V = build_basis(samples, max(M, N))
    basis_time = time.perf_counter() - start

    start = time.perf_counter()
    M_, N_ = reduce_degrees(V, samples.values, n, M, N, eta)
    reduction_time = time.perf_counter() - start

    model, s, svd_time = _build_model(samples, basis, V, M_, N_)
    report = FitReport(
        method="ra-dr",
        singular_values=s.tolist(),
        reduced_from=(M, N),
        numerator_reduction_skipped=not numerator_reduction_allowed(samples.values),
        wall_times={"basis": basis_time, "reduction": reduction_time, "svd": svd_time},
    )
    return model, report


def fit_polynomial(samples: SampleSet, d: int) -> tuple[RationalModel, FitReport]:
    """Least-squares polynomial of degree d in monomials of the box mapped onto [-1, 1]^n."""
    order = generate_order(samples.n, d)
    _require_samples(samples, len(order), f"A degree {d} polynomial fit in {samples.n} dimensions")

    start = time.perf_counter()
    A = order.monomials(samples.domain.to_unit(samples.points))
    coeffs, _, rank, s = scipy.linalg.lstsq(A, samples.values, cond=POLY_CUTOFF, lapack_driver="gelsd")
    if rank < A.shape[1]:
        logger.debug("Polynomial design matrix has numerical rank %d of %d", rank, A.shape[1])

    model = RationalModel(basis_kind="monomial", M=d, N=0, a=coeffs, b=[1.0], domain=samples.domain)
    return model, FitReport(method="poly", singular_values=s.tolist(), wall_times={"svd": time.perf_counter() - start})
