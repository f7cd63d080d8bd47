from __future__ import annotations

import logging
import math
import time

import numpy as np
import scipy.linalg
import scipy.optimize

from ._qp import solve_constrained_lsq
from .exceptions import InfeasibleRelaxationError, SingularHessianError, UnderdeterminedFitError
from .models import RationalModel
from .multiindex import MultiIndexOrder, alpha, generate_order
from .objects import Box, DesignSpec, FitReport, RelaxationResult, SampleSet, SipConfig
from .sampling import lhs

__all__ = ["solve_relaxation", "minimize_denominator", "multistart_budget", "nonlinear_terms", "fit_rational_polefree", "PASS_TOLERANCE"]

logger = logging.getLogger(__name__)

PASS_TOLERANCE = 1e-6
LOCAL_ITERATIONS = 500


def nonlinear_terms(n: int, N: int) -> int:
    """Denominator coefficients besides the constant and linear ones."""
    return max(alpha(n, N) - (n + 1), 0)


def multistart_budget(n: int, N: int, cap: int) -> int:
    """Number of local descents for the global denominator check, growing exponentially with the nonlinear terms."""
    if cap < 1:
        raise ValueError(f"The multistart cap should be at least 1, got {cap}")
    return min(math.ceil(2042.023 * math.exp(0.029 * nonlinear_terms(n, N))), cap)


def _warm_start(A: np.ndarray, P: np.ndarray, values: np.ndarray, Qc: np.ndarray, tau: float) -> np.ndarray:
    """
    A feasible start: the unconstrained minimiser of ||A theta|| scaled onto q >= tau when its
    denominator keeps one sign on the constraint points, otherwise q = tau with p fitted to tau * f.
    """
    n_a = P.shape[1]
    v = scipy.linalg.svd(A, full_matrices=A.shape[0] < A.shape[1])[2][-1]
    q = Qc @ v[n_a:]
    if np.all(q > 0):
        return v * (tau / q.min())
    if np.all(q < 0):
        return v * (tau / q.max())

    b = np.zeros(Qc.shape[1])
    b[0] = tau
    a = scipy.linalg.lstsq(P, tau * values, lapack_driver="gelsd")[0]
    return np.concatenate([a, b])


def solve_relaxation(
    samples: SampleSet,
    constraint_points: np.ndarray,
    M: int,
    N: int,
    tau: float = 1.0,
    sigma: float = 0.0,
) -> RelaxationResult:
    """
    Minimise sum (p(x_k) - f_k q(x_k))^2 + sigma (|a|^2 + |b|^2) subject to q >= tau at every constraint point.

    Coefficients are for monomials of the coordinates mapped from the sample domain onto [-1, 1]^n.
    """
    order = generate_order(samples.n, max(M, N))
    n_a, n_b = alpha(samples.n, M), alpha(samples.n, N)

    design = order.monomials(samples.domain.to_unit(samples.points))
    P = design[:, :n_a]
    A = np.hstack([P, -samples.values[:, None] * design[:, :n_b]])

    if sigma == 0 and np.linalg.matrix_rank(P) < n_a:
        raise SingularHessianError(
            f"The degree {M} numerator design is rank deficient on these {samples.K} points (collinear samples?); use a regularization sigma > 0"
        )

    constraint_points = np.atleast_2d(np.asarray(constraint_points, dtype=float))
    Qc = order.monomials(samples.domain.to_unit(constraint_points))[:, :n_b]
    G = np.hstack([np.zeros((Qc.shape[0], n_a)), Qc])
    h = np.full(Qc.shape[0], float(tau))

    C = np.vstack([A, math.sqrt(sigma) * np.eye(n_a + n_b)]) if sigma > 0 else A
    d = np.zeros(C.shape[0])

    solution = solve_constrained_lsq(C, d, G, h, _warm_start(A, P, samples.values, Qc, tau))
    if solution.infeasibility > 1e-9 * tau:
        raise InfeasibleRelaxationError(f"The relaxation violates q >= {tau} by {solution.infeasibility:.3e}")

    return RelaxationResult(
        a=solution.x[:n_a],
        b=solution.x[n_a:],
        objective=solution.objective,
        active=solution.working_set,
        multipliers=solution.multipliers,
        iterations=solution.iterations,
    )


def minimize_denominator(
    b_hat: np.ndarray,
    order: MultiIndexOrder,
    domain: Box,
    budget: int,
    local_tol: float = 1e-8,
    seed: int = 0,
    tau: float | None = None,
) -> tuple[np.ndarray, float]:
    """
    Multistart search for the minimum of q over the box.

    Starts come from a seeded LHS and are tried from the lowest q upwards. Each start runs a
    bounded quasi-Newton descent with the analytic gradient. With ``tau`` given the search stops
    at the first local minimum below it.
    """
    if budget < 1:
        raise ValueError(f"The multistart budget should be at least 1, got {budget}")

    b_hat = np.asarray(b_hat, dtype=float)
    exps = order.exponent_matrix[: b_hat.shape[0]]
    grad_coeffs = order.derivative_coefficients(b_hat)

    def q_and_gradient(u: np.ndarray) -> tuple[float, np.ndarray]:
        mono = np.prod(u**exps, axis=1)
        return float(mono @ b_hat), mono @ grad_coeffs

    starts = lhs(DesignSpec(domain=Box.unit(domain.n), K=budget, seed=seed))
    start_values = order.monomials(starts)[:, : b_hat.shape[0]] @ b_hat
    ranking = np.argsort(start_values, kind="stable")

    best_u, best_q = starts[ranking[0]], float(start_values[ranking[0]])
    bounds = [(-1.0, 1.0)] * domain.n
    for count, k in enumerate(ranking, start=1):
        res = scipy.optimize.minimize(
            q_and_gradient,
            starts[k],
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": LOCAL_ITERATIONS, "gtol": local_tol},
        )
        if res.fun < best_q:
            best_u, best_q = np.clip(res.x, -1.0, 1.0), float(res.fun)

        if tau is not None and best_q < tau:
            logger.debug("Found q = %.6g < %.6g after %d of %d starts", best_q, tau, count, budget)
            break

    return domain.from_unit(best_u), best_q


def fit_rational_polefree(samples: SampleSet, M: int, N: int, config: SipConfig | None = None) -> tuple[RationalModel, FitReport]:
    """
    Alternate a finitely constrained relaxation with a global check of q >= tau over the box.

    Every failed check adds its minimiser as a constraint point. Constraint points are never
    removed. Without convergence the model with the largest certified denominator minimum is
    returned and the report says ``converged=False``.
    """
    config = config or SipConfig()
    n = samples.n
    needed = alpha(n, M) + alpha(n, N)
    if samples.K < needed:
        raise UnderdeterminedFitError(f"A pole-free ({M}, {N}) fit in {n} dimensions needs at least {needed} sample points, got {samples.K}")

    q_order = generate_order(n, N)
    budget = multistart_budget(n, N, config.multistart_cap)
    threshold = config.tau * (1 - PASS_TOLERANCE)

    constraints = list(samples.points)
    added: list[list[float]] = []
    objectives: list[float] = []
    minima: list[float] = []
    fit_time = multistart_time = 0.0
    best: tuple[float, RationalModel] | None = None
    converged = False

    for iteration in range(1, config.max_iterations + 1):
        start = time.perf_counter()
        relaxed = solve_relaxation(samples, np.array(constraints), M, N, config.tau, config.sigma)
        fit_time += time.perf_counter() - start

        start = time.perf_counter()
        x_hat, q_min = minimize_denominator(relaxed.b, q_order, samples.domain, budget, config.local_tol, config.seed + iteration, config.tau)
        multistart_time += time.perf_counter() - start

        objectives.append(relaxed.objective)
        minima.append(q_min)
        model = RationalModel(basis_kind="monomial", M=M, N=N, a=relaxed.a, b=relaxed.b, domain=samples.domain)
        if best is None or q_min > best[0]:
            best = (q_min, model)

        logger.info("Iteration %d: objective %.6e, min q = %.6g", iteration, relaxed.objective, q_min)
        if q_min >= threshold:
            converged = True
            best = (q_min, model)
            break

        constraints.append(x_hat)
        added.append(x_hat.tolist())

    if converged:
        logger.info("Pole-free fit converged after %d iteration(s), %d point(s) added", iteration, len(added))
    else:
        logger.warning("Pole-free fit did not converge within %d iterations; returning the best model (min q = %.6g)", config.max_iterations, best[0])

    report = FitReport(
        method="ra-sip",
        sip_iterations=iteration,
        added_points=added,
        objectives=objectives,
        global_minima=minima,
        converged=converged,
        wall_times={"fit": fit_time, "multistart": multistart_time},
    )
    return best[1], report
