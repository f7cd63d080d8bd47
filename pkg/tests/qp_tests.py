import numpy as np
import pytest
from ratfit._qp import solve_constrained_lsq
from ratfit.exceptions import InfeasibleRelaxationError, NonConvergenceError


def test_active_bound():
    # min ||x - (-1, 2)||^2 subject to x >= 0
    sut = solve_constrained_lsq(np.eye(2), np.array([-1.0, 2.0]), np.eye(2), np.zeros(2), np.array([1.0, 1.0]))

    np.testing.assert_allclose(sut.x, [0.0, 2.0], atol=1e-12)
    assert sut.objective == pytest.approx(1.0)
    assert sut.working_set == (0,)
    np.testing.assert_allclose(sut.multipliers, [2.0, 0.0], atol=1e-10)
    assert sut.stationarity <= 1e-10
    assert sut.infeasibility == 0.0


def test_inactive_constraints():
    sut = solve_constrained_lsq(np.eye(2), np.array([2.0, 3.0]), np.eye(2), np.zeros(2), np.array([1.0, 1.0]))

    np.testing.assert_allclose(sut.x, [2.0, 3.0], atol=1e-12)
    assert sut.objective == pytest.approx(0.0, abs=1e-20)
    assert sut.working_set == ()


def test_random_problems_satisfy_kkt():
    rng = np.random.default_rng(7)
    for _ in range(10):
        C = rng.standard_normal((12, 4))
        d = rng.standard_normal(12)
        G = rng.standard_normal((6, 4))
        x0 = rng.standard_normal(4)
        h = G @ x0 - rng.uniform(0, 1, 6)  # x0 is strictly feasible

        sut = solve_constrained_lsq(C, d, G, h, x0)

        slack = G @ sut.x - h
        assert np.all(slack >= -1e-9)
        assert np.all(sut.multipliers >= -1e-9)
        assert np.max(np.abs(sut.multipliers * slack)) <= 1e-8
        np.testing.assert_allclose(2 * C.T @ (C @ sut.x - d), G.T @ sut.multipliers, atol=1e-8)


def test_infeasible_start():
    with pytest.raises(InfeasibleRelaxationError, match="infeasible"):
        solve_constrained_lsq(np.eye(2), np.zeros(2), np.eye(2), np.ones(2), np.zeros(2))


def test_iteration_cap():
    with pytest.raises(NonConvergenceError, match="did not converge within 1 iterations"):
        solve_constrained_lsq(np.eye(2), np.array([-1.0, 2.0]), np.eye(2), np.zeros(2), np.array([1.0, 1.0]), max_iterations=1)


def test_dependent_constraints_at_a_degenerate_vertex():
    # min ||x||^2 with x1 >= 1 twice and x1 + x2 >= 2 written at two scales: all four meet at (1, 1)
    G = np.array([[1.0, 0.0], [1.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    h = np.array([1.0, 1.0, 2.0, 4.0])

    sut = solve_constrained_lsq(np.eye(2), np.zeros(2), G, h, np.array([2.0, 2.0]))

    np.testing.assert_allclose(sut.x, [1.0, 1.0], atol=1e-12)
    assert sut.working_set == (0, 2)
    np.testing.assert_allclose(sut.multipliers, [0.0, 0.0, 2.0, 0.0], atol=1e-10)
    assert sut.iterations <= 5
    assert sut.infeasibility == 0.0


def test_redundant_rows_keep_the_iterates_feasible():
    rng = np.random.default_rng(11)
    for _ in range(10):
        base = rng.standard_normal((3, 5))
        x0 = rng.standard_normal(5)
        h_base = base @ x0 - rng.uniform(0, 1, 3)
        G = np.vstack([base, 3 * base, base[0] + base[1], base])
        h = np.concatenate([h_base, 3 * h_base, [h_base[0] + h_base[1]], h_base])
        C = rng.standard_normal((8, 5))
        d = 10 * rng.standard_normal(8)

        sut = solve_constrained_lsq(C, d, G, h, x0)

        assert np.all(G @ sut.x - h >= -1e-9)
        assert np.all(sut.multipliers >= 0)
        np.testing.assert_allclose(2 * C.T @ (C @ sut.x - d), G.T @ sut.multipliers, atol=1e-7)
        assert len(sut.working_set) <= 3
