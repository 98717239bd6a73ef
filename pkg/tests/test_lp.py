import numpy as np
import pytest

from dagcast.errors import DomainError
from dagcast.lp import solve_lp


def test_simple_box():
    # max x + y, x <= 2, y <= 3
    res = solve_lp([1, 1], [[1, 0], [0, 1]], [2, 3])
    assert res.value == pytest.approx(5.0)
    assert res.x == pytest.approx([2.0, 3.0])


def test_equality_constraint():
    # max x subject to x + y = 1
    res = solve_lp([1, 0], None, None, [[1, 1]], [1])
    assert res.value == pytest.approx(1.0)
    assert res.x[0] == pytest.approx(1.0)


def test_infeasible_raises():
    with pytest.raises(DomainError):
        solve_lp([1], [[1]], [1], [[1]], [2])


def test_unbounded_raises():
    with pytest.raises(DomainError):
        solve_lp([1, 0], [[0, 1]], [1])


def test_negative_rhs_normalized():
    # x >= 2 written as -x <= -2; maximize -x => x = 2
    res = solve_lp([-1], [[-1]], [-2])
    assert res.x[0] == pytest.approx(2.0)
    assert res.value == pytest.approx(-2.0)


def test_degenerate_does_not_cycle():
    # Klee-Minty-ish degenerate instance; Bland's rule must terminate.
    A = [
        [1, 0, 0],
        [4, 1, 0],
        [8, 4, 1],
    ]
    b = [5, 25, 125]
    res = solve_lp([4, 2, 1], A, b)
    assert res.value == pytest.approx(125.0)


def test_redundant_equalities():
    # Duplicate equality rows must not break phase 1.
    res = solve_lp([1, 1], None, None, [[1, 1], [1, 1]], [1, 1])
    assert res.value == pytest.approx(1.0)


def test_basic_solution_support_is_small():
    # A transportation-flavored LP: the returned x should be basic, so the
    # number of nonzeros is at most the number of rows.
    rng = np.random.default_rng(5)
    A_eq = rng.uniform(0.5, 1.5, size=(3, 10))
    x_feas = np.zeros(10)
    x_feas[:3] = [1.0, 2.0, 0.5]
    b_eq = A_eq @ x_feas
    res = solve_lp(np.zeros(10), None, None, A_eq, b_eq)
    assert np.sum(res.x > 1e-9) <= 3
    assert A_eq @ res.x == pytest.approx(b_eq)


def test_distribution_over_columns():
    # Pick a convex combination matching a target: classic Caratheodory use.
    cols = np.array([[1, 0, 1], [0, 1, 1]], dtype=float)
    target = np.array([0.5, 0.5])
    A_eq = np.vstack([cols, np.ones(3)])
    b_eq = np.concatenate([target, [1.0]])
    res = solve_lp(np.zeros(3), None, None, A_eq, b_eq)
    assert res.x @ cols.T == pytest.approx(target)
    assert res.x.sum() == pytest.approx(1.0)
