from math import prod

import pytest

from knapreform.errors import BudgetExceeded
from knapreform.exact import Matrix
from knapreform.oracle import (
    EnumerationBudget, bijection_check, enumerate_feasible, enumerate_integer_points,
    vertex_enum_optimize, vertices,
)
from knapreform.reform import KnapsackInstance, build_nullspace, build_rangespace
from knapreform.width import Polytope, kp_polytope, lp_optimize

from conftest import small_pool


def test_vertex_enum_examples():
    box = Polytope(Matrix.identity(2), (0, 0), (1, 1))
    assert vertex_enum_optimize((1, 0), box, "max").value == 1
    assert vertex_enum_optimize((1, 0), box, "min").value == 0
    assert len(vertices(box)) == 4
    P = Polytope(Matrix([[3, 5], [1, 0], [0, 1]]), (0, 0, 0), (8, 1, 1))
    assert vertex_enum_optimize((1, 1), P, "max").value == 2


def test_vertex_enum_degenerate_equality():
    inst = KnapsackInstance((3, 5, 7), (2, 2, 2), 15, 15)
    Q = kp_polytope(inst)
    for c in ((1, 0, 0), (1, -1, 2), (0, 0, 1)):
        for sense in ("max", "min"):
            assert vertex_enum_optimize(c, Q, sense).value == lp_optimize(c, Q, sense).value


def test_vertex_enum_refuses_unbounded_and_budget():
    with pytest.raises(ValueError):
        vertices(Polytope(Matrix([[1, 1]]), (0,), (1,)))
    box = Polytope(Matrix.identity(3), (0,) * 3, (1,) * 3)
    with pytest.raises(BudgetExceeded):
        vertices(box, EnumerationBudget(max_active_sets=2))
    with pytest.raises(ValueError):
        EnumerationBudget(max_points=0)


def test_enumerate_feasible_examples():
    assert enumerate_feasible(KnapsackInstance((2, 3), (1, 1), 5, 5)) == [(1, 1)]
    assert enumerate_feasible(KnapsackInstance((2, 3), (2, 1), 0, 0)) == [(0, 0)]
    inst = KnapsackInstance((2, 3, 4), (1, 2, 1), 0, 12)
    assert len(enumerate_feasible(inst)) == prod(v + 1 for v in inst.v)
    with pytest.raises(BudgetExceeded):
        enumerate_feasible(inst, EnumerationBudget(max_points=5))


def test_integer_points_match_direct_filter():
    for inst in small_pool(15, [2, 3], 20, 3, seed=4):
        Q = kp_polytope(inst)
        pts = set(enumerate_integer_points(Q))
        assert pts == set(enumerate_feasible(inst))


def test_bijection_examples():
    inst = KnapsackInstance((2, 3), (1, 1), 5, 5)
    for reform in (build_rangespace(inst), build_nullspace(inst)):
        res = bijection_check(inst, reform)
        assert res.ok and res.original == res.reformed == 1


def test_bijection_empty():
    inst = KnapsackInstance((4, 7), (1, 1), 5, 5)
    assert enumerate_feasible(inst) == []
    assert bijection_check(inst, build_rangespace(inst))
    assert bijection_check(inst, build_nullspace(inst))
