import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from knapreform.errors import InstanceError
from knapreform.exact import Matrix, dot
from knapreform.lattice import is_lll_reduced
from knapreform.oracle import bijection_check, enumerate_feasible
from knapreform.reform import (
    KnapsackInstance, build_nullspace, build_rangespace, check_hypothesis, check_reforms,
    density_approx, density_below, normalize_gcd, stacked_matrix,
)
from knapreform.width import kp_polytope, range_polytope

from conftest import EXAMPLE_A, small_pool


def test_instance_validation():
    with pytest.raises(InstanceError, match="coprime"):
        KnapsackInstance((2, 4), (1, 1), 0, 2)
    with pytest.raises(InstanceError):
        KnapsackInstance((2, 3), (1, 1), 3, 2)
    with pytest.raises(InstanceError):
        KnapsackInstance((2, 3), (1, 1), 0, 6)
    with pytest.raises(InstanceError):
        KnapsackInstance((0, 3), (1, 1), 0, 1)
    with pytest.raises(InstanceError):
        KnapsackInstance((2, 3), (1,), 0, 1)


def test_normalize_gcd():
    inst = normalize_gcd((4, 6), (1, 1), 3, 9)
    assert inst.a == (2, 3) and (inst.beta1, inst.beta2) == (2, 4)
    with pytest.raises(InstanceError):
        normalize_gcd((4, 6), (1, 1), 3, 3)


def test_rangespace_trivial_and_example():
    rr = build_rangespace(KnapsackInstance((1,), (3,), 0, 2))
    assert rr.U in (Matrix([[1]]), Matrix([[-1]]))
    inst = KnapsackInstance(EXAMPLE_A, (1,) * 5, 6130, 6130)
    rr = build_rangespace(inst)
    assert not check_reforms(rr=rr)
    assert is_lll_reduced(stacked_matrix(EXAMPLE_A) @ rr.U)
    assert bijection_check(inst, rr)


def test_rangespace_small_count():
    inst = KnapsackInstance((2, 3), (1, 1), 0, 5)
    rr = build_rangespace(inst)
    res = bijection_check(inst, rr)
    assert res.ok and res.original == res.reformed == 4


def test_nullspace_examples():
    inst = KnapsackInstance((2, 3), (1, 1), 5, 5)
    nr = build_nullspace(inst)
    assert not check_reforms(nr=nr)
    res = bijection_check(inst, nr)
    assert res.ok and res.original == 1
    with pytest.raises(InstanceError, match="requires equality"):
        build_nullspace(KnapsackInstance((2, 3), (1, 1), 0, 5))


def test_nullspace_zero_rhs():
    nr = build_nullspace(KnapsackInstance((2, 3, 7), (2, 2, 2), 0, 0))
    assert nr.x_beta == (0, 0, 0)


def test_nullspace_example_preimages():
    beta = dot(EXAMPLE_A, (1, 1, 0, 0, 1))
    inst = KnapsackInstance(EXAMPLE_A, (1,) * 5, beta, beta)
    nr = build_nullspace(inst)
    assert not check_reforms(nr=nr)
    assert enumerate_feasible(inst) == [(1, 1, 0, 0, 1)]
    assert bijection_check(inst, nr)


def test_lp_relaxations_correspond():
    rng = random.Random(4)
    for inst in small_pool(10, [3, 4], 40, 3, seed=9):
        rr = build_rangespace(inst)
        Q, Qr = kp_polytope(inst), range_polytope(rr)
        for _ in range(20):
            x = tuple(Fraction(rng.randint(-2, 4 * vi + 2), 4) for vi in inst.v)
            y = rr.U_inv @ x
            assert Q.contains(x) == Qr.contains(y)


def test_density_examples():
    assert not density_below((2, 2), 2)
    assert density_approx(EXAMPLE_A) == "0.395343"
    assert density_below(EXAMPLE_A, Fraction(2, 5))
    assert not density_below(EXAMPLE_A, Fraction(39, 100))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 2 ** 40), min_size=1, max_size=8), st.integers(1, 20))
def test_density_threshold_equivalence(a, c):
    # d(a) < c/n  <=>  2^(n^2/c) < ||a||_inf, cross-powered
    n = len(a)
    assert density_below(a, Fraction(c, n)) == (2 ** (n * n) < max(a) ** c)


def test_check_hypothesis():
    assert check_hypothesis((256, 1))
    assert not check_hypothesis(EXAMPLE_A)
    for n in range(2, 9, 2):
        edge = 2 ** ((n + 2) * n // 2)
        assert check_hypothesis((edge,) + (0,) * (n - 1))
        assert not check_hypothesis((edge - 1,) + (0,) * (n - 1))
