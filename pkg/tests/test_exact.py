import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from knapreform.errors import DependentRowsError, SingularMatrixError
from knapreform.exact import (
    Matrix, RadicalExpr, as_rational, cmp_power_products, cmp_roots, det_int, exact_root,
    floor_radical, gram_det, inverse_rational, iroot, round_half_away, solve_rational,
)

from conftest import cofactor_det, random_matrix


def test_det_small_cases():
    assert det_int(Matrix.identity(3)) == 1
    assert det_int(Matrix([[2, 0], [0, 3]])) == 6
    assert det_int(Matrix([[1, 2], [2, 4]])) == 0


def test_det_matches_cofactor_expansion():
    rng = random.Random(5)
    for _ in range(30):
        M = random_matrix(rng, 5, 5)
        assert det_int(M) == cofactor_det(M.rows)


def test_gram_det_examples():
    assert gram_det(Matrix([[3, 4]])) == 25
    assert gram_det(Matrix([[1, 0, 0], [0, 1, 0]])) == 1
    assert gram_det(Matrix([[1, 1], [1, -1]])) == 4
    assert gram_det(Matrix([[1, 2], [2, 4]])) == 0
    with pytest.raises(DependentRowsError):
        gram_det(Matrix([[1, 2], [2, 4]]), strict=True)


def test_inverse_examples():
    assert inverse_rational(Matrix.identity(3)) == Matrix.identity(3)
    assert inverse_rational(Matrix([[1, -4], [0, 1]])) == Matrix([[1, 4], [0, 1]])
    with pytest.raises(SingularMatrixError):
        inverse_rational(Matrix([[1, 2], [2, 4]]))


def _random_unimodular(rng, n, steps=12):
    rows = [list(r) for r in Matrix.identity(n).rows]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    return Matrix(rows)


def test_inverse_of_unimodular_is_integral():
    rng = random.Random(11)
    for _ in range(40):
        M = _random_unimodular(rng, 4)
        Mi = inverse_rational(M)
        assert Mi.is_integral()
        assert M @ Mi == Matrix.identity(4)


def test_inverse_property_sweep():
    rng = random.Random(3)
    done = 0
    while done < 1000:
        n = rng.randint(1, 6)
        M = random_matrix(rng, n, n)
        if det_int(M) == 0:
            continue
        assert inverse_rational(M) @ M == Matrix.identity(n)
        done += 1


def test_solve_rational():
    M = Matrix([[2, 1], [1, 3]])
    x = solve_rational(M, [3, 5])
    assert M @ x == (3, 5)
    assert solve_rational(Matrix([[1, 1], [1, 1]]), [1, 2]) is None


def test_scalars_are_normalized_and_exact():
    assert as_rational(Fraction(4, 2)) == 2 and isinstance(as_rational(Fraction(4, 2)), int)
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert round_half_away(Fraction(5, 2)) == 3
    assert round_half_away(Fraction(-5, 2)) == -3
    assert round_half_away(Fraction(7, 3)) == 2


def test_cmp_roots_examples():
    assert cmp_roots(2, 2, 3, 3) == -1
    assert cmp_roots(4, 2, 2, 1) == 0


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_cmp_roots_hypothesis_boundary(n):
    # f(a)^(2n) = 2^(n^2/2) / A; at A = 2^((n+2)n) the n-th root of
    # 2^(n^2/2)/A equals 2^(-n/2 - 2), and the comparison must be exact there.
    A = 2 ** ((n + 2) * n)
    f2n = Fraction(2 ** (n * n // 2), A)
    assert cmp_roots(f2n, n, Fraction(1, 2 ** (n // 2 + 2)), 1) == 0
    assert cmp_roots(f2n, n, Fraction(3, 4), 1) == -1


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000),
       st.integers(1, 6),
       st.fractions(min_value=Fraction(1, 1000), max_value=1000),
       st.integers(1, 6))
def test_cmp_roots_agrees_with_high_precision(x, p, y, q):
    getcontext().prec = 80
    dx = (Decimal(x.numerator) / Decimal(x.denominator)) ** (Decimal(1) / p)
    dy = (Decimal(y.numerator) / Decimal(y.denominator)) ** (Decimal(1) / q)
    if abs(dx - dy) > Decimal(10) ** -60:
        assert cmp_roots(x, p, y, q) == (1 if dx > dy else -1)


def test_cmp_power_products():
    # 2^(1/2) * 3^(1/3) vs 6^(5/12): 2^6 3^4 = 5184 vs 6^5 = 7776
    assert cmp_power_products([(2, Fraction(1, 2)), (3, Fraction(1, 3))], [(6, Fraction(5, 12))]) == -1
    assert cmp_power_products([(4, Fraction(1, 2))], [(2, 1)]) == 0


def test_iroot_and_exact_root():
    for x in range(0, 2000):
        for k in (1, 2, 3, 5):
            r = iroot(x, k)
            assert r ** k <= x < (r + 1) ** k
    assert exact_root(Fraction(8, 27), 3) == Fraction(2, 3)
    assert exact_root(2, 2) is None


def test_floor_radical_examples():
    assert floor_radical(RadicalExpr.sqrt(10)) == 3
    assert floor_radical(RadicalExpr.sqrt(4) + Fraction(1, 2)) == 2
    # sqrt(2) + sqrt(8) = 3 sqrt(2), merged before flooring
    assert floor_radical(RadicalExpr.sqrt(2) + RadicalExpr.sqrt(8)) == 4
    # sqrt(2) + sqrt(3) ~ 3.146
    assert floor_radical(RadicalExpr.sqrt(2) + RadicalExpr.sqrt(3)) == 3


def test_floor_radical_integer_valued_sum():
    # sqrt(9) + 4^(1/2) + 8^(1/3) resolves rationally to 7
    e = RadicalExpr.sqrt(9) + RadicalExpr.sqrt(4) + RadicalExpr.root(8, 3)
    assert floor_radical(e) == 7


def test_floor_radical_cancelling_terms():
    # terms with equal radicands cancel after merging, leaving the rational 3
    e = RadicalExpr.sqrt(2) + RadicalExpr.sqrt(2, -1) + RadicalExpr.sqrt(3) + RadicalExpr.sqrt(3, -1) + 3
    assert floor_radical(e) == 3
    # 4^(1/4) = sqrt(2), so only sqrt(3) ~ 1.732 survives
    assert floor_radical(RadicalExpr.sqrt(2) + RadicalExpr.root(4, 4, -1) + RadicalExpr.sqrt(3)) == 1


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6), st.integers(1, 7),
       st.fractions(min_value=Fraction(-50), max_value=50))
def test_floor_radical_single_term_exhaustive(base, k, coef):
    val = floor_radical(RadicalExpr.root(base, k, coef))
    # val <= coef * base^(1/k) < val + 1, checked by exact cross-powering
    x = Fraction(base)
    if coef > 0:
        lo, hi = Fraction(val) / coef, Fraction(val + 1) / coef
        assert lo <= 0 or lo ** k <= x
        assert hi > 0 and hi ** k > x
    elif coef < 0:
        # coef * r in [val, val+1)  <=>  r in ( (val+1)/coef, val/coef ]
        up, down = Fraction(val) / coef, Fraction(val + 1) / coef
        assert up >= 0 and up ** k >= x
        assert down < 0 or down ** k < x
    else:
        assert val == 0


def test_interval_contains_value():
    # sqrt(2) + 3^(1/3) = 2.856463...
    e = RadicalExpr.sqrt(2) + RadicalExpr.root(3, 3)
    lo, hi = e.interval(64)
    assert Fraction(28564631, 10 ** 7) <= lo <= hi <= Fraction(28564632, 10 ** 7)
    assert hi - lo < Fraction(1, 10 ** 6)
    assert e.to_decimal_str().startswith("2.85646")
