"""Near-parallel directions: orthogonal decompositions a = lam p + r, their
extraction from reformulation transforms, and exact certification of the
associated bounds.

All bound checks are exact: quantities carrying n-th roots of ||a|| are
compared after raising both sides to a common integer power.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import OrthogonalDirectionError, SingularMatrixError
from .exact import (
    Matrix,
    Rational,
    as_rational,
    cmp_power_products,
    dot,
    gram_det,
    inverse_rational,
    norm_sq,
    round_half_away,
    vec,
    vscale,
    vsub,
)
from .reform import NullspaceReform, RangespaceReform, check_hypothesis


@dataclass(frozen=True)
class Decomposition:
    a: tuple
    p: tuple
    lam: Rational
    r: tuple
    r_norm_sq: Rational
    p_norm_sq: int

    @property
    def ratio_sq(self) -> Rational:
        """(||r|| / lam)^2."""
        return as_rational(Fraction(self.r_norm_sq) / Fraction(self.lam) ** 2)

    @property
    def sin_sq(self) -> Rational:
        """sin^2(a, p) = ||r||^2 / ||a||^2."""
        return as_rational(Fraction(self.r_norm_sq) / norm_sq(self.a))


def decompose(a: Sequence[int], p: Sequence[int]) -> Decomposition:
    """a = lam p + r with r orthogonal to p and lam > 0 (p negated if needed)."""
    a, p = vec(a), vec(p)
    if len(a) != len(p):
        raise ValueError("a and p differ in length")
    if not any(p):
        raise ValueError("p must be nonzero")
    ap = dot(a, p)
    if ap == 0:
        raise OrthogonalDirectionError("a.p == 0: p is orthogonal to a")
    if ap < 0:
        p, ap = tuple(-x for x in p), -ap
    pp = norm_sq(p)
    lam = as_rational(Fraction(ap, pp))
    r = vsub(a, vscale(lam, p))
    return Decomposition(a, p, lam, r, norm_sq(r), pp)


def extract_range_direction(rr: RangespaceReform) -> tuple:
    """Last row of U^-1."""
    return rr.U_inv.row(rr.U_inv.nrows - 1)


def null_inverse(nr: NullspaceReform) -> Matrix:
    """(V, b)^-1; integral because (V, b) is unimodular. Its last row is a."""
    n = len(nr.instance.a)
    Vb = nr.V.hstack(Matrix.from_columns([nr.b], nrows=n))
    inv = inverse_rational(Vb)
    if not inv.is_integral():
        raise SingularMatrixError("(V, b) is not unimodular")
    if inv.row(n - 1) != nr.instance.a:
        raise AssertionError("last row of (V, b)^-1 differs from a")
    return inv


def extract_null_direction(nr: NullspaceReform) -> tuple:
    """Row n-1 of (V, b)^-1."""
    inv = null_inverse(nr)
    return inv.row(inv.nrows - 2)


# ------------------------------------------------------------- certification

def _le(x: Rational, factors: list) -> bool:
    """x <= prod(b**e) for x >= 0."""
    if x == 0:
        return True
    return cmp_power_products([(x, 1)], factors) <= 0


def _ge_one(factors: list) -> bool:
    return cmp_power_products(factors, [(1, 1)]) >= 0


def _range_items(n: int, k: int, A: int, D: Rational, R: Rational, lam_sq: Rational) -> dict:
    # f(a,k)^2 = 2^((k(n-k)+1)/2) A^(-k/n);  f(a,1) = f(a)
    e2 = Fraction(k * (n - k) + 1, 2)
    ek = Fraction(-k, n)
    ratio = Fraction(R) / Fraction(lam_sq)
    return {
        "i1": _le(Fraction(D) * (1 + Fraction(R)), [(2, e2), (A, 1 + ek)]),
        "i2": _ge_one([(lam_sq, 1), (2, e2), (A, ek)]),
        "i3": _le(ratio, [(2, 2 + e2), (A, ek)]),
        "sin_le_ratio": Fraction(R) / A <= ratio,
    }


def _null_items(n: int, k: int, A: int, D: Rational, R: Rational, lam_sq: Rational) -> dict:
    # g(a,k)^2 = 2^(k(n-1-k)/2) A^(-k/(n-1));  g(a,1) = g(a)
    e2 = Fraction(k * (n - 1 - k), 2)
    ek = Fraction(-k, n - 1)
    ratio = Fraction(R) / Fraction(lam_sq)
    return {
        "i1": _le(Fraction(D) * Fraction(R), [(2, e2), (A, 1 + ek)]),
        "i2": _le(ratio, [(2, 2 + e2), (A, ek)]),
        "r_nonzero": R != 0,
        "sin_le_ratio": Fraction(R) / A <= ratio,
    }


def certify_thm3(a: Sequence[int], dec: Decomposition) -> dict:
    """Range-side bounds: ||p||^2 (1 + ||r||^2) <= ||a||^2 f(a)^2,
    lam >= 1/f(a), ||r||/lam <= 2 f(a)."""
    n, A = len(a), norm_sq(a)
    items = _range_items(n, 1, A, dec.p_norm_sq, dec.r_norm_sq, Fraction(dec.lam) ** 2)
    return {"hyp": check_hypothesis(a), "i1": items["i1"], "i2": items["i2"], "i3": items["i3"]}


def certify_thm4(a: Sequence[int], dec: Decomposition) -> dict:
    """Null-side bounds: ||p|| ||r|| <= ||a|| g(a), ||r||/lam <= 2 g(a), r != 0."""
    n, A = len(a), norm_sq(a)
    items = _null_items(n, 1, A, dec.p_norm_sq, dec.r_norm_sq, Fraction(dec.lam) ** 2)
    return {"hyp": check_hypothesis(a), "i1": items["i1"], "i2": items["i2"], "r_nonzero": items["r_nonzero"]}


def check_prop1(a: Sequence[int], p: Sequence[int]) -> dict:
    """sin(a,p) <= ||r||/lam always; sign agreement when ||r||/lam < 1;
    round(a_i/lam) == p_i when ||r||/lam < 1/2. None marks not applicable."""
    dec = decompose(a, p)
    ratio = Fraction(dec.ratio_sq)
    out = {"sin_le_ratio": Fraction(dec.sin_sq) <= ratio, "sign_agree": None, "rounding": None}
    if ratio < 1:
        out["sign_agree"] = all((pi > 0) == (ai > 0) for pi, ai in zip(dec.p, dec.a) if pi != 0)
    if ratio < Fraction(1, 4):
        out["rounding"] = all(
            round_half_away(Fraction(ai) / Fraction(dec.lam)) == pi for ai, pi in zip(dec.a, dec.p)
        )
    return out


# ------------------------------------------------------- successive approximation

@dataclass(frozen=True)
class SuccessiveApprox:
    k: int
    P: Matrix
    a_k: tuple          # projection of a onto the row space of P
    r: tuple
    r_norm_sq: Rational
    gram: Rational      # det(P P^T)
    lam_sq: Rational    # ||a(k)||^2 / det(P P^T)


def successive(rows_source: Matrix, a: Sequence[int], k: int, skip_last: int = 0) -> SuccessiveApprox:
    """Project a onto the span of k consecutive rows of ``rows_source``.

    The rows taken are the last k (``skip_last=0``, range side) or the
    next-to-last k (``skip_last=1``, null side).
    """
    N = rows_source.nrows
    if not 1 <= k <= N - skip_last:
        raise ValueError(f"k must lie in 1..{N - skip_last}")
    P = rows_source.select_rows(range(N - skip_last - k, N - skip_last))
    D = gram_det(P, strict=True)
    a = vec(a)
    G_inv = inverse_rational(P @ P.T)
    a_k = P.T @ (G_inv @ (P @ a))
    if not any(a_k):
        raise OrthogonalDirectionError("a is orthogonal to the selected rows")
    r = vsub(a, a_k)
    lam_sq = as_rational(Fraction(norm_sq(a_k)) / Fraction(D))
    return SuccessiveApprox(k, P, a_k, r, norm_sq(r), D, lam_sq)


def certify_thm5(a: Sequence[int], S: SuccessiveApprox) -> dict:
    n, A = len(a), norm_sq(a)
    items = _range_items(n, S.k, A, S.gram, S.r_norm_sq, S.lam_sq)
    return {"hyp": check_hypothesis(a), **items}


def certify_thm6(a: Sequence[int], S: SuccessiveApprox) -> dict:
    n, A = len(a), norm_sq(a)
    items = _null_items(n, S.k, A, S.gram, S.r_norm_sq, S.lam_sq)
    return {"hyp": check_hypothesis(a), **items}
