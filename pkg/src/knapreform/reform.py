"""Knapsack instances and their rangespace / nullspace reformulations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InstanceError
from .exact import Matrix, Rational, dot, format_decimal, gcd_all, norm_sq
from .lattice import coeff_vector, is_lll_reduced, lll_reduce, nullspace_basis


@dataclass(frozen=True)
class KnapsackInstance:
    """beta1 <= a x <= beta2, 0 <= x <= v, x integral."""
    a: tuple
    v: tuple
    beta1: int
    beta2: int

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        v = tuple(int(x) for x in self.v)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "beta1", int(self.beta1))
        object.__setattr__(self, "beta2", int(self.beta2))
        if not a:
            raise InstanceError("empty weight vector")
        if len(v) != len(a):
            raise InstanceError(f"v has length {len(v)}, a has length {len(a)}")
        if any(x < 1 for x in a):
            raise InstanceError("weights must be positive")
        if any(x < 0 for x in v):
            raise InstanceError("upper bounds must be nonnegative")
        if gcd_all(a) != 1:
            raise InstanceError("weights not coprime (gcd(a) != 1)")
        if not 0 <= self.beta1 <= self.beta2 <= dot(a, v):
            raise InstanceError(f"need 0 <= beta1 <= beta2 <= a.v = {dot(a, v)}")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def is_equality(self) -> bool:
        return self.beta1 == self.beta2


def normalize_gcd(a: Sequence[int], v: Sequence[int], beta1: int, beta2: int) -> KnapsackInstance:
    """Divide a by its gcd g; beta1 is rounded up and beta2 down to multiples of g.

    Integral solutions are unchanged. Raises if the rescaled range is empty.
    """
    g = gcd_all(a)
    if g == 0:
        raise InstanceError("zero weight vector")
    lo = -((-beta1) // g)
    hi = beta2 // g
    if lo > hi:
        raise InstanceError(f"no multiple of gcd {g} lies in [{beta1}, {beta2}]")
    return KnapsackInstance(tuple(x // g for x in a), tuple(v), lo, hi)


def stacked_matrix(a: Sequence[int]) -> Matrix:
    """The (n+1) x n matrix [a; I]."""
    return Matrix([tuple(a)]).vstack(Matrix.identity(len(a)))


@dataclass(frozen=True)
class RangespaceReform:
    instance: KnapsackInstance
    U: Matrix
    U_inv: Matrix
    aU: tuple
    reduced: Matrix   # [a; I] U


@dataclass(frozen=True)
class NullspaceReform:
    instance: KnapsackInstance
    V: Matrix
    x_beta: tuple
    b: tuple          # a @ b == 1


def build_rangespace(inst: KnapsackInstance) -> RangespaceReform:
    R = lll_reduce(stacked_matrix(inst.a))
    return RangespaceReform(inst, R.U, R.U_inv, tuple(R.B_red.row(0)), R.B_red)


def build_nullspace(inst: KnapsackInstance) -> NullspaceReform:
    if not inst.is_equality:
        raise InstanceError("nullspace reformulation requires equality (beta1 == beta2)")
    if inst.n < 2:
        raise InstanceError("nullspace reformulation needs n >= 2")
    V = lll_reduce(nullspace_basis(inst.a)).B_red
    x_beta = coeff_vector(inst.a, inst.beta1, against=V)
    b = coeff_vector(inst.a, 1, against=V)
    return NullspaceReform(inst, V, x_beta, b)


def check_reforms(rr: RangespaceReform | None = None, nr: NullspaceReform | None = None) -> list[str]:
    """Structural invariants of reformulations; returns the list of failures."""
    bad = []
    if rr is not None:
        a = rr.instance.a
        if stacked_matrix(a) @ rr.U != rr.reduced:
            bad.append("[a; I] U != reduced basis")
        if rr.U @ rr.U_inv != Matrix.identity(len(a)):
            bad.append("U U_inv != I")
        if not is_lll_reduced(rr.reduced):
            bad.append("rangespace basis not LLL-reduced")
    if nr is not None:
        a = nr.instance.a
        if any(x != 0 for x in a @ nr.V):
            bad.append("a V != 0")
        if dot(a, nr.x_beta) != nr.instance.beta1:
            bad.append("a x_beta != beta")
        if dot(a, nr.b) != 1:
            bad.append("a b != 1")
        if not is_lll_reduced(nr.V):
            bad.append("nullspace basis not LLL-reduced")
    return bad


# ------------------------------------------------------------------ density

def density_below(a: Sequence[int], t: Rational) -> bool:
    """Exactly decide d(a) = n / log2 ||a||_inf < t (t > 0).

    d(a) < t  <=>  ||a||_inf^t > 2^n, raised to t's denominator.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError("density threshold must be positive")
    m = max(abs(int(x)) for x in a)
    return m ** t.numerator > 2 ** (len(a) * t.denominator)


def density_approx(a: Sequence[int]) -> str:
    """Display-only decimal rendering of d(a)."""
    m = max(abs(int(x)) for x in a)
    if m <= 1:
        return "inf"
    return format_decimal(Fraction(len(a) / math.log2(m)), 6)


def check_hypothesis(a: Sequence[int]) -> bool:
    """||a|| >= 2^((n/2 + 1) n), i.e. ||a||^2 >= 2^((n + 2) n)."""
    n = len(a)
    return norm_sq(a) >= 2 ** ((n + 2) * n)
