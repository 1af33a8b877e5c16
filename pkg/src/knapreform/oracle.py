"""Brute-force oracles, independent of the simplex and of the reformulation
code paths they check. Every oracle is exhaustive or refuses to run."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from math import comb, prod
from typing import Sequence, Union

from .errors import BudgetExceeded
from .exact import Matrix, ceil_q, det_rational, dot, floor_q, gram_det, inverse_rational, solve_rational
from .reform import KnapsackInstance, NullspaceReform, RangespaceReform
from .width import LPResult, Polytope, kp_polytope, null_polytope, range_polytope, width_report


@dataclass(frozen=True)
class EnumerationBudget:
    max_points: int = 10 ** 7
    max_active_sets: int = 10 ** 6

    def __post_init__(self):
        if self.max_points < 1 or self.max_active_sets < 1:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = EnumerationBudget()


def _require_bounded(P: Polytope) -> None:
    if any(x is None for x in P.lower + P.upper) or gram_det(P.M.T) == 0:
        raise ValueError("oracle needs a bounded polytope: finite two-sided rows of full column rank")


def vertices(P: Polytope, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[tuple]:
    """All vertices of a bounded polytope.

    Every n-subset of rows is inverted once; each choice of lower/upper bound
    on those rows then gives one candidate point, kept if it satisfies all rows.
    """
    _require_bounded(P)
    n, m = P.dim, P.M.nrows
    bounds = [sorted({P.lower[i], P.upper[i]}) for i in range(m)]
    n_sets = comb(m, n)
    if n_sets * 2 ** n > budget.max_active_sets:
        raise BudgetExceeded(f"{n_sets * 2 ** n} active sets exceed the budget")
    found = set()
    for rows in itertools.combinations(range(m), n):
        sub = P.M.select_rows(rows)
        if det_rational(sub) == 0:
            continue
        inv = inverse_rational(sub)
        for rhs in itertools.product(*(bounds[i] for i in rows)):
            x = inv @ rhs
            if x not in found and P.contains(x):
                found.add(x)
    return sorted(found)


def vertex_enum_optimize(c: Sequence, P: Polytope, sense: str = "max",
                         budget: EnumerationBudget = DEFAULT_BUDGET) -> LPResult:
    """Same contract as ``lp_optimize`` for bounded polytopes."""
    verts = vertices(P, budget)
    if not verts:
        return LPResult("infeasible")
    key = (lambda x: dot(c, x)) if sense == "max" else (lambda x: -dot(c, x))
    best = max(verts, key=key)
    return LPResult("optimal", dot(c, best), best)


def node_count(inst: KnapsackInstance, p: Sequence[int], budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """Branch-and-bound node count along p, computed by vertex enumeration."""
    opt = partial(vertex_enum_optimize, budget=budget)
    return width_report(p, kp_polytope(inst), optimize=opt).iwidth


def enumerate_feasible(inst: KnapsackInstance, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[tuple]:
    """All integral x with 0 <= x <= v and beta1 <= a x <= beta2."""
    if prod(x + 1 for x in inst.v) > budget.max_points:
        raise BudgetExceeded("box has too many integer points")
    return [
        x for x in itertools.product(*(range(vi + 1) for vi in inst.v))
        if inst.beta1 <= dot(inst.a, x) <= inst.beta2
    ]


def enumerate_integer_points(P: Polytope, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[tuple]:
    """All integer points of a bounded polytope.

    The first n-1 coordinates range over the vertex bounding box; the last
    coordinate's feasible interval is solved exactly for each prefix.
    """
    _require_bounded(P)
    n = P.dim
    verts = vertices(P, budget)
    if not verts:
        return []
    ranges = []
    for j in range(n - 1):
        lo = ceil_q(min(x[j] for x in verts))
        hi = floor_q(max(x[j] for x in verts))
        ranges.append(range(lo, hi + 1))
    if prod(len(r) for r in ranges) > budget.max_points:
        raise BudgetExceeded("bounding box has too many integer points")
    out = []
    for prefix in itertools.product(*ranges):
        lo, hi, ok = None, None, True
        for g, l, u in zip(P.M.rows, P.lower, P.upper):
            s = dot(g[:-1], prefix)
            c = g[-1]
            if c == 0:
                if not l <= s <= u:
                    ok = False
                    break
                continue
            a, b = Fraction(l - s, 1) / c, Fraction(u - s, 1) / c
            if c < 0:
                a, b = b, a
            lo = a if lo is None or a > lo else lo
            hi = b if hi is None or b < hi else hi
        if not ok:
            continue
        if lo is None:
            raise ValueError("last coordinate is unconstrained")
        for t in range(ceil_q(lo), floor_q(hi) + 1):
            out.append(tuple(prefix) + (t,))
    return out


@dataclass(frozen=True)
class BijectionResult:
    ok: bool
    original: int
    reformed: int

    def __bool__(self) -> bool:
        return self.ok


def bijection_check(inst: KnapsackInstance, reform: Union[RangespaceReform, NullspaceReform],
                    budget: EnumerationBudget = DEFAULT_BUDGET) -> BijectionResult:
    """Exhaustively match integer points of (KP) with those of a reformulation."""
    X = enumerate_feasible(inst, budget)
    if isinstance(reform, RangespaceReform):
        Y = set(enumerate_integer_points(range_polytope(reform), budget))
        image = set()
        for x in X:
            y = reform.U_inv @ x
            if reform.U @ y != x:
                return BijectionResult(False, len(X), len(Y))
            image.add(y)
        back = {reform.U @ y for y in Y}
    else:
        Y = set(enumerate_integer_points(null_polytope(reform), budget))
        n = inst.n
        Vb = reform.V.hstack(Matrix.from_columns([reform.b], nrows=n))
        image = set()
        for x in X:
            sol = solve_rational(Vb, [xi - bi for xi, bi in zip(x, reform.x_beta)])
            if sol is None or sol[-1] != 0 or any(not isinstance(t, int) for t in sol):
                return BijectionResult(False, len(X), len(Y))
            image.add(sol[:-1])
        back = {tuple(bi + d for bi, d in zip(reform.x_beta, reform.V @ y)) for y in Y}
    ok = image == Y and back == set(X) and len(X) == len(Y)
    return BijectionResult(ok, len(X), len(Y))
