"""Exact LP over two-sided systems, widths and integer widths, and the
branching bounds that control them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import (
    Matrix,
    RadicalExpr,
    Rational,
    as_rational,
    ceil_q,
    dot,
    floor_q,
    floor_radical,
    norm_sq,
    unit,
    vec,
)
from .parallel import Decomposition
from .reform import KnapsackInstance, NullspaceReform, RangespaceReform, stacked_matrix


@dataclass(frozen=True)
class Polytope:
    """lower <= M x <= upper; ``None`` bounds are infinite."""
    M: Matrix
    lower: tuple
    upper: tuple

    def __post_init__(self):
        m = self.M.nrows
        if len(self.lower) != m or len(self.upper) != m:
            raise ValueError("bound vectors must match the row count")
        lo = tuple(None if x is None else as_rational(x) for x in self.lower)
        hi = tuple(None if x is None else as_rational(x) for x in self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.M.ncols

    def contains(self, x: Sequence) -> bool:
        for row, lo, hi in zip(self.M.rows, self.lower, self.upper):
            val = dot(row, x)
            if lo is not None and val < lo:
                return False
            if hi is not None and val > hi:
                return False
        return True

    def halfspaces(self) -> list[tuple[tuple, Rational]]:
        """The system as a list of (g, h) meaning g x <= h."""
        out = []
        for row, lo, hi in zip(self.M.rows, self.lower, self.upper):
            if hi is not None:
                out.append((row, hi))
            if lo is not None:
                out.append((tuple(-x for x in row), -lo))
        return out


def kp_polytope(inst: KnapsackInstance) -> Polytope:
    """LP relaxation of the original knapsack problem."""
    M = stacked_matrix(inst.a)
    return Polytope(M, (inst.beta1,) + (0,) * inst.n, (inst.beta2,) + inst.v)


def range_polytope(rr: RangespaceReform) -> Polytope:
    """beta1 <= (aU) y <= beta2, 0 <= U y <= v."""
    inst = rr.instance
    return Polytope(rr.reduced, (inst.beta1,) + (0,) * inst.n, (inst.beta2,) + inst.v)


def null_polytope(nr: NullspaceReform) -> Polytope:
    """-x_beta <= V lam <= v - x_beta."""
    inst = nr.instance
    lo = tuple(-x for x in nr.x_beta)
    hi = tuple(vi - x for vi, x in zip(inst.v, nr.x_beta))
    return Polytope(nr.V, lo, hi)


# ------------------------------------------------------------------ simplex

@dataclass(frozen=True)
class LPResult:
    status: str                 # "optimal" | "infeasible" | "unbounded"
    value: Optional[Rational] = None
    vertex: Optional[tuple] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(T: list, basis: list, r: int, c: int) -> None:
    pr = T[r]
    pv = pr[c]
    if pv != 1:
        pr = [x / pv for x in pr]
        T[r] = pr
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f:
                T[i] = [x - f * y for x, y in zip(row, pr)]
    basis[r] = c


def _simplex(T: list, basis: list, cost: list, allowed: list[int]) -> str:
    """Maximize cost . z over the tableau in place, Bland's rule throughout."""
    rhs = len(cost)
    while True:
        cb = [cost[b] for b in basis]
        in_basis = set(basis)
        enter = None
        for j in allowed:
            if j in in_basis:
                continue
            red = cost[j] - sum(w * row[j] for w, row in zip(cb, T) if w)
            if red > 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave, best = None, None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[rhs] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded"
        _pivot(T, basis, leave, enter)


def lp_optimize(c: Sequence, P: Polytope, sense: str = "max") -> LPResult:
    """Exact optimum of c x over P (dense two-phase simplex on Fractions).

    Free variables are split as x = x+ - x-, two-sided rows become pairs of
    <= rows with slacks, and rows with a negative right-hand side receive an
    artificial variable for phase one.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    n = P.dim
    c = vec(c)
    if len(c) != n:
        raise ValueError("objective length does not match the polytope dimension")
    rows = P.halfspaces()
    m = len(rows)
    N0 = 2 * n + m                                   # structural + slack columns
    art = [i for i, (_, h) in enumerate(rows) if h < 0]
    N = N0 + len(art)
    T, basis = [], []
    art_col = {i: N0 + t for t, i in enumerate(art)}
    for i, (g, h) in enumerate(rows):
        row = [Fraction(0)] * (N + 1)
        sgn = -1 if h < 0 else 1
        for j, x in enumerate(g):
            row[j] = Fraction(sgn * x)
            row[n + j] = Fraction(-sgn * x)
        row[2 * n + i] = Fraction(sgn)
        row[N] = Fraction(sgn * h)
        if h < 0:
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        else:
            basis.append(2 * n + i)
        T.append(row)

    if art:
        cost1 = [Fraction(0)] * N
        for col in art_col.values():
            cost1[col] = Fraction(-1)
        _simplex(T, basis, cost1, list(range(N)))
        if sum(T[i][N] for i, b in enumerate(basis) if b >= N0) > 0:
            return LPResult("infeasible")
        i = 0
        while i < len(T):
            if basis[i] >= N0:
                j = next((j for j in range(N0) if T[i][j] != 0), None)
                if j is None:
                    del T[i]
                    del basis[i]
                    continue
                _pivot(T, basis, i, j)
            i += 1
        T = [row[:N0] + [row[N]] for row in T]
        N = N0

    sgn = 1 if sense == "max" else -1
    cost = [Fraction(sgn * x) for x in c] + [Fraction(-sgn * x) for x in c] + [Fraction(0)] * m
    status = _simplex(T, basis, cost, list(range(N)))
    if status == "unbounded":
        return LPResult("unbounded")
    z = [Fraction(0)] * N
    for i, b in enumerate(basis):
        z[b] = T[i][N]
    x = tuple(as_rational(z[j] - z[n + j]) for j in range(n))
    return LPResult("optimal", dot(c, x), x)


# ------------------------------------------------------------------ widths

@dataclass(frozen=True)
class WidthReport:
    status: str                        # "optimal" | "infeasible"
    cmax: Optional[Rational]
    cmin: Optional[Rational]
    width: Optional[Rational]
    iwidth: int


def integer_width(cmax: Rational, cmin: Rational) -> int:
    return max(0, floor_q(cmax) - ceil_q(cmin) + 1)


def width_report(c: Sequence, P: Polytope, optimize=lp_optimize) -> WidthReport:
    hi = optimize(c, P, "max")
    if hi.status == "infeasible":
        return WidthReport("infeasible", None, None, None, 0)
    lo = optimize(c, P, "min")
    if "unbounded" in (hi.status, lo.status):
        raise ValueError("polytope is unbounded in the given direction")
    return WidthReport("optimal", hi.value, lo.value, as_rational(hi.value - lo.value),
                       integer_width(hi.value, lo.value))


def iwidth(c: Sequence, P: Polytope) -> int:
    """floor(max c x) - ceil(min c x) + 1, clamped at 0 (also 0 when P is empty)."""
    return width_report(c, P).iwidth


def _cond_polytope(p: Sequence, ell: int, v: Sequence, upper_side: bool) -> Polytope:
    M = Matrix([tuple(p)]).vstack(Matrix.identity(len(v)))
    if upper_side:
        return Polytope(M, (None,) + (0,) * len(v), (ell,) + tuple(v))
    return Polytope(M, (ell,) + (0,) * len(v), (None,) + tuple(v))


def cond_max(w: Sequence, ell: int, p: Sequence, v: Sequence) -> Rational:
    """max{w x : p x <= ell, 0 <= x <= v}."""
    res = lp_optimize(w, _cond_polytope(p, ell, v, True), "max")
    if not res.optimal:
        raise ValueError(f"conditional max is {res.status}")
    return res.value


def cond_min(w: Sequence, ell: int, p: Sequence, v: Sequence) -> Rational:
    """min{w x : p x >= ell, 0 <= x <= v}."""
    res = lp_optimize(w, _cond_polytope(p, ell, v, False), "min")
    if not res.optimal:
        raise ValueError(f"conditional min is {res.status}")
    return res.value


# ------------------------------------------------------------------ bounds

def branch_bound_expr(dec: Decomposition, v: Sequence[int], beta1: int, beta2: int) -> RadicalExpr:
    """||r|| ||v|| / lam + (beta2 - beta1) / lam as an exact radical sum."""
    lam = Fraction(dec.lam)
    return RadicalExpr.sqrt(Fraction(dec.r_norm_sq) * norm_sq(v) / lam ** 2) + Fraction(beta2 - beta1) / lam


def branch_bound(dec: Decomposition, v: Sequence[int], beta1: int, beta2: int) -> int:
    """Upper bound on iwidth(p, KP) for a decomposition with p >= 0."""
    if any(x < 0 for x in dec.p):
        raise ValueError("branching bound needs p >= 0 componentwise")
    return floor_radical(branch_bound_expr(dec, v, beta1, beta2)) + 1


def thm1_range_expr(a: Sequence[int], v: Sequence[int], beta1: int, beta2: int) -> RadicalExpr:
    # f(a) (2||v|| + d) with f(a) = (2^(n^2) / A^2)^(1/(4n))
    n, A, V = len(a), norm_sq(a), norm_sq(v)
    base = Fraction(2 ** (n * n), A * A)
    return RadicalExpr.root(base * Fraction(V) ** (2 * n), 4 * n, 2) + RadicalExpr.root(base, 4 * n, beta2 - beta1)


def thm1_bound_range(a: Sequence[int], v: Sequence[int], beta1: int, beta2: int) -> int:
    """floor(f(a) (2 ||v|| + (beta2 - beta1))) + 1."""
    return floor_radical(thm1_range_expr(a, v, beta1, beta2)) + 1


def thm1_null_expr(a: Sequence[int], v: Sequence[int]) -> RadicalExpr:
    # 2 g(a) ||v|| = 2 (2^((n-2)(n-1)) V^(2(n-1)) / A^2)^(1/(4(n-1)))
    n, A, V = len(a), norm_sq(a), norm_sq(v)
    if n < 2:
        raise ValueError("null-side bound needs n >= 2")
    base = Fraction(2 ** ((n - 2) * (n - 1)) * V ** (2 * (n - 1)), A * A)
    return RadicalExpr.root(base, 4 * (n - 1), 2)


def thm1_bound_null(a: Sequence[int], v: Sequence[int]) -> int:
    """floor(2 g(a) ||v||) + 1."""
    return floor_radical(thm1_null_expr(a, v)) + 1


# -------------------------------------------------------------- transference

@dataclass(frozen=True)
class TransferenceResult:
    unit_image: bool        # p U = +-e_n  (resp. p V = +-e_{n-1})
    iwidth_original: int
    iwidth_reformed: int

    @property
    def ok(self) -> bool:
        return self.unit_image and self.iwidth_original == self.iwidth_reformed

    def __bool__(self) -> bool:
        return self.ok


def _is_pm_unit(w: Sequence, i: int) -> bool:
    e = unit(len(w), i)
    return tuple(w) == e or tuple(-x for x in w) == e


def transference_check(inst: KnapsackInstance, reform: Union[RangespaceReform, NullspaceReform],
                       p: Sequence[int]) -> TransferenceResult:
    """Branching on p x in the original equals branching on the last (range)
    or next-to-last (null) variable of the reformulation."""
    Q = kp_polytope(inst)
    if isinstance(reform, RangespaceReform):
        n = inst.n
        image = tuple(p) @ reform.U
        unit_ok = _is_pm_unit(image, n - 1)
        reformed = iwidth(unit(n, n - 1), range_polytope(reform))
    else:
        k = inst.n - 1
        image = tuple(p) @ reform.V
        unit_ok = _is_pm_unit(image, k - 1)
        reformed = iwidth(unit(k, k - 1), null_polytope(reform))
    return TransferenceResult(unit_ok, iwidth(p, Q), reformed)
