"""Exact integer/rational linear algebra and certified radical arithmetic.

Scalars are Python ``int`` and ``fractions.Fraction`` (always in lowest terms
with a positive denominator). Vectors are tuples; matrices are :class:`Matrix`.
Nothing in this module ever rounds implicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import DependentRowsError, DimensionError, RadicalSeparationError, SingularMatrixError

Rational = Union[int, Fraction]


def as_rational(x) -> Rational:
    """Return ``x`` as an int when integral, else as a Fraction."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_rational(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not accepted by the exact core")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def is_integral(x: Rational) -> bool:
    return isinstance(x, int) or x.denominator == 1


# ---------------------------------------------------------------- vectors

def vec(xs: Iterable) -> tuple:
    return tuple(as_rational(x) for x in xs)


def dot(u: Sequence, v: Sequence) -> Rational:
    if len(u) != len(v):
        raise DimensionError(f"dot of lengths {len(u)} and {len(v)}")
    return as_rational(sum((x * y for x, y in zip(u, v)), 0))


def norm_sq(u: Sequence) -> Rational:
    return dot(u, u)


def vadd(u: Sequence, v: Sequence) -> tuple:
    if len(u) != len(v):
        raise DimensionError(f"add of lengths {len(u)} and {len(v)}")
    return tuple(as_rational(x + y) for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    if len(u) != len(v):
        raise DimensionError(f"sub of lengths {len(u)} and {len(v)}")
    return tuple(as_rational(x - y) for x, y in zip(u, v))


def vscale(c: Rational, u: Sequence) -> tuple:
    return tuple(as_rational(c * x) for x in u)


def unit(n: int, i: int) -> tuple:
    """The i-th unit vector of length n (0-based)."""
    return tuple(1 if j == i else 0 for j in range(n))


def round_half_away(x: Rational) -> int:
    """Nearest integer, ties rounded away from zero."""
    x = Fraction(x)
    if x >= 0:
        return (2 * x.numerator + x.denominator) // (2 * x.denominator)
    return -round_half_away(-x)


def floor_q(x: Rational) -> int:
    x = Fraction(x)
    return x.numerator // x.denominator


def ceil_q(x: Rational) -> int:
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


# ---------------------------------------------------------------- matrices

class Matrix:
    """Immutable dense matrix of ints/Fractions with explicit shape."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rs = tuple(vec(r) for r in rows)
        if ncols is None:
            ncols = len(rs[0]) if rs else 0
        for r in rs:
            if len(r) != ncols:
                raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "rows", rs)
        object.__setattr__(self, "nrows", len(rs))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls((unit(n, i) for i in range(n)), ncols=n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not cols:
            if nrows is None:
                raise DimensionError("cannot infer row count of an empty column list")
            return cls([() for _ in range(nrows)], ncols=0)
        return cls(zip(*cols), ncols=len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix([() for _ in range(self.ncols)], ncols=0)
        return Matrix(zip(*self.rows), ncols=self.nrows)

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({[list(r) for r in self.rows]!r})"

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"matmul {self.shape} @ {other.shape}")
            cols = other.columns()
            return Matrix(([dot(r, c) for c in cols] for r in self.rows), ncols=other.ncols)
        other = tuple(other)
        if self.ncols != len(other):
            raise DimensionError(f"matvec {self.shape} @ {len(other)}")
        return tuple(dot(r, other) for r in self.rows)

    def __rmatmul__(self, other):
        # row vector times matrix
        other = tuple(other)
        if len(other) != self.nrows:
            raise DimensionError(f"vecmat {len(other)} @ {self.shape}")
        return tuple(dot(other, self.col(j)) for j in range(self.ncols))

    def __neg__(self) -> "Matrix":
        return Matrix(((-x for x in r) for r in self.rows), ncols=self.ncols)

    def is_integral(self) -> bool:
        return all(is_integral(x) for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        return Matrix((self.rows[i] for i in idx), ncols=self.ncols)

    def select_cols(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix(((r[j] for j in idx) for r in self.rows), ncols=len(idx))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionError("hstack row mismatch")
        return Matrix((a + b for a, b in zip(self.rows, other.rows)), ncols=self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionError("vstack column mismatch")
        return Matrix(self.rows + other.rows, ncols=self.ncols)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]


def _bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    m = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1] if n else 1


def det_int(M: Matrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    if not M.is_square():
        raise DimensionError(f"determinant of non-square {M.shape}")
    if not M.is_integral():
        raise TypeError("det_int needs an integer matrix; use det_rational")
    return _bareiss([[int(x) for x in r] for r in M.rows])


def det_rational(M: Matrix) -> Rational:
    if not M.is_square():
        raise DimensionError(f"determinant of non-square {M.shape}")
    den = 1
    for r in M.rows:
        for x in r:
            if not is_integral(x):
                den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in r] for r in M.rows]
    return as_rational(Fraction(_bareiss(ints), den ** M.nrows))


def gram_det(P: Matrix, strict: bool = False) -> Rational:
    """det(P P^T). Zero means the rows of P are dependent.

    With ``strict`` a dependent row set raises instead of returning 0.
    """
    G = P @ P.T
    d = det_int(G) if G.is_integral() else det_rational(G)
    if d == 0 and strict:
        raise DependentRowsError("rows are linearly dependent (Gram determinant 0)")
    return d


def inverse_rational(M: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; integral entries are returned as ints."""
    if not M.is_square():
        raise DimensionError(f"inverse of non-square {M.shape}")
    n = M.nrows
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        if pv != 1:
            aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                ri, rc = aug[i], aug[c]
                aug[i] = [x - f * y for x, y in zip(ri, rc)]
    return Matrix((r[n:] for r in aug), ncols=n)


def solve_rational(M: Matrix, rhs: Sequence) -> tuple | None:
    """Solve M x = rhs for square M; None if M is singular."""
    n = M.nrows
    if not M.is_square() or len(rhs) != n:
        raise DimensionError("solve needs a square system")
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(M.rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        for i in range(c + 1, n):
            if aug[i][c] != 0:
                f = aug[i][c] / pv
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = aug[i][n] - sum(aug[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / aug[i][i]
    return vec(x)


# ------------------------------------------------------- roots and radicals

def iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for integers x >= 0, k >= 1."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    y = 1 << -(-x.bit_length() // k)  # upper bound
    while True:
        t = ((k - 1) * y + x // y ** (k - 1)) // k
        if t >= y:
            break
        y = t
    while y ** k > x:
        y -= 1
    while (y + 1) ** k <= x:
        y += 1
    return y


def exact_root(x: Rational, k: int) -> Rational | None:
    """x ** (1/k) if it is rational, else None (x >= 0)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("exact_root of a negative number")
    p = iroot(x.numerator, k)
    q = iroot(x.denominator, k)
    if p ** k == x.numerator and q ** k == x.denominator:
        return as_rational(Fraction(p, q))
    return None


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def cmp_roots(x: Rational, p: int, y: Rational, q: int) -> int:
    """Sign of x**(1/p) - y**(1/q) for positive rationals x, y; exact."""
    if x <= 0 or y <= 0 or p < 1 or q < 1:
        raise ValueError("cmp_roots needs positive bases and roots")
    return _sign(Fraction(x) ** q - Fraction(y) ** p)


def cmp_power_products(lhs: Sequence[tuple], rhs: Sequence[tuple]) -> int:
    """Sign of prod(b**e for b, e in lhs) - prod(... rhs).

    Bases are positive rationals and exponents arbitrary rationals. Both sides
    are raised to the lcm of exponent denominators, which keeps the comparison
    exact.
    """
    exps = [Fraction(e) for _, e in lhs] + [Fraction(e) for _, e in rhs]
    q = 1
    for e in exps:
        q = lcm(q, e.denominator)

    def side(factors):
        acc = Fraction(1)
        for b, e in factors:
            b = Fraction(b)
            if b <= 0:
                raise ValueError("power-product bases must be positive")
            acc *= b ** int(Fraction(e) * q)
        return acc

    return _sign(side(lhs) - side(rhs))


@dataclass(frozen=True)
class RadicalTerm:
    """coef * base ** (1/root), base > 0."""
    coef: Fraction
    base: Fraction
    root: int

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))
        object.__setattr__(self, "base", Fraction(self.base))
        if self.base <= 0:
            raise ValueError("radical base must be positive")
        if self.root < 1:
            raise ValueError("radical root must be >= 1")


@dataclass(frozen=True)
class RadicalExpr:
    """A finite sum of :class:`RadicalTerm`; the empty sum is zero."""
    terms: tuple = ()

    @classmethod
    def rational(cls, c: Rational) -> "RadicalExpr":
        return cls((RadicalTerm(c, 1, 1),)) if c != 0 else cls()

    @classmethod
    def root(cls, base: Rational, k: int, coef: Rational = 1) -> "RadicalExpr":
        if base == 0 or coef == 0:
            return cls()
        return cls((RadicalTerm(coef, base, k),))

    @classmethod
    def sqrt(cls, base: Rational, coef: Rational = 1) -> "RadicalExpr":
        return cls.root(base, 2, coef)

    def __add__(self, other) -> "RadicalExpr":
        if not isinstance(other, RadicalExpr):
            other = RadicalExpr.rational(as_rational(other))
        return RadicalExpr(self.terms + other.terms)

    __radd__ = __add__

    def scale(self, c: Rational) -> "RadicalExpr":
        return RadicalExpr(tuple(RadicalTerm(t.coef * c, t.base, t.root) for t in self.terms if c != 0))

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Closed interval [lo, hi] of width about len(terms) * 2**-bits containing the value."""
        lo = hi = Fraction(0)
        scale = 1 << bits
        for t in self.terms:
            b = t.base
            k = iroot((b.numerator << (bits * t.root)) // b.denominator, t.root)
            r_lo = Fraction(k, scale)
            r_hi = r_lo if r_lo ** t.root == b else Fraction(k + 1, scale)
            a, c = t.coef * r_lo, t.coef * r_hi
            lo += min(a, c)
            hi += max(a, c)
        return lo, hi

    def to_decimal_str(self, digits: int = 6) -> str:
        lo, hi = self.interval(64)
        return format_decimal((lo + hi) / 2, digits)


def _merge_terms(terms: Sequence[RadicalTerm]) -> tuple[Fraction, list[RadicalTerm]]:
    """Fold rational radicals into a constant and combine rationally dependent terms."""
    const = Fraction(0)
    rad: list[RadicalTerm] = []
    for t in terms:
        if t.coef == 0:
            continue
        r = exact_root(t.base, t.root)
        if r is not None:
            const += t.coef * r
            continue
        for i, s in enumerate(rad):
            # t.base^(1/t.root) / s.base^(1/s.root) rational?
            ratio = exact_root(t.base ** s.root / s.base ** t.root, t.root * s.root)
            if ratio is not None:
                rad[i] = RadicalTerm(s.coef + t.coef * ratio, s.base, s.root)
                break
        else:
            rad.append(t)
    return const, [t for t in rad if t.coef != 0]


def floor_radical(e: RadicalExpr, max_bits: int = 1 << 16) -> int:
    """Exact floor of a sum of radicals.

    Rationally resolvable terms are folded first; a single remaining radical is
    floored exactly with integer roots; otherwise the value is irrational and
    certified intervals are refined (precision doubling) until they separate.
    """
    const, rad = _merge_terms(e.terms)
    if not rad:
        return floor_q(const)
    if len(rad) == 1 and const == 0:
        t = rad[0]
        x = abs(t.coef) ** t.root * t.base
        k = iroot(floor_q(x), t.root)
        if t.coef > 0:
            return k
        return -k if Fraction(k) ** t.root == x else -(k + 1)
    expr = RadicalExpr(tuple(rad)) + const
    bits = 32
    while bits <= max_bits:
        lo, hi = expr.interval(bits)
        k = floor_q(lo)
        if hi < k + 1:
            return k
        bits *= 2
    raise RadicalSeparationError("could not certify the floor of a radical sum")


def format_decimal(x: Rational, digits: int = 6) -> str:
    """Display-only rendering with ``digits`` significant digits."""
    from decimal import Decimal, localcontext

    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "g") if d != 0 else "0"


def sqrt_decimal_str(x: Rational, digits: int = 6) -> str:
    """Display-only rendering of sqrt(x)."""
    return RadicalExpr.sqrt(x).to_decimal_str(digits) if x != 0 else "0"


def gcd_all(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
