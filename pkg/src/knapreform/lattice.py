"""Lattice primitives: exact Gram-Schmidt, LLL with unimodular tracking,
nullspace lattices of a single row, and completeness certificates.

Bases are the *columns* of a :class:`~knapreform.exact.Matrix`. LLL uses
Schrijver's conditions: |mu_ij| <= 1/2 and ||b*_i||^2 <= 2 ||b*_{i+1}||^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence, Union

from .errors import DependentColumnsError, InstanceError
from .exact import (
    Matrix,
    Rational,
    as_rational,
    dot,
    gcd_all,
    gram_det,
    inverse_rational,
    is_integral,
    round_half_away,
    vsub,
    vscale,
)


@dataclass(frozen=True)
class GSO:
    """Gram-Schmidt data: ``bstar[i]``, ``mu[i][j]`` (j < i), ``norms_sq[i]``."""
    bstar: tuple
    mu: tuple
    norms_sq: tuple


def gram_schmidt(B: Matrix) -> GSO:
    cols = B.columns()
    bstar: list[tuple] = []
    norms: list[Fraction] = []
    mu: list[tuple] = []
    for i, b in enumerate(cols):
        row = []
        v = tuple(Fraction(x) for x in b)
        for j in range(i):
            m = Fraction(dot(b, bstar[j])) / norms[j]
            row.append(as_rational(m))
            v = tuple(x - m * y for x, y in zip(v, bstar[j]))
        nsq = Fraction(dot(v, v))
        if nsq == 0:
            raise DependentColumnsError(i)
        bstar.append(tuple(as_rational(x) for x in v))
        norms.append(nsq)
        mu.append(tuple(row))
    return GSO(tuple(bstar), tuple(mu), tuple(as_rational(x) for x in norms))


@dataclass(frozen=True)
class LLLCheck:
    reduced: bool
    violation: str = ""

    def __bool__(self) -> bool:
        return self.reduced


def is_lll_reduced(B: Matrix) -> LLLCheck:
    g = gram_schmidt(B)
    n = B.ncols
    for i in range(1, n):
        for j in range(i):
            if abs(g.mu[i][j]) > Fraction(1, 2):
                return LLLCheck(False, f"size condition fails: mu[{i + 1}][{j + 1}] = {g.mu[i][j]}")
    for i in range(n - 1):
        if g.norms_sq[i] > 2 * g.norms_sq[i + 1]:
            return LLLCheck(False, f"exchange condition fails at i = {i + 1}")
    return LLLCheck(True)


@dataclass(frozen=True)
class ReductionResult:
    """``basis @ U == B_red`` (after scaling rational input by ``scale``)."""
    basis: Matrix
    B_red: Matrix
    U: Matrix
    U_inv: Matrix
    scale: int = 1
    swaps: int = 0


def lll_reduce(B: Matrix) -> ReductionResult:
    """LLL-reduce the columns of B exactly, tracking U and U^-1.

    Integral variant of the algorithm (all Gram-Schmidt data kept as integers
    d_i and lambda_ij = d_j mu_ij). Rational input is multiplied by the common
    denominator first; ``B_red`` is then divided back so that B @ U == B_red.
    """
    scale = 1
    for r in B.rows:
        for x in r:
            if not is_integral(x):
                scale = lcm(scale, x.denominator)
    n = B.ncols
    b = [[int(x * scale) for x in c] for c in B.columns()]
    U = [[int(i == j) for j in range(n)] for i in range(n)]        # U[col] = column of U
    Ui = [[int(i == j) for j in range(n)] for i in range(n)]       # Ui[row] = row of U^-1

    # 1-based d, lam as in the classical integral formulation
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]

    def ip(x, y):
        return sum(p * q for p, q in zip(x, y))

    for k in range(1, n + 1):
        for j in range(1, k + 1):
            u = ip(b[k - 1], b[j - 1])
            for i in range(1, j):
                u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DependentColumnsError(k - 1)
                d[k] = u

    def redi(k, l):
        if 2 * abs(lam[k][l]) <= d[l]:
            return
        q = round_half_away(Fraction(lam[k][l], d[l]))
        bk, bl = b[k - 1], b[l - 1]
        b[k - 1] = [x - q * y for x, y in zip(bk, bl)]
        U[k - 1] = [x - q * y for x, y in zip(U[k - 1], U[l - 1])]
        Ui[l - 1] = [x + q * y for x, y in zip(Ui[l - 1], Ui[k - 1])]
        lam[k][l] -= q * d[l]
        for i in range(1, l):
            lam[k][i] -= q * lam[l][i]

    def swapi(k):
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        U[k - 1], U[k - 2] = U[k - 2], U[k - 1]
        Ui[k - 1], Ui[k - 2] = Ui[k - 2], Ui[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        Bn = (d[k - 2] * d[k] + lk * lk) // d[k - 1]
        for i in range(k + 1, n + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lk * t) // d[k - 1]
            lam[i][k - 1] = (Bn * t + lk * lam[i][k]) // d[k]
        d[k - 1] = Bn

    swaps = 0
    k = 2
    while k <= n:
        redi(k, k - 1)
        if d[k - 1] * d[k - 1] > 2 * d[k] * d[k - 2]:
            swapi(k)
            swaps += 1
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                redi(k, l)
            k += 1

    B_red = Matrix.from_columns([vscale(Fraction(1, scale), c) for c in b], nrows=B.nrows)
    return ReductionResult(
        basis=B,
        B_red=B_red,
        U=Matrix.from_columns(U, nrows=n),
        U_inv=Matrix(Ui, ncols=n),
        scale=scale,
        swaps=swaps,
    )


# ------------------------------------------------------------ single-row lattices

def xgcd(x: int, y: int) -> tuple[int, int, int]:
    """(g, s, t) with s x + t y = g = gcd(x, y) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def unimodular_row_reduction(a: Sequence[int]) -> tuple[Matrix, int]:
    """Unimodular W with a @ W = (g, 0, ..., 0), g = gcd(a) >= 0."""
    n = len(a)
    c = [int(x) for x in a]
    W = [[int(i == j) for j in range(n)] for i in range(n)]   # W[col]
    for j in range(1, n):
        x, y = c[0], c[j]
        if y == 0:
            continue
        g, s, t = xgcd(x, y)
        w0, wj = W[0], W[j]
        W[0] = [s * p + t * q for p, q in zip(w0, wj)]
        W[j] = [(-y // g) * p + (x // g) * q for p, q in zip(w0, wj)]
        c[0], c[j] = g, 0
    if n and c[0] < 0:
        W[0] = [-x for x in W[0]]
        c[0] = -c[0]
    return Matrix.from_columns(W, nrows=n), (c[0] if n else 0)


def nullspace_basis(a: Sequence[int]) -> Matrix:
    """Columns generating N(a) = {x integral : a x = 0}; needs gcd(a) = 1."""
    if gcd_all(a) != 1:
        raise InstanceError("weights not coprime")
    W, _ = unimodular_row_reduction(a)
    return W.select_cols(range(1, len(a)))


def nearest_plane(x: Sequence, V: Matrix) -> tuple:
    """Shorten x by an integral combination of V's columns (one Babai pass)."""
    if V.ncols == 0:
        return tuple(x)
    g = gram_schmidt(V)
    cols = V.columns()
    y = tuple(x)
    for j in range(V.ncols - 1, -1, -1):
        c = round_half_away(Fraction(dot(y, g.bstar[j])) / g.norms_sq[j])
        if c:
            y = vsub(y, vscale(c, cols[j]))
    return y


def coeff_vector(a: Sequence[int], target: int, against: Matrix | None = None) -> tuple:
    """Integral b with a @ b == target, optionally shortened against ``against``."""
    W, g = unimodular_row_reduction(a)
    if g == 0:
        if target != 0:
            raise InstanceError("a is zero; no solution for a nonzero target")
        return tuple(0 for _ in a)
    if target % g:
        raise InstanceError(f"gcd {g} of weights does not divide {target}")
    b = vscale(target // g, W.col(0))
    if against is not None:
        b = nearest_plane(b, against)
    return b


# -------------------------------------------------------- completeness / orthogonal

@dataclass(frozen=True)
class Certificate:
    ok: bool
    Z: Matrix | None
    det_sq: Rational            # det(L)^2 = det(V^T V)
    det_perp_sq: Rational | None  # det(L^perp)^2 from the last n-k rows of Z

    def __bool__(self) -> bool:
        return self.ok


def completeness_certificate(V: Matrix) -> Certificate:
    """Unimodular Z with Z V = [I_k; 0] if lattice(V) is complete.

    The last n-k rows of Z then generate the orthogonal lattice, and we check
    det L^perp == det L on them.
    """
    if not V.is_integral():
        raise InstanceError("completeness certificate needs an integral basis")
    n, k = V.shape
    A = [[int(x) for x in r] for r in V.rows]
    Z = [[int(i == j) for j in range(n)] for i in range(n)]
    det_sq = gram_det(V.T)

    def combine(r1, r2, s, t, u, w):
        a1, a2 = A[r1], A[r2]
        A[r1] = [s * x + t * y for x, y in zip(a1, a2)]
        A[r2] = [u * x + w * y for x, y in zip(a1, a2)]
        z1, z2 = Z[r1], Z[r2]
        Z[r1] = [s * x + t * y for x, y in zip(z1, z2)]
        Z[r2] = [u * x + w * y for x, y in zip(z1, z2)]

    for j in range(k):
        for i in range(j + 1, n):
            x, y = A[j][j], A[i][j]
            if y == 0:
                continue
            g, s, t = xgcd(x, y)
            combine(j, i, s, t, -y // g, x // g)
        if A[j][j] == 0:
            raise DependentColumnsError(j)
        if A[j][j] < 0:
            A[j] = [-x for x in A[j]]
            Z[j] = [-x for x in Z[j]]
        if A[j][j] != 1:
            return Certificate(False, None, det_sq, None)
    for j in range(k - 1, -1, -1):
        for i in range(j):
            q = A[i][j]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[j])]
                Z[i] = [x - q * y for x, y in zip(Z[i], Z[j])]
    Zm = Matrix(Z, ncols=n)
    perp = Zm.select_rows(range(k, n))
    det_perp_sq = gram_det(perp) if perp.nrows else 1
    return Certificate(det_perp_sq == det_sq, Zm, det_sq, det_perp_sq)


def sublattice_det_check(R: Union[ReductionResult, Matrix], ell: int) -> bool:
    """det L_ell <= 2^(ell (n-ell)/4) (det L)^(ell/n), compared exactly.

    With D_ell, D the squared determinants the test is
    D_ell^(2n) <= 2^(ell (n-ell) n) D^(2 ell).
    """
    B = R.B_red if isinstance(R, ReductionResult) else R
    n = B.ncols
    if not 1 <= ell <= n:
        raise ValueError(f"ell must lie in 1..{n}")
    D_ell = Fraction(gram_det(B.select_cols(range(ell)).T))
    D = Fraction(gram_det(B.T))
    return D_ell ** (2 * n) <= Fraction(2) ** (ell * (n - ell) * n) * D ** (2 * ell)


def same_lattice(B1: Matrix, B2: Matrix) -> bool:
    """Exactly decide whether two bases (columns) generate the same lattice."""
    if B1.shape != B2.shape:
        return False

    def expresses(X: Matrix, Y: Matrix) -> bool:
        # columns of Y as integral combinations of X's columns
        G = inverse_rational(X.T @ X)
        C = G @ (X.T @ Y)
        return C.is_integral() and X @ C == Y

    return expresses(B1, B2) and expresses(B2, B1)
