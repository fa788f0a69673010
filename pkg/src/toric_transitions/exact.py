"""
Exact integer and rational linear algebra.

Matrices are plain tuples of row tuples. Integer matrices hold ``int``
entries and rational ones hold :class:`fractions.Fraction`. Nothing here
touches floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import NotFiniteIndex

Vector = tuple
Matrix = tuple


def as_fraction(x) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fvec(v: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in v)


def fmat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(fvec(r) for r in rows)


def imat(rows: Iterable[Iterable[int]]) -> Matrix:
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integral entry {x}")
                x = x.numerator
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(M: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fv = fvec(v)
    den = lcm(*(x.denominator for x in fv)) if fv else 1
    ints = [int(x * den) for x in fv]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


# ----------------------------------------------------------------------------
# Row reduction over Q


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None, column_order: Optional[Sequence[int]] = None):
    """
    Reduced row echelon form over Q.

    ``column_order`` fixes the order in which columns are tried as pivots,
    which lets callers choose which coordinates get eliminated. Returns the
    nonzero reduced rows and the pivot column of each.
    """
    R = [list(fvec(r)) for r in rows]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    order = list(range(ncols)) if column_order is None else list(column_order)
    pivots = []
    top = 0
    for c in order:
        if top == len(R):
            break
        p = next((i for i in range(top, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[top], R[p] = R[p], R[top]
        piv = R[top][c]
        if piv != 1:
            R[top] = [x / piv for x in R[top]]
        for i in range(len(R)):
            if i != top and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[top])]
        pivots.append(c)
        top += 1
    return tuple(tuple(r) for r in R[:top]), tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of {x : rows·x = 0}, one basis vector per free column."""
    R, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(R, piv):
            x[p] = -r[f]
        basis.append(tuple(x))
    return tuple(basis)


def solve(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """One solution of A x = b (free variables set to zero), or None if inconsistent."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    aug = [tuple(r) + (bi,) for r, bi in zip(A, b)]
    R, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(R, piv):
        x[p] = r[ncols]
    return tuple(x)


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    aug = [tuple(r) + e for r, e in zip(fmat(A), identity(n))]
    R, piv = rref(aug, 2 * n)
    if tuple(piv) != tuple(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in R)


def independent_subset(vectors: Sequence[Sequence], ncols: Optional[int] = None, start: Sequence[Sequence] = ()) -> list:
    """Indices of the lexicographically first maximal independent subset (greedy)."""
    chosen = []
    basis = [tuple(v) for v in start]
    r = rank(basis, ncols) if basis else 0
    for i, v in enumerate(vectors):
        trial = basis + [tuple(v)]
        rr = rank(trial, ncols if ncols is not None else len(v))
        if rr > r:
            basis, r = trial, rr
            chosen.append(i)
    return chosen


def determinant(A: Sequence[Sequence]) -> Fraction:
    M = [list(fvec(r)) for r in A]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def same_span(A: Sequence[Sequence], B: Sequence[Sequence], ncols: int) -> bool:
    return rref(A, ncols)[0] == rref(B, ncols)[0]


# ----------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """
    Smith normal form ``M = U·S·V``.

    ``L`` and ``R`` are the inverses of ``U`` and ``V``, so ``L·M·R = S``.
    The diagonal of ``S`` is nonnegative and each entry divides the next.
    """

    U: Matrix
    S: Matrix
    V: Matrix
    L: Matrix
    R: Matrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0)))


def smith_normal_form(M: Sequence[Sequence[int]]) -> SnfResult:
    """
    Smith normal form of an integer matrix by elementary row and column moves.

    :param M: integer matrix given as a sequence of rows
    :return: an :class:`SnfResult` with unimodular ``U``, ``V`` and ``M = U·S·V``
    """
    A = [list(r) for r in imat(M)]
    m = len(A)
    n = len(A[0]) if m else 0
    L = [list(r) for r in identity(m)]
    Linv = [list(r) for r in identity(m)]
    R = [list(r) for r in identity(n)]
    Rinv = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]
        for row in Linv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]
        Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    def add_row(target, source, q):
        # row_target += q * row_source
        A[target] = [a + q * b for a, b in zip(A[target], A[source])]
        L[target] = [a + q * b for a, b in zip(L[target], L[source])]
        for row in Linv:
            row[source] -= q * row[target]

    def add_col(target, source, q):
        # col_target += q * col_source
        for row in A:
            row[target] += q * row[source]
        for row in R:
            row[target] += q * row[source]
        Rinv[source] = [a - q * b for a, b in zip(Rinv[source], Rinv[target])]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        L[i] = [-a for a in L[i]]
        for row in Linv:
            row[i] = -row[i]

    def nearest(a, b):
        q, r = divmod(a, b)
        return q + 1 if 2 * r > abs(b) or (2 * r == abs(b) and b < 0) else q

    t = 0
    while t < min(m, n):
        while True:
            # smallest entry of the remaining block becomes the pivot; keeps growth in check
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
            if not entries:
                break
            _, i0, j0 = min(entries)
            swap_rows(t, i0)
            swap_cols(t, j0)
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    add_row(i, t, -nearest(A[i][t], p))
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    add_col(j, t, -nearest(A[t][j], p))
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p != 0), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if not any(A[i][j] for i in range(t, m) for j in range(t, n)):
            break
        if A[t][t] < 0:
            negate_row(t)
        t += 1

    as_t = lambda X: tuple(tuple(r) for r in X)
    return SnfResult(U=as_t(Linv), S=as_t(A), V=as_t(Rinv), L=as_t(L), R=as_t(R))


def cokernel_presentation(M: Sequence[Sequence[int]]):
    """
    Cokernel of the column map ``Z^cols -> Z^rows`` given by ``M``.

    Returns ``(free_rank, torsion_factors, projection)``. The projection has
    one row per free coordinate followed by one row per torsion factor; the
    torsion rows are meant to be read modulo the matching factor.
    """
    M = imat(M)
    rows = len(M)
    snf = smith_normal_form(M)
    diag = list(snf.diagonal) + [0] * (rows - len(snf.diagonal))
    free_rows = [snf.L[i] for i in range(rows) if diag[i] == 0]
    torsion = [(diag[i], snf.L[i]) for i in range(rows) if diag[i] > 1]
    projection = tuple(free_rows) + tuple(r for _, r in torsion)
    return len(free_rows), tuple(d for d, _ in torsion), projection


def overlattice_cosets(M: Sequence[Sequence[int]]) -> list:
    """
    Representatives of {ν : M·ν integral} modulo Z^cols with coordinates in [0, 1).

    The rows of ``M`` must span Q^cols, otherwise the quotient is infinite.
    """
    M = imat(M)
    ncols = len(M[0]) if M else 0
    if rank(M, ncols) < ncols:
        raise NotFiniteIndex("rows do not span the ambient space")
    snf = smith_normal_form(M)
    diag = snf.diagonal
    reps = set()

    def rec(i, mu):
        if i == ncols:
            nu = matvec(snf.R, mu)
            reps.add(tuple(frac_part(x) for x in nu))
            return
        for j in range(diag[i]):
            rec(i + 1, mu + (Fraction(j, diag[i]),))

    rec(0, ())
    return sorted(reps)
