"""Exact rational simplex with Bland's rule, and cone-membership tests built on it."""

from fractions import Fraction
from typing import Optional, Sequence

from .errors import EmptyGeneratorSet
from .exact import fvec, is_zero

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(T, basis, row, col):
    pv = T[row][col]
    T[row] = [x / pv for x in T[row]]
    for i in range(len(T)):
        if i != row and T[i][col] != 0:
            f = T[i][col]
            T[i] = [a - f * b for a, b in zip(T[i], T[row])]
    basis[row] = col


def _run(T, basis, obj, allowed):
    """Maximize obj·x over the tableau in place. Returns OPTIMAL or UNBOUNDED."""
    ncols = len(T[0]) - 1
    while True:
        # reduced costs c_j - c_B B^-1 A_j
        entering = None
        for j in range(ncols):
            if j not in allowed or j in basis:
                continue
            rc = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(len(T)))
            if rc > 0:
                entering = j
                break
        if entering is None:
            return OPTIMAL
        best = None
        for i in range(len(T)):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, basis, best[1], entering)


def linprog(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence):
    """
    Maximize ``c·x`` subject to ``A_eq x = b_eq`` and ``x >= 0`` over Q.

    Two-phase simplex with Bland's rule. Returns ``(status, x, value)`` where
    ``x`` and ``value`` are ``None`` unless the status is optimal.
    """
    c = fvec(c)
    n = len(c)
    rows = []
    for a, b in zip(A_eq, b_eq):
        a, b = list(fvec(a)), Fraction(b)
        if b < 0:
            a, b = [-x for x in a], -b
        rows.append((a, b))
    m = len(rows)
    # phase 1: artificials n..n+m-1
    T = [a + [Fraction(int(i == k)) for k in range(m)] + [b] for i, (a, b) in enumerate(rows)]
    basis = [n + i for i in range(m)]
    obj1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _run(T, basis, obj1, set(range(n + m)))
    if any(T[i][-1] != 0 for i in range(m) if basis[i] >= n):
        return INFEASIBLE, None, None
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [r[:n] + [r[-1]] for r in T]
    status = _run(T, basis, list(c), set(range(n)))
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][-1]
    return OPTIMAL, tuple(x), sum(ci * xi for ci, xi in zip(c, x))


def strict_cone_feasibility(vectors: Sequence[Sequence], target: Sequence):
    """
    Decide whether ``target = Σ a_i vectors[i]`` with every ``a_i > 0``.

    The slack ``s`` with ``a_i >= s`` is maximized (capped at 1, which
    stands in for an unbounded optimum); the answer is yes iff the optimum
    is positive. Returns ``(feasible, witness)``.

    An empty generator list represents the zero cone: it is reported
    infeasible for a nonzero target and feasible (empty witness) for zero.
    """
    target = fvec(target)
    vecs = [fvec(v) for v in vectors]
    if not vecs:
        return (True, ()) if is_zero(target) else (False, None)
    p = len(vecs)
    dim = len(target)
    # variables: s_plus, s_minus, y_1..y_p, cap slack w   with a_i = s + y_i
    A, b = [], []
    for c in range(dim):
        col_sum = sum(v[c] for v in vecs)
        A.append([col_sum, -col_sum] + [v[c] for v in vecs] + [0])
        b.append(target[c])
    A.append([1, 0] + [0] * p + [1])
    b.append(1)
    obj = [1, -1] + [0] * p + [0]
    status, x, value = linprog(obj, A, b)
    if status != OPTIMAL or value <= 0:
        return False, None
    s = x[0] - x[1]
    return True, tuple(s + x[2 + i] for i in range(p))


def require_generators(vectors: Sequence[Sequence], target: Sequence):
    """Raise :class:`EmptyGeneratorSet` for an empty generator list against a nonzero target."""
    if not vectors and not is_zero(target):
        raise EmptyGeneratorSet("no generators to express a nonzero target")


def cone_contains(vectors: Sequence[Sequence], target: Sequence) -> Optional[tuple]:
    """Nonnegative coefficients expressing ``target`` in the closed cone, or None."""
    target = fvec(target)
    vecs = [fvec(v) for v in vectors]
    if not vecs:
        return () if is_zero(target) else None
    A = [[v[c] for v in vecs] for c in range(len(target))]
    status, x, _ = linprog([0] * len(vecs), A, target)
    return x if status == OPTIMAL else None
