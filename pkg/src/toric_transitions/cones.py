"""
Polyhedral cones in both representations.

Conversion between generators and inequalities uses the double description
method on the pointed part of the cone after splitting off the lineality
space. The sizes met here are small, so clarity wins over speed.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionLimitExceeded
from .exact import (
    dot,
    fvec,
    inverse,
    independent_subset,
    matvec,
    nullspace,
    primitive,
    rank,
    rref,
    transpose,
)

MAX_DIMENSION = 12
MAX_GENERATORS = 64


def _pointed_extreme_rays(B: Sequence[Sequence[Fraction]], k: int) -> list:
    """Extreme rays of {t : B t >= 0} where B has full column rank k."""
    start = independent_subset(B, k)
    BK = [B[i] for i in start]
    inv = inverse(BK)
    rays = [tuple(inv[r][c] for r in range(k)) for c in range(k)]
    processed = list(start)
    zeros = [frozenset(i for i in processed if dot(B[i], ray) == 0) for ray in rays]
    for i in range(len(B)):
        if i in start:
            continue
        vals = [dot(B[i], ray) for ray in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zer = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos + zer]
        new_zeros = [zeros[j] for j in pos] + [zeros[j] | {i} for j in zer]
        for p in pos if k > 1 else ():
            for q in neg:
                common = zeros[p] & zeros[q]
                if len(common) < k - 2:
                    continue
                if k >= 2 and rank([B[c] for c in common], k) != k - 2:
                    continue
                r = tuple(vals[p] * a - vals[q] * b for a, b in zip(rays[q], rays[p]))
                r = tuple(Fraction(x) for x in primitive(r))
                new_rays.append(r)
                new_zeros.append(frozenset(c for c in processed + [i] if dot(B[c], r) == 0))
        processed.append(i)
        rays, zeros = new_rays, new_zeros
    unique = sorted({primitive(r) for r in rays})
    return unique


def h_to_v(inequalities: Sequence[Sequence], equations: Sequence[Sequence], dim: int):
    """
    Generators of {y : A y >= 0, E y = 0}.

    Returns ``(rays, lineality)``: primitive extreme rays of the pointed part
    (taken orthogonal to the lineality space) and a basis of the lineality
    space.
    """
    if dim > MAX_DIMENSION:
        raise DimensionLimitExceeded(f"ambient dimension {dim} exceeds {MAX_DIMENSION}")
    A = [fvec(a) for a in inequalities]
    E = [fvec(e) for e in equations]
    V = nullspace(E, dim) if E else tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim))
    if not V:
        return [], []
    Vt = transpose(V)  # dim x len(V), columns are basis vectors
    Ap = [tuple(dot(a, col) for col in V) for a in A]  # constraints in z coordinates
    kv = len(V)
    lin_z = nullspace(Ap, kv) if Ap else tuple(tuple(Fraction(int(i == j)) for j in range(kv)) for i in range(kv))
    lineality = [primitive(matvec(Vt, z)) for z in lin_z]
    W, _ = rref(Ap, kv) if Ap else ((), ())
    if not W:
        return [], _canonical_subspace(lineality, dim)
    k = len(W)
    B = [tuple(dot(a, w) for w in W) for a in Ap]
    rays_t = _pointed_extreme_rays(B, k)
    rays = []
    for t in rays_t:
        z = tuple(sum(t[j] * W[j][c] for j in range(k)) for c in range(kv))
        rays.append(primitive(matvec(Vt, z)))
    return sorted(set(rays)), _canonical_subspace(lineality, dim)


def _canonical_subspace(vectors: Sequence[Sequence], dim: int) -> list:
    R, _ = rref(vectors, dim) if vectors else ((), ())
    return [primitive(r) for r in R]


def v_to_h(generators: Sequence[Sequence], dim: int):
    """
    Facet normals and equations of the cone generated by ``generators``.

    Normals are primitive integer vectors lying in the span of the cone, so
    they are canonical. Equations form a basis of the orthogonal complement
    of that span.
    """
    if len(generators) > MAX_GENERATORS:
        raise DimensionLimitExceeded(f"{len(generators)} generators exceed {MAX_GENERATORS}")
    gens = [fvec(g) for g in generators if any(x != 0 for x in g)]
    if not gens:
        return [], _canonical_subspace([tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)], dim)
    return h_to_v(gens, [], dim)


def cone_facets(generators: Sequence[Sequence]) -> list:
    """Irredundant inward facet normals of the cone spanned by ``generators``."""
    dim = len(generators[0])
    return v_to_h(generators, dim)[0]


@dataclass(frozen=True)
class PolyCone:
    """
    A closed polyhedral cone carrying both of its descriptions.

    **Fields:**
    - ``dim``: ambient dimension.
    - ``rays``: primitive extreme rays of the pointed part.
    - ``lineality``: basis of the lineality space.
    - ``inequalities``: inward facet normals, canonical (they lie in the span).
    - ``equations``: basis of the orthogonal complement of the span.

    Two cones are equal exactly when their canonical inequalities and
    equations agree, so ``==`` compares cones rather than presentations.
    """

    dim: int
    rays: tuple
    lineality: tuple
    inequalities: tuple
    equations: tuple

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence], dim: int) -> "PolyCone":
        ineqs, eqs = v_to_h(list(generators), dim)
        rays, lin = h_to_v(ineqs, eqs, dim)
        return cls(dim, tuple(rays), tuple(lin), tuple(sorted(ineqs)), tuple(eqs))

    @classmethod
    def from_inequalities(cls, inequalities: Sequence[Sequence], equations: Sequence[Sequence], dim: int) -> "PolyCone":
        rays, lin = h_to_v(list(inequalities), list(equations), dim)
        gens = list(rays) + list(lin) + [tuple(-x for x in v) for v in lin]
        return cls.from_generators(gens, dim)

    def __eq__(self, other):
        if not isinstance(other, PolyCone):
            return NotImplemented
        return (self.dim, self.inequalities, self.equations) == (other.dim, other.inequalities, other.equations)

    def __hash__(self):
        return hash((self.dim, self.inequalities, self.equations))

    @property
    def generators(self) -> tuple:
        return self.rays + self.lineality + tuple(tuple(-x for x in v) for v in self.lineality)

    @property
    def cone_dimension(self) -> int:
        return self.dim - len(self.equations)

    def contains(self, v: Sequence) -> bool:
        return all(dot(n, v) >= 0 for n in self.inequalities) and all(dot(e, v) == 0 for e in self.equations)

    def contains_relative_interior(self, v: Sequence) -> bool:
        return all(dot(n, v) > 0 for n in self.inequalities) and all(dot(e, v) == 0 for e in self.equations)

    def dual(self) -> "PolyCone":
        """The dual cone {y : y·x >= 0 for all x in the cone}."""
        return PolyCone.from_generators(list(self.inequalities) + list(self.equations) + [tuple(-x for x in e) for e in self.equations], self.dim)

    def dual_within(self, equations: Sequence[Sequence]) -> "PolyCone":
        """Dual cone intersected with the subspace cut out by ``equations``."""
        ineqs = list(self.generators)
        return PolyCone.from_inequalities(ineqs, list(equations), self.dim)

    def intersect(self, other: "PolyCone") -> "PolyCone":
        return PolyCone.from_inequalities(
            list(self.inequalities) + list(other.inequalities),
            list(self.equations) + list(other.equations),
            self.dim,
        )

    def face(self, normal: Sequence) -> "PolyCone":
        """The face cut out by a supporting normal."""
        return PolyCone.from_inequalities(list(self.inequalities), list(self.equations) + [tuple(normal)], self.dim)

    def span_rank(self) -> int:
        return rank(self.generators, self.dim) if self.generators else 0
