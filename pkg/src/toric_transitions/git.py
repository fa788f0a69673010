"""
GIT data for abelian quotients of affine space.

A presentation is a list of integer characters ``D_1, ..., D_m`` of a rank
``r`` torus together with a rational stability vector ``ω``. An index set
``I`` is an *anticone* when ``ω`` lies in the open cone spanned by the
``D_i`` with ``i`` in ``I``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Optional, Sequence

from .cones import PolyCone
from .errors import ExtendedVectorOutsideSupport, NotUpwardClosed, ValidationFailure
from .exact import (
    as_fraction,
    dot,
    fvec,
    independent_subset,
    rank,
    solve,
    transpose,
    vsub,
)
from .lp import cone_contains, strict_cone_feasibility


@lru_cache(maxsize=1 << 16)
def _strict_anticone(vectors: tuple, target: tuple) -> bool:
    # shared across presentations with equal data
    return strict_cone_feasibility(vectors, target)[0]


@dataclass(frozen=True)
class GitPresentation:
    """
    Characters ``D_i`` in the lattice dual to ``L = Z^r`` and a stability vector.

    **Arguments:**
    - ``characters``: ``m`` integer vectors of length ``r``.
    - ``stability``: rational vector ``ω`` of length ``r``.
    - ``labels``: optional names, one per character.

    Instances are immutable; derived data such as the anticone family is
    cached on first use.
    """

    characters: tuple
    stability: tuple
    labels: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, init=False, compare=False, repr=False, hash=False)

    def __post_init__(self):
        chars = tuple(tuple(int(x) for x in c) for c in self.characters)
        omega = fvec(self.stability)
        object.__setattr__(self, "characters", chars)
        object.__setattr__(self, "stability", omega)
        r = len(omega)
        for i, c in enumerate(chars):
            if len(c) != r:
                raise ValueError(f"character {i} has length {len(c)}, expected {r}")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"D{i + 1}" for i in range(len(chars))))
        else:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != len(chars):
                raise ValueError("one label per character is required")
            object.__setattr__(self, "labels", labels)

    @property
    def torus_rank(self) -> int:
        return len(self.stability)

    @property
    def character_count(self) -> int:
        return len(self.characters)

    def with_stability(self, omega: Sequence) -> "GitPresentation":
        return GitPresentation(self.characters, tuple(as_fraction(x) for x in omega), self.labels)

    def restrict(self, indices: Sequence[int]) -> "GitPresentation":
        """Presentation on the characters ``indices`` with the same stability."""
        idx = tuple(indices)
        return GitPresentation(tuple(self.characters[i] for i in idx), self.stability, tuple(self.labels[i] for i in idx))

    def is_strict_anticone(self, indices) -> bool:
        key = ("anticone", frozenset(indices))
        if key not in self._cache:
            vecs = tuple(self.characters[i] for i in sorted(indices))
            self._cache[key] = _strict_anticone(vecs, self.stability)
        return self._cache[key]

    @cached_property
    def minimal_anticones(self) -> tuple:
        """Inclusion-minimal anticones by a subset scan that skips supersets of hits."""
        m = self.character_count
        found = []
        for size in range(m + 1):
            for combo in combinations(range(m), size):
                s = frozenset(combo)
                if any(j <= s for j in found):
                    continue
                if self.is_strict_anticone(s):
                    found.append(s)
        return tuple(tuple(sorted(j)) for j in sorted(found, key=lambda j: (len(j), sorted(j))))


@dataclass(frozen=True)
class AnticoneFamily:
    """The anticones of a presentation, stored through their minimal members."""

    minimal_anticones: tuple
    owner: GitPresentation

    def contains(self, indices) -> bool:
        s = set(indices)
        return any(set(j) <= s for j in self.minimal_anticones)

    __contains__ = contains

    @property
    def intersection(self) -> frozenset:
        if not self.minimal_anticones:
            return frozenset()
        out = set(self.minimal_anticones[0])
        for j in self.minimal_anticones[1:]:
            out &= set(j)
        return frozenset(out)


def _upward_failures(P: GitPresentation) -> list:
    m = P.character_count
    bad = []
    if P.minimal_anticones and not P.is_strict_anticone(range(m)):
        bad.append(tuple(range(m)))
    for j in P.minimal_anticones:
        for x in range(m):
            if x in j:
                continue
            sup = tuple(sorted(set(j) | {x}))
            if not P.is_strict_anticone(sup):
                bad.append(sup)
    return bad


def anticones(P: GitPresentation) -> AnticoneFamily:
    """
    Minimal anticones of ``P``.

    Upward closure is certified on every one-element extension of each
    minimal anticone and on the full index set; a failure means ``ω`` sits
    on a wall.
    """
    bad = _upward_failures(P)
    if bad:
        raise NotUpwardClosed(f"superset {list(bad[0])} of an anticone is not an anticone")
    return AnticoneFamily(P.minimal_anticones, P)


def extended_set(P: GitPresentation) -> frozenset:
    """Indices lying in every anticone."""
    return AnticoneFamily(P.minimal_anticones, P).intersection


def character_matrix(P: GitPresentation) -> tuple:
    return P.characters


def free_ray_images(P: GitPresentation):
    """Cokernel data of ``L -> Z^m``: ``(n, torsion, projection, free rays)``."""
    from .exact import cokernel_presentation

    key = "cokernel"
    if key not in P._cache:
        n, torsion, proj = cokernel_presentation(P.characters)
        free = proj[:n]
        rays = tuple(tuple(free[a][i] for a in range(n)) for i in range(P.character_count))
        P._cache[key] = (n, torsion, proj, rays)
    return P._cache[key]


@dataclass(frozen=True)
class ValidationReport:
    all_indices_anticone: bool
    full_dimensional: bool
    simplicial: bool
    upward_closed: bool
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.all_indices_anticone and self.full_dimensional and self.simplicial and self.upward_closed

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "all_indices_anticone": self.all_indices_anticone,
            "full_dimensional": self.full_dimensional,
            "simplicial": self.simplicial,
            "upward_closed": self.upward_closed,
            "failures": list(self.failures),
        }


def validate(P: GitPresentation) -> ValidationReport:
    """Check the standing assumptions on ``P`` and report every failure found."""
    key = "validation"
    if key in P._cache:
        return P._cache[key]
    m, r = P.character_count, P.torus_rank
    failures = []
    full = P.is_strict_anticone(range(m))
    if not full:
        failures.append("the full index set is not an anticone")
    fulldim = True
    for j in P.minimal_anticones:
        if rank([P.characters[i] for i in j], r) < r:
            fulldim = False
            failures.append(f"anticone {list(j)} spans a cone of dimension below {r}")
    upward = not _upward_failures(P)
    if not upward:
        failures.append("anticone family is not upward closed")
    simplicial = True
    if P.minimal_anticones:
        S = extended_set(P)
        n, _, _, rays = free_ray_images(P)
        for j in P.minimal_anticones:
            idx = [i for i in range(m) if i not in j and i not in S]
            if idx and rank([rays[i] for i in idx], n) < len(idx):
                simplicial = False
                failures.append(f"cone on {idx} is not simplicial")
    else:
        failures.append("no anticones")
    report = ValidationReport(full, fulldim, simplicial, upward, tuple(failures))
    P._cache[key] = report
    return report


def require_valid(P: GitPresentation, stage: str = "") -> ValidationReport:
    report = validate(P)
    if not report.ok:
        prefix = f"{stage}: " if stage else ""
        raise ValidationFailure(prefix + "; ".join(report.failures), report)
    return report


# ----------------------------------------------------------------------------
# Divisor classes


def h2_quotient_basis(P: GitPresentation, S: frozenset, candidates: Sequence[Sequence] = ()) -> tuple:
    """
    Vectors of ``L∨⊗Q`` whose images form a basis of ``L∨⊗Q / span{D_j : j in S}``.

    ``candidates`` are tried first, in order; the basis is completed with the
    lexicographically first characters outside ``S``.
    """
    r = P.torus_rank
    base = [P.characters[j] for j in sorted(S)]
    pool = [tuple(v) for v in candidates] + [P.characters[i] for i in range(P.character_count) if i not in S]
    chosen = independent_subset(pool, r, start=base)
    return tuple(fvec(pool[i]) for i in chosen)


def quotient_coordinates(x: Sequence, basis: Sequence[Sequence], killed: Sequence[Sequence]) -> tuple:
    """Coordinates of ``x`` modulo ``killed`` in the given quotient basis."""
    cols = list(basis) + list(killed)
    A = transpose(cols) if cols else tuple(() for _ in x)
    sol = solve(A, fvec(x), len(cols))
    if sol is None:
        raise ValueError("vector outside the span of basis and killed directions")
    return tuple(sol[: len(basis)])


@dataclass(frozen=True)
class DivisorClassData:
    """
    Divisor-class bookkeeping of a presentation.

    ``theta`` maps ``L∨⊗Q`` onto ``H²`` written in ``h2_basis`` (vectors of
    ``L∨⊗Q`` whose images are the basis). ``xi`` maps each extended index to
    its vector in ``L⊗Q``. The ample cone sits inside ``L∨⊗Q`` as the image
    of the splitting ``x -> x - Σ (x·ξ_j) D_j``; the Mori cone sits in the
    annihilator of the extended characters inside ``L⊗Q``.
    """

    S: frozenset
    theta: tuple
    h2_basis: tuple
    xi: dict
    minimal_cones: dict
    extended_ample_cone: PolyCone
    ample_cone: PolyCone
    mori_cone: PolyCone

    def theta_of(self, x: Sequence) -> tuple:
        return tuple(dot(row, x) for row in self.theta)


def chamber_closure(P: GitPresentation) -> PolyCone:
    """Closure of the intersection of the open cones of all anticones."""
    key = "chamber"
    if key not in P._cache:
        r = P.torus_rank
        ineqs, eqs = [], []
        for j in P.minimal_anticones:
            cone = PolyCone.from_generators([P.characters[i] for i in j], r)
            ineqs.extend(cone.inequalities)
            eqs.extend(cone.equations)
        P._cache[key] = PolyCone.from_inequalities(ineqs, eqs, r)
    return P._cache[key]


def splitting_projection(x: Sequence, S: Sequence[int], xi: dict, characters: Sequence) -> tuple:
    out = fvec(x)
    for j in S:
        c = dot(x, xi[j])
        out = vsub(out, tuple(c * d for d in characters[j]))
    return out


def divisor_class_data(P: GitPresentation, fan) -> DivisorClassData:
    """Extended set, ``ξ_j``, ``θ``, extended ample, ample and Mori cones."""
    r = P.torus_rank
    m = P.character_count
    S = fan.S
    rays = fan.rays
    xi, minimal = {}, {}
    for j in sorted(S):
        support = None
        for cone in fan.maximal_cones:
            coeffs = solve(transpose([rays[i] for i in cone]), rays[j], len(cone))
            if coeffs is None or any(c < 0 for c in coeffs):
                continue
            supp = tuple(i for i, c in zip(cone, coeffs) if c != 0)
            cvals = {i: c for i, c in zip(cone, coeffs) if c != 0}
            if support is None:
                support = (supp, cvals)
            elif support[0] != supp:
                raise ExtendedVectorOutsideSupport(f"extended index {j} has no unique minimal cone")
        if support is None:
            raise ExtendedVectorOutsideSupport(f"ray of extended index {j} lies outside the fan")
        supp, cvals = support
        minimal[j] = cvals
        target = []
        for i in range(m):
            if i == j:
                target.append(Fraction(1))
            elif i in cvals:
                target.append(-cvals[i])
            else:
                target.append(Fraction(0))
        sol = solve(P.characters, target, r)
        if sol is None or any(dot(P.characters[i], sol) != target[i] for i in range(m)):
            raise ExtendedVectorOutsideSupport(f"no ξ vector for extended index {j}")
        xi[j] = sol

    basis_vecs = h2_quotient_basis(P, S)
    killed = [P.characters[j] for j in sorted(S)]
    # θ as a matrix: coordinates of the standard basis vectors
    cols = [quotient_coordinates(tuple(Fraction(int(a == b)) for b in range(r)), basis_vecs, killed) for a in range(r)]
    theta = transpose(cols) if cols and cols[0] else tuple()

    extended = chamber_closure(P)
    projected = [splitting_projection(g, sorted(S), xi, P.characters) for g in extended.generators]
    ample = PolyCone.from_generators(projected, r) if projected else PolyCone.from_inequalities([], [tuple(int(a == b) for b in range(r)) for a in range(r)], r)
    mori = PolyCone.from_inequalities(list(ample.generators), [P.characters[j] for j in sorted(S)], r)
    return DivisorClassData(
        S=S,
        theta=theta,
        h2_basis=basis_vecs,
        xi=xi,
        minimal_cones=minimal,
        extended_ample_cone=extended,
        ample_cone=ample,
        mori_cone=mori,
    )


def in_nef_cone(data: DivisorClassData, x: Sequence, characters: Sequence) -> bool:
    """Whether the class of ``x`` lies in the closed ample cone."""
    y = splitting_projection(x, sorted(data.S), data.xi, characters)
    return data.ample_cone.contains(y)


def closed_cone_contains(P: GitPresentation, indices, target) -> bool:
    return cone_contains([P.characters[i] for i in sorted(indices)], target) is not None
