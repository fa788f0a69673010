"""Stacky fans built from GIT data, interior cones, and twisted sectors."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import BijectionFailure, NonSimplicial, NotPureFullDimensional
from .exact import dot, frac_part, matmul, overlattice_cosets, rank
from .git import (
    AnticoneFamily,
    GitPresentation,
    extended_set,
    free_ray_images,
    require_valid,
)


@dataclass(frozen=True)
class StackyFan:
    """
    Fan of a validated presentation.

    **Fields:**
    - ``n``: rank of the free part of ``N``.
    - ``torsion``: invariant factors of the torsion part of ``N``.
    - ``beta``: the quotient map ``Z^m -> N``, free rows first, then one
      row per torsion factor (read modulo that factor).
    - ``rays``: free-part images of the basis vectors, one per character.
    - ``maximal_cones``: index tuples, complements of minimal anticones.
    - ``S``: extended indices; they never appear in a cone.
    """

    n: int
    torsion: tuple
    beta: tuple
    rays: tuple
    maximal_cones: tuple
    S: frozenset
    presentation: Optional[GitPresentation] = None

    def is_cone(self, indices) -> bool:
        s = set(indices)
        return any(s <= set(c) for c in self.maximal_cones)

    def cones(self) -> list:
        """Every cone, as sorted index tuples, including the zero cone."""
        out = set()
        for c in self.maximal_cones:
            for size in range(len(c) + 1):
                out.update(combinations(c, size))
        return sorted(out, key=lambda c: (len(c), c))

    def is_complete_dimensional(self) -> bool:
        return all(len(c) == self.n and rank([self.rays[i] for i in c], self.n) == self.n for c in self.maximal_cones)

    def cone_containing(self, indices) -> Optional[tuple]:
        s = set(indices)
        for c in self.maximal_cones:
            if s <= set(c):
                return c
        return None


def build_fan(P: GitPresentation) -> StackyFan:
    """Fan with cones indexed by complements of anticones."""
    require_valid(P, "fan")
    m = P.character_count
    n, torsion, proj, rays = free_ray_images(P)
    S = extended_set(P)
    maximal = []
    for j in P.minimal_anticones:
        cone = tuple(i for i in range(m) if i not in j)
        if rank([rays[i] for i in cone], n) < len(cone):
            raise NonSimplicial(f"cone {list(cone)} has dependent rays")
        maximal.append(cone)
    maximal = sorted(set(maximal))
    # drop complements that are faces of other complements
    maximal = [c for c in maximal if not any(set(c) < set(d) for d in maximal)]
    return StackyFan(n, torsion, proj, rays, tuple(maximal), S, P)


def beta_kills_characters(fan: StackyFan, P: GitPresentation) -> bool:
    """Exactness check: the quotient map composed with the character matrix vanishes."""
    comp = matmul(fan.beta, P.characters)
    free_ok = all(x == 0 for row in comp[: fan.n] for x in row)
    tors_ok = all(x % d == 0 for row, d in zip(comp[fan.n :], fan.torsion) for x in row)
    return free_ok and tors_ok


def interior_cones(fan: StackyFan) -> list:
    """
    Cones whose relative interior lies in the interior of the support.

    A codimension-one cone lying in exactly one maximal cone is a boundary
    facet; a cone is interior iff it is a face of no boundary facet.
    """
    if not fan.is_complete_dimensional():
        raise NotPureFullDimensional("every maximal cone must have n independent rays")
    counts = {}
    for c in fan.maximal_cones:
        for f in combinations(c, fan.n - 1):
            counts[f] = counts.get(f, 0) + 1
    boundary = [set(f) for f, k in counts.items() if k == 1]
    return [c for c in fan.cones() if not any(set(c) <= b for b in boundary)]


def minimal_interior_cones(fan: StackyFan) -> list:
    cones = interior_cones(fan)
    return [c for c in cones if not any(set(d) < set(c) for d in cones)]


@dataclass(frozen=True)
class TwistedSector:
    """
    One component of the inertia stack.

    ``nu`` has coordinates in ``[0, 1)``; ``indices`` is ``I_ν``, the
    characters pairing integrally with ``nu``; ``presentation`` restricts
    the parent presentation to those characters. ``age_label`` sums the
    fractional pairings over all characters and is only a label.
    """

    nu: tuple
    indices: tuple
    presentation: GitPresentation
    age_label: Fraction
    pairings: tuple

    @property
    def is_untwisted(self) -> bool:
        return all(x == 0 for x in self.nu)


def twisted_sectors(P: GitPresentation) -> list:
    """Sectors from overlattice cosets of each minimal anticone, deduplicated by ``ν`` mod ``L``."""
    require_valid(P, "sectors")
    family = AnticoneFamily(P.minimal_anticones, P)
    m = P.character_count
    seen = {}
    for j in P.minimal_anticones:
        for nu in overlattice_cosets([P.characters[i] for i in j]):
            if nu in seen:
                continue
            pair = tuple(dot(P.characters[i], nu) for i in range(m))
            idx = tuple(i for i in range(m) if pair[i].denominator == 1)
            if not family.contains(idx):
                continue
            fracs = tuple(frac_part(x) for x in pair)
            seen[nu] = TwistedSector(nu, idx, P.restrict(idx), sum(fracs, Fraction(0)), fracs)
    return [seen[k] for k in sorted(seen, key=lambda nu: (any(x != 0 for x in nu), nu))]


def classify_sectors_int_frac(sectors: Sequence[TwistedSector], e_index: int, base_sectors: Optional[Sequence[TwistedSector]] = None):
    """
    Split hat-presentation sectors by whether ``D_e·ν`` is integral.

    With ``base_sectors`` given, integral sectors must be exactly the
    ``(ν, 0)`` for the base sectors ``ν``.
    """
    int_list, frac_list = [], []
    for s in sectors:
        (int_list if s.pairings[e_index] == 0 else frac_list).append(s)
    if base_sectors is not None:
        lifted = sorted(tuple(b.nu) + (Fraction(0),) for b in base_sectors)
        found = sorted(tuple(s.nu) for s in int_list)
        if lifted != found:
            raise BijectionFailure(f"integral sectors {found} do not match lifted base sectors {lifted}")
    return int_list, frac_list
