"""
Graded cohomology rings of toric stacks by degree-wise linear algebra.

A ring is generated by a basis ``t_1..t_g`` of ``H²``; each character
``D_i`` contributes the linear form ``u_i = θ(D_i)``, and the relations are
products ``∏_{i∈Q} u_i`` over primitive collections ``Q``. Each polynomial
degree is reduced separately by exact row reduction, with the monomial
order putting later variables first, so that relations such as
``(−5u + e)e`` are solved for ``e²``.

Degrees are stored as polynomial degrees; reports double them.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Dict, Optional, Sequence

from .errors import NonvanishingAboveCap
from .exact import fvec, independent_subset, nullspace, rank, rref
from .fan import StackyFan, build_fan, minimal_interior_cones, twisted_sectors
from .git import GitPresentation, quotient_coordinates


# ----------------------------------------------------------------------------
# Polynomials


class Polynomial(dict):
    """Sparse polynomial: exponent tuple -> Fraction."""

    def __init__(self, terms=(), nvars: Optional[int] = None):
        super().__init__()
        items = terms.items() if isinstance(terms, dict) else terms
        for mono, c in items:
            c = Fraction(c)
            if c:
                self[tuple(mono)] = self.get(tuple(mono), Fraction(0)) + c
                if not self[tuple(mono)]:
                    del self[tuple(mono)]
        if nvars is None and self:
            nvars = len(next(iter(self)))
        self.nvars = nvars

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        return cls({tuple(int(a == index) for a in range(nvars)): 1}, nvars)

    @classmethod
    def constant(cls, nvars: int, c=1) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Polynomial":
        g = len(coeffs)
        return cls({tuple(int(a == i) for a in range(g)): c for i, c in enumerate(coeffs)}, g)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self)
        for k, v in other.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Polynomial(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({k: -v for k, v in self.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial({k: v * c for k, v in self.items()}, self.nvars)
        out: Dict[tuple, Fraction] = {}
        for m1, c1 in self.items():
            for m2, c2 in other.items():
                k = tuple(a + b for a, b in zip(m1, m2))
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return Polynomial(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set:
        return {sum(m) for m in self}

    def component(self, d: int) -> "Polynomial":
        return Polynomial({k: v for k, v in self.items() if sum(k) == d}, self.nvars)


def monomials(g: int, d: int) -> list:
    """Exponent tuples of degree ``d`` in ``g`` variables, most preferred pivot first."""
    out = []

    def rec(i, left, acc):
        if i == g - 1:
            out.append(tuple(acc + [left]))
            return
        for a in range(left, -1, -1):
            rec(i + 1, left - a, acc + [a])

    if g == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return sorted(out, key=lambda e: tuple(reversed(e)), reverse=True)


def format_monomial(mono: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for a in reversed(range(len(mono))):
        if mono[a] == 1:
            parts.append(names[a])
        elif mono[a] > 1:
            parts.append(f"{names[a]}^{mono[a]}")
    return "*".join(parts) if parts else "1"


def primitive_scaling(p: Polynomial) -> Polynomial:
    """The positive rational multiple of ``p`` with coprime integer coefficients."""
    if not p:
        return p
    den = lcm(*(c.denominator for c in p.values()))
    num = gcd(*(int(c * den) for c in p.values()))
    lead = p[max(p, key=lambda mono: (sum(mono), mono[::-1]))]
    scale = Fraction(den, num) * (1 if lead > 0 else -1)
    return Polynomial({mono: c * scale for mono, c in p.items()}, p.nvars)


def format_polynomial(p: Polynomial, names: Sequence[str]) -> str:
    if not p:
        return "0"
    terms = []
    for mono in sorted(p, key=lambda e: (sum(e), tuple(reversed(e))), reverse=True):
        c = p[mono]
        m = format_monomial(mono, names)
        if m == "1":
            body = str(abs(c))
        elif abs(c) == 1:
            body = m
        else:
            body = f"{abs(c)}*{m}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


# ----------------------------------------------------------------------------
# Graded rings


@dataclass
class _Slice:
    monomials: list
    standard: list
    reduction: dict
    ideal_rows: list


class GradedRing:
    """
    A graded quotient ``Q[t_1..t_g] / I`` with ``I`` generated in positive degrees.

    **Arguments:**
    - ``names``: variable names.
    - ``relations``: homogeneous generators of ``I`` as :class:`Polynomial`.
    - ``top``: largest polynomial degree allowed to be nonzero.
    - ``classes``: optional map from character index to the linear form
      ``u_i`` written in the variables.
    - ``basis_vectors``: optional lifts of the variables to the character
      space, used to induce maps between rings.
    - ``killed``: character-space vectors sent to zero in ``H²``.

    Graded pieces are computed lazily and cached. Asking for the ring's
    dimensions scans a guard band above ``top`` and raises
    :class:`NonvanishingAboveCap` if anything survives there.
    """

    def __init__(
        self,
        names: Sequence[str],
        relations: Sequence[Polynomial],
        top: int,
        classes: Optional[dict] = None,
        basis_vectors: Sequence = (),
        killed: Sequence = (),
        relation_sets: Sequence = (),
        linear_relations: Sequence = (),
        presentation: Optional[GitPresentation] = None,
        fan: Optional[StackyFan] = None,
    ):
        self.names = tuple(names)
        self.g = len(self.names)
        rels = []
        for p in relations:
            for d in sorted(p.degrees()):
                comp = p.component(d)
                if comp:
                    rels.append(comp)
        self.relations = tuple(rels)
        self.top = top
        self.classes = dict(classes or {})
        self.basis_vectors = tuple(fvec(v) for v in basis_vectors)
        self.killed = tuple(fvec(v) for v in killed)
        self.relation_sets = tuple(relation_sets)
        self.linear_relations = tuple(linear_relations)
        self.presentation = presentation
        self.fan = fan
        self._slices: Dict[int, _Slice] = {}
        self._checked = False

    # -- degree slices -----------------------------------------------------

    def _slice(self, d: int) -> _Slice:
        if d in self._slices:
            return self._slices[d]
        monos = monomials(self.g, d)
        index = {m: k for k, m in enumerate(monos)}
        rows = []
        if d > 0:
            prev = self._slice(d - 1)
            for row in prev.ideal_rows:
                for a in range(self.g):
                    vec = [Fraction(0)] * len(monos)
                    for mono, c in row.items():
                        sh = tuple(e + int(b == a) for b, e in enumerate(mono))
                        vec[index[sh]] += c
                    rows.append(vec)
        for rel in self.relations:
            if sum(next(iter(rel))) == d:
                vec = [Fraction(0)] * len(monos)
                for mono, c in rel.items():
                    vec[index[mono]] += c
                rows.append(vec)
        R, piv = rref(rows, len(monos)) if rows else ((), ())
        pivset = set(piv)
        standard = [m for k, m in enumerate(monos) if k not in pivset]
        std_index = {m: k for k, m in enumerate(standard)}
        reduction = {}
        for m in standard:
            v = [Fraction(0)] * len(standard)
            v[std_index[m]] = Fraction(1)
            reduction[m] = tuple(v)
        for r, p in zip(R, piv):
            v = [Fraction(0)] * len(standard)
            for k, m in enumerate(monos):
                if k not in pivset and r[k] != 0:
                    v[std_index[m]] = -r[k]
            reduction[monos[p]] = tuple(v)
        ideal_rows = [Polynomial({monos[k]: x for k, x in enumerate(r) if x}, self.g) for r in R]
        sl = _Slice(monos, standard, reduction, ideal_rows)
        self._slices[d] = sl
        return sl

    def minimal_relations(self) -> list:
        """
        Relations that are new in their degree, reduced modulo the ideal
        generated in lower degrees and put in reduced echelon form.
        """
        out = []
        for d in range(1, self.max_relation_degree() + 1):
            monos = monomials(self.g, d)
            index = {m: k for k, m in enumerate(monos)}

            def vector(p):
                vec = [Fraction(0)] * len(monos)
                for mono, c in p.items():
                    vec[index[mono]] += c
                return vec

            lower = []
            if d > 1:
                for row in self._slice(d - 1).ideal_rows:
                    for a in range(self.g):
                        lower.append(vector(row * Polynomial.variable(self.g, a)))
            L, piv = rref(lower, len(monos)) if lower else ((), ())
            new = []
            for rel in self.relations:
                if sum(next(iter(rel))) != d:
                    continue
                v = vector(rel)
                for row, c in zip(L, piv):
                    if v[c] != 0:
                        f = v[c]
                        v = [x - f * y for x, y in zip(v, row)]
                if any(v):
                    new.append(v)
            if new:
                for row in rref(new, len(monos))[0]:
                    out.append(Polynomial({monos[k]: x for k, x in enumerate(row) if x}, self.g))
        return out

    def max_relation_degree(self) -> int:
        return max((sum(next(iter(r))) for r in self.relations), default=1)

    def certify(self) -> None:
        """Check that every degree in the guard band above ``top`` vanishes."""
        if self._checked:
            return
        for d in range(self.top + 1, self.top + self.max_relation_degree() + 1):
            if self._slice(d).standard:
                raise NonvanishingAboveCap(f"degree {2 * d} is nonzero above the cap {2 * self.top}")
        self._checked = True

    def dimension(self, d: int) -> int:
        """Dimension of the polynomial-degree ``d`` piece."""
        self.certify()
        if d < 0 or d > self.top:
            return 0
        return len(self._slice(d).standard)

    def dimensions(self) -> tuple:
        self.certify()
        return tuple(self.dimension(d) for d in range(self.top + 1))

    def total_dimension(self) -> int:
        return sum(self.dimensions())

    def standard_monomials(self, d: int) -> list:
        if d < 0 or d > self.top:
            return []
        return list(self._slice(d).standard)

    # -- classes -----------------------------------------------------------

    def normal_form(self, p: Polynomial) -> "CohClass":
        comps = {}
        for d in sorted(p.degrees()):
            if d > self.top:
                continue
            sl = self._slice(d)
            v = [Fraction(0)] * len(sl.standard)
            for mono, c in p.items():
                if sum(mono) == d:
                    for k, x in enumerate(sl.reduction[mono]):
                        v[k] += c * x
            if any(v):
                comps[d] = tuple(v)
        return CohClass(self, comps)

    def one(self) -> "CohClass":
        return self.normal_form(Polynomial.constant(self.g))

    def zero(self) -> "CohClass":
        return CohClass(self, {})

    def variable(self, a) -> "CohClass":
        if isinstance(a, str):
            a = self.names.index(a)
        return self.normal_form(Polynomial.variable(self.g, a))

    def linear_class(self, coeffs: Sequence) -> "CohClass":
        return self.normal_form(Polynomial.linear(fvec(coeffs)))

    def u(self, i: int) -> "CohClass":
        """The class ``u_i`` of character ``i``."""
        return self.linear_class(self.classes[i])

    def character_class(self, chi: Sequence) -> "CohClass":
        """The class ``θ(χ)`` of an arbitrary character."""
        return self.linear_class(quotient_coordinates(chi, self.basis_vectors, self.killed))

    def character_coordinates(self, chi: Sequence) -> tuple:
        return quotient_coordinates(chi, self.basis_vectors, self.killed)

    def monomial_class(self, mono: Sequence[int]) -> "CohClass":
        return self.normal_form(Polynomial({tuple(mono): 1}, self.g))

    def from_vector(self, d: int, vec: Sequence) -> "CohClass":
        v = tuple(Fraction(x) for x in vec)
        return CohClass(self, {d: v} if any(v) else {})

    def to_polynomial(self, d: int, vec: Sequence) -> Polynomial:
        return Polynomial({m: x for m, x in zip(self.standard_monomials(d), vec) if x}, self.g)

    def multiplication_matrix(self, c: "CohClass", d: int) -> list:
        """Columns: images of the standard monomials of degree ``d`` under ``x -> c·x``."""
        cols = []
        for mono in self.standard_monomials(d):
            img = c * self.monomial_class(mono)
            cols.append(img)
        return cols

    def polynomial_relations(self) -> list:
        return list(self.relations)

    def graded_basis(self) -> dict:
        """Standard monomials keyed by cohomological degree."""
        self.certify()
        return {2 * d: [format_monomial(m, self.names) for m in self.standard_monomials(d)] for d in range(self.top + 1)}

    def describe(self) -> dict:
        return {
            "variables": list(self.names),
            "relations": [format_polynomial(primitive_scaling(p), self.names) for p in self.minimal_relations()],
            "dimensions": {str(2 * d): k for d, k in enumerate(self.dimensions())},
            "basis": {str(k): v for k, v in self.graded_basis().items()},
            "degree_cap": 2 * self.top,
        }


class CohClass:
    """A ring element stored as normal-form coordinates per polynomial degree."""

    def __init__(self, ring: GradedRing, components: dict):
        self.ring = ring
        self.components = {d: tuple(v) for d, v in components.items() if any(v)}

    def is_zero(self) -> bool:
        return not self.components

    def degrees(self) -> list:
        return sorted(self.components)

    def homogeneous_degree(self) -> Optional[int]:
        ds = self.degrees()
        if len(ds) == 1:
            return ds[0]
        return None

    def component(self, d: int) -> tuple:
        return self.components.get(d, tuple(Fraction(0) for _ in self.ring.standard_monomials(d)))

    def to_polynomial(self) -> Polynomial:
        out = Polynomial({}, self.ring.g)
        for d, v in self.components.items():
            out = out + self.ring.to_polynomial(d, v)
        return out

    def __add__(self, other):
        if not isinstance(other, CohClass):
            other = self.ring.one() * other
        comps = dict(self.components)
        for d, v in other.components.items():
            base = comps.get(d, tuple(Fraction(0) for _ in v))
            comps[d] = tuple(a + b for a, b in zip(base, v))
        return CohClass(self.ring, comps)

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, {d: tuple(-x for x in v) for d, v in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CohClass):
            c = Fraction(other)
            return CohClass(self.ring, {d: tuple(c * x for x in v) for d, v in self.components.items()})
        return self.ring.normal_form(self.to_polynomial() * other.to_polynomial())

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        return self.ring is other.ring and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components.items())))

    def __str__(self):
        return format_polynomial(self.to_polynomial(), self.ring.names)

    __repr__ = __str__


# ----------------------------------------------------------------------------
# Subspaces


class NarrowSpace:
    """
    A graded subspace of a ring, one reduced basis per polynomial degree.

    ``provenance`` records what generated it: interior-cone monomials or
    ideal generators.
    """

    def __init__(self, ring: GradedRing, pieces: dict, provenance: Sequence = ()):
        self.ring = ring
        self.pieces = {}
        for d in range(ring.top + 1):
            rows = [tuple(v) for v in pieces.get(d, ()) if any(v)]
            n = len(ring.standard_monomials(d))
            self.pieces[d] = rref(rows, n)[0] if rows else ()
        self.provenance = tuple(provenance)

    def dimension(self, d: int) -> int:
        return len(self.pieces.get(d, ()))

    def dimensions(self) -> tuple:
        return tuple(self.dimension(d) for d in range(self.ring.top + 1))

    def total_dimension(self) -> int:
        return sum(self.dimensions())

    def contains(self, c: CohClass) -> bool:
        for d, v in c.components.items():
            rows = list(self.pieces.get(d, ()))
            if rank(rows + [v], len(v)) > len(rows):
                return False
        return True

    def basis_classes(self, d: int) -> list:
        return [self.ring.from_vector(d, v) for v in self.pieces.get(d, ())]

    def all_basis_classes(self) -> list:
        return [c for d in range(self.ring.top + 1) for c in self.basis_classes(d)]

    def __eq__(self, other):
        if not isinstance(other, NarrowSpace):
            return NotImplemented
        return self.ring is other.ring and self.pieces == other.pieces

    def __hash__(self):
        return hash(tuple(sorted(self.pieces.items())))

    def intersect(self, other: "NarrowSpace") -> "NarrowSpace":
        pieces = {}
        for d in range(self.ring.top + 1):
            U, W = list(self.pieces.get(d, ())), list(other.pieces.get(d, ()))
            if not U or not W:
                continue
            n = len(U[0])
            cols = U + [tuple(-x for x in w) for w in W]
            A = [tuple(col[i] for col in cols) for i in range(n)]
            sols = nullspace(A, len(cols))
            vecs = []
            for s in sols:
                vecs.append(tuple(sum(s[k] * U[k][i] for k in range(len(U))) for i in range(n)))
            pieces[d] = vecs
        return NarrowSpace(self.ring, pieces, ("intersection",))

    def is_subspace_of(self, other: "NarrowSpace") -> bool:
        return all(other.contains(c) for c in self.all_basis_classes())

    def is_ideal(self) -> bool:
        """Closed under multiplication by every variable."""
        for a in range(self.ring.g):
            t = self.ring.variable(a)
            for c in self.all_basis_classes():
                if not self.contains(t * c):
                    return False
        return True

    def missing_from(self, other: "NarrowSpace") -> Optional[CohClass]:
        """A class of ``other`` outside this space, preferring standard monomials."""
        for d in range(self.ring.top + 1):
            for mono in self.ring.standard_monomials(d):
                c = self.ring.monomial_class(mono)
                if other.contains(c) and not self.contains(c):
                    return c
        for c in other.all_basis_classes():
            if not self.contains(c):
                return c
        return None

    def minimal_generators(self) -> list:
        """Classes spanning, degree by degree, a complement of what lower degrees generate."""
        out = []
        for d in range(self.ring.top + 1):
            rows = list(self.pieces.get(d, ()))
            if not rows:
                continue
            n = len(rows[0])
            lower = []
            for b in self.pieces.get(d - 1, ()) if d > 0 else ():
                c = self.ring.from_vector(d - 1, b)
                for a in range(self.ring.g):
                    img = (c * self.ring.variable(a)).component(d)
                    if any(img):
                        lower.append(img)
            L, piv = rref(lower, n) if lower else ((), ())
            new = []
            for v in rows:
                v = list(v)
                for row, col in zip(L, piv):
                    if v[col] != 0:
                        f = v[col]
                        v = [x - f * y for x, y in zip(v, row)]
                if any(v):
                    new.append(v)
            if new:
                out.extend(self.ring.from_vector(d, row) for row in rref(new, n)[0])
        return out

    def describe(self) -> dict:
        return {
            "dimensions": {str(2 * d): k for d, k in enumerate(self.dimensions())},
            "basis": {
                str(2 * d): [str(c) for c in self.basis_classes(d)] for d in range(self.ring.top + 1) if self.pieces.get(d)
            },
            "generators": [str(p) for p in self.provenance],
        }


def ideal_image(R: GradedRing, generators: Sequence[CohClass], provenance: Sequence = ()) -> NarrowSpace:
    """Per-degree span of ``g·m`` over generators ``g`` and standard monomials ``m``."""
    pieces: Dict[int, list] = {}
    for g in generators:
        for dg in g.degrees():
            gh = CohClass(R, {dg: g.components[dg]})
            for d in range(dg, R.top + 1):
                for mono in R.standard_monomials(d - dg):
                    img = gh * R.monomial_class(mono)
                    if not img.is_zero():
                        pieces.setdefault(d, []).append(img.component(d))
    prov = provenance or [str(g) for g in generators]
    return NarrowSpace(R, pieces, prov)


def mult_kernel(R: GradedRing, c: CohClass) -> NarrowSpace:
    """Kernel of multiplication by a homogeneous class, per degree."""
    if c.is_zero():
        pieces = {d: [R.one().component(0)] if d == 0 else [tuple(Fraction(int(i == k)) for i in range(R.dimension(d))) for k in range(R.dimension(d))] for d in range(R.top + 1)}
        return NarrowSpace(R, pieces, ("ker(0)",))
    dc = c.homogeneous_degree()
    if dc is None:
        raise ValueError("multiplication kernel needs a homogeneous class")
    pieces = {}
    for d in range(R.top + 1):
        n = R.dimension(d)
        if n == 0:
            continue
        imgs = R.multiplication_matrix(c, d)
        target_dim = R.dimension(d + dc)
        A = [tuple(img.component(d + dc)[i] for img in imgs) for i in range(target_dim)]
        pieces[d] = list(nullspace(A, n)) if A else [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]
    return NarrowSpace(R, pieces, (f"ker({c})",))


def whole_space(R: GradedRing) -> NarrowSpace:
    return ideal_image(R, [R.one()], ("1",))


# ----------------------------------------------------------------------------
# Ring maps


class RingMap:
    """
    Algebra map between graded rings, fixed by the images of the source variables.

    ``images[a]`` is the linear form in target variables that variable ``a``
    of the source maps to.
    """

    def __init__(self, source: GradedRing, target: GradedRing, images: Sequence[Sequence]):
        self.source = source
        self.target = target
        self.images = tuple(fvec(v) for v in images)
        self._polys = [Polynomial.linear(v) if v else Polynomial.constant(target.g, 0) for v in self.images]

    def _image_poly(self, p: Polynomial) -> Polynomial:
        out = Polynomial({}, self.target.g)
        for mono, c in p.items():
            term = Polynomial.constant(self.target.g, c)
            for a, e in enumerate(mono):
                if e:
                    term = term * (self._polys[a] ** e)
            out = out + term
        return out

    def apply(self, c: CohClass) -> CohClass:
        return self.target.normal_form(self._image_poly(c.to_polynomial()))

    def is_well_defined(self) -> bool:
        return all(self.target.normal_form(self._image_poly(r)).is_zero() for r in self.source.relations)

    def matrix(self, d: int) -> list:
        return [self.apply(self.source.monomial_class(m)).component(d) for m in self.source.standard_monomials(d)]

    def image(self, space: NarrowSpace) -> NarrowSpace:
        pieces = {}
        for d in range(self.source.top + 1):
            imgs = [self.apply(c).component(d) for c in space.basis_classes(d)]
            if d <= self.target.top:
                pieces[d] = imgs
        return NarrowSpace(self.target, pieces, ("image",))

    def kernel_on(self, space: NarrowSpace) -> NarrowSpace:
        """Kernel of the map restricted to ``space``, as a subspace of the source."""
        pieces = {}
        for d in range(self.source.top + 1):
            basis = space.basis_classes(d)
            if not basis:
                continue
            imgs = [self.apply(c).component(d) for c in basis]
            n = len(self.target.standard_monomials(d))
            A = [tuple(img[i] for img in imgs) for i in range(n)]
            sols = nullspace(A, len(basis)) if A else [tuple(Fraction(int(i == k)) for i in range(len(basis))) for k in range(len(basis))]
            vecs = []
            for s in sols:
                vecs.append(tuple(sum(s[k] * basis[k].component(d)[i] for k in range(len(basis))) for i in range(len(basis[0].component(d)))))
            pieces[d] = vecs
        return NarrowSpace(self.source, pieces, ("kernel",))


# ----------------------------------------------------------------------------
# Presentations


def primitive_collections(fan: StackyFan, m: int) -> list:
    """Minimal index sets outside ``S`` that are not contained in any cone."""
    indices = [i for i in range(m) if i not in fan.S]
    found = []
    for size in range(1, fan.n + 2):
        for combo in combinations(indices, size):
            s = set(combo)
            if any(f <= s for f in found):
                continue
            if not fan.is_cone(combo):
                found.append(s)
    return [tuple(sorted(f)) for f in found]


def ring_presentation(
    P: GitPresentation,
    fan: Optional[StackyFan] = None,
    generators: Sequence = (),
) -> GradedRing:
    """
    Cohomology ring of the quotient presented by ``P``.

    ``generators`` is an optional list of ``(name, character vector)``
    pairs tried first when choosing the ``H²`` basis; the basis is completed
    with characters named ``u1, u2, ...`` after their 1-based index.
    """
    if fan is None:
        fan = build_fan(P)
    m = P.character_count
    S = fan.S
    killed = [P.characters[j] for j in sorted(S)]
    cand_names = [name for name, _ in generators]
    cand_vecs = [tuple(v) for _, v in generators]
    pool_names = cand_names + [f"u{i + 1}" for i in range(m) if i not in S]
    pool_vecs = cand_vecs + [P.characters[i] for i in range(m) if i not in S]
    chosen = independent_subset(pool_vecs, P.torus_rank, start=killed)
    names = [pool_names[i] for i in chosen]
    basis = [fvec(pool_vecs[i]) for i in chosen]
    classes = {i: quotient_coordinates(P.characters[i], basis, killed) for i in range(m)}
    g = len(basis)
    linear_forms = {i: Polynomial.linear(classes[i]) for i in range(m)}
    sets = primitive_collections(fan, m)
    relations = []
    for q in sets:
        p = Polynomial.constant(g)
        for i in q:
            p = p * linear_forms[i]
        relations.append(p)
    lin = tuple(tuple(fan.beta[a][i] for i in range(m) if i not in S) for a in range(fan.n))
    return GradedRing(
        names,
        relations,
        fan.n,
        classes=classes,
        basis_vectors=basis,
        killed=killed,
        relation_sets=sets,
        linear_relations=lin,
        presentation=P,
        fan=fan,
    )


def graded_basis(R: GradedRing) -> dict:
    """Per cohomological degree: basis monomials and dimension."""
    return {deg: {"basis": basis, "dimension": len(basis)} for deg, basis in R.graded_basis().items()}


def narrow_by_interior_cones(P: GitPresentation, fan: StackyFan, R: GradedRing) -> NarrowSpace:
    """Ideal generated by the monomials of the inclusion-minimal interior cones."""
    cones = minimal_interior_cones(fan)
    gens = []
    for c in cones:
        cls = R.one()
        for i in c:
            cls = cls * R.u(i)
        gens.append(cls)
    labels = ["*".join(P.labels[i] for i in c) if c else "1" for c in cones]
    return ideal_image(R, gens, labels)


def restriction_map(R_bar: GradedRing, kill) -> RingMap:
    """
    Quotient map onto the ring where one degree-two class is set to zero.

    ``kill`` is a character index of the presentation, a variable name, or
    a degree-one :class:`CohClass`.
    """
    if isinstance(kill, CohClass):
        coeffs = kill.component(1)
        # coordinates in standard monomials of degree one are the variables themselves
        lin = [Fraction(0)] * R_bar.g
        for mono, x in zip(R_bar.standard_monomials(1), coeffs):
            lin[mono.index(1)] = x
        killed_vec = None
    elif isinstance(kill, str):
        a = R_bar.names.index(kill)
        lin = [Fraction(int(b == a)) for b in range(R_bar.g)]
        killed_vec = R_bar.basis_vectors[a] if R_bar.basis_vectors else None
    else:
        lin = list(R_bar.classes[kill])
        killed_vec = R_bar.presentation.characters[kill] if R_bar.presentation is not None else None
    if all(x == 0 for x in lin):
        raise ValueError("the class to kill is zero")
    p = max(a for a in range(R_bar.g) if lin[a] != 0)
    keep = [a for a in range(R_bar.g) if a != p]
    images = []
    for a in range(R_bar.g):
        v = [Fraction(0)] * len(keep)
        if a == p:
            for k, b in enumerate(keep):
                v[k] = -lin[b] / lin[p]
        else:
            v[keep.index(a)] = Fraction(1)
        images.append(tuple(v))
    proj = lambda form: tuple(sum(form[a] * images[a][k] for a in range(R_bar.g)) for k in range(len(keep)))
    classes = {i: proj(f) for i, f in R_bar.classes.items()}
    tmp_target = GradedRing([R_bar.names[a] for a in keep], [], R_bar.top)
    to_target = RingMap(R_bar, tmp_target, images)
    relations = [to_target._image_poly(r) for r in R_bar.relations]
    target = GradedRing(
        [R_bar.names[a] for a in keep],
        relations,
        R_bar.top,
        classes=classes,
        basis_vectors=[R_bar.basis_vectors[a] for a in keep] if R_bar.basis_vectors else (),
        killed=list(R_bar.killed) + ([killed_vec] if killed_vec is not None else []),
        relation_sets=R_bar.relation_sets,
        presentation=None,
    )
    return RingMap(R_bar, target, images)


def induced_map(source: GradedRing, target: GradedRing, character_map) -> RingMap:
    """Ring map induced by a linear map of character spaces sending source lifts to target characters."""
    images = [target.character_coordinates(character_map(v)) for v in source.basis_vectors]
    return RingMap(source, target, images)


def chen_ruan(P: GitPresentation, generators: Sequence = ()) -> list:
    """Pairs ``(sector, ring)`` over all twisted sectors, untwisted first."""
    out = []
    for sector in twisted_sectors(P):
        R = ring_presentation(sector.presentation, build_fan(sector.presentation), generators)
        out.append((sector, R))
    return out
