import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import hypersurface_spec, projective, weighted_8_spec
from toric_transitions.cohomology import (
    GradedRing,
    Polynomial,
    chen_ruan,
    ideal_image,
    mult_kernel,
    narrow_by_interior_cones,
    restriction_map,
    ring_presentation,
    whole_space,
)
from toric_transitions.errors import NonvanishingAboveCap
from toric_transitions.fan import build_fan
from toric_transitions.transition import (
    base_generators,
    blowup_presentation,
    hat_generators,
    total_space_presentations,
)


def poly(terms):
    return Polynomial({tuple(k): Fraction(v) for k, v in terms.items()}, 2)


U, E = Polynomial.variable(2, 0), Polynomial.variable(2, 1)


def family_rings(m, k, d):
    spec = hypersurface_spec(m, k, d)
    hat = blowup_presentation(spec)
    T, T_bar, T_tilde = total_space_presentations(spec, hat)
    R_bar = ring_presentation(T_bar, build_fan(T_bar), hat_generators(1))
    R = ring_presentation(T, build_fan(T), base_generators(1))
    return hat, T, T_bar, R, R_bar


def hand_family_ring(m, k, d, top):
    rels = [E * U ** (m - k), U**m, (U * (-d) + E * (k - 1)) * E]
    return GradedRing(["u", "e"], rels, top)


def same_ideal(R1, R2):
    """Each ring's relations vanish in the other, and dimensions agree."""
    for a, b in ((R1, R2), (R2, R1)):
        for rel in a.relations:
            assert b.normal_form(rel).is_zero()
    return R1.dimensions() == R2.dimensions()


def test_projective_space_ring():
    for m in (2, 3, 5):
        R = ring_presentation(projective([1] * m), None, base_generators(1))
        assert R.names == ("u",)
        assert R.dimensions() == (1,) * m + (0,) * (R.top + 1 - m)
        assert not (R.variable(0) ** (m - 1)).is_zero()
        assert (R.variable(0) ** m).is_zero()


def test_family_ring_relations_and_basis():
    hat, T, T_bar, R, R_bar = family_rings(5, 2, 5)
    assert R_bar.names == ("u", "e")
    assert same_ideal(R_bar, hand_family_ring(5, 2, 5, R_bar.top))
    assert R_bar.total_dimension() == 8
    basis = sorted(tuple(m) for d in range(R_bar.top + 1) for m in R_bar.standard_monomials(d))
    assert basis == sorted([(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1), (1, 1), (2, 1)])
    assert sorted(R_bar.graded_basis()[4]) == ["e*u", "u^2"]


@pytest.mark.parametrize("m,k,d", [(5, 2, 5), (5, 4, 5), (4, 2, 1), (6, 3, 2), (5, 3, 4)])
def test_family_ring_matches_hand_relations(m, k, d):
    _, _, _, _, R_bar = family_rings(m, k, d)
    assert same_ideal(R_bar, hand_family_ring(m, k, d, R_bar.top))


@pytest.mark.parametrize("m,k,d,count", [(5, 2, 5, 2), (6, 3, 4, 2), (5, 4, 5, 1)])
def test_minimal_relations_and_narrow_generators(m, k, d, count):
    hat, T, T_bar, R, R_bar = family_rings(m, k, d)
    u, e = R_bar.variable("u"), R_bar.variable("e")
    rels = R_bar.minimal_relations()
    assert len(rels) == 3
    assert same_ideal(GradedRing(["u", "e"], rels, R_bar.top), hand_family_ring(m, k, d, R_bar.top))
    gens = narrow_by_interior_cones(T_bar, build_fan(T_bar), R_bar).minimal_generators()
    assert len(gens) == count
    target = ideal_image(R_bar, [u * (-d) + e * (k - 1), u**k])
    assert ideal_image(R_bar, gens) == target


def test_family_narrow_and_kernel():
    hat, T, T_bar, R, R_bar = family_rings(5, 2, 5)
    u, e = R_bar.variable("u"), R_bar.variable("e")
    uf = R_bar.u(hat.f_index)
    assert uf == u * (-5) + e
    narrow = narrow_by_interior_cones(T_bar, build_fan(T_bar), R_bar)
    expected = ideal_image(R_bar, [u * (-5) + e, u**2])
    assert narrow == expected
    image = ideal_image(R_bar, [uf])
    assert image.dimensions() == (0, 1, 1, 1, 1, 0)
    kernel = mult_kernel(R_bar, e)
    assert kernel == ideal_image(R_bar, [uf, u**3])
    assert not image.contains(u**3) and kernel.contains(u**3)
    assert (uf * e).is_zero()


def test_ideal_and_kernel_edge_cases():
    _, _, _, _, R_bar = family_rings(5, 2, 5)
    assert ideal_image(R_bar, [R_bar.one()]) == whole_space(R_bar)
    assert mult_kernel(R_bar, R_bar.zero()) == whole_space(R_bar)
    assert mult_kernel(R_bar, R_bar.one()).total_dimension() == 0


def test_total_space_narrow_is_the_fiber_ideal():
    spec = hypersurface_spec(5, 2, 5)
    hat = blowup_presentation(spec)
    T, _, _ = total_space_presentations(spec, hat)
    R = ring_presentation(T, build_fan(T), base_generators(1))
    narrow = narrow_by_interior_cones(T, build_fan(T), R)
    assert narrow == ideal_image(R, [R.variable("u")])
    assert narrow == ideal_image(R, [R.u(T.character_count - 1)])


def test_proper_narrow_is_whole_ring():
    P = projective([1, 1, 1])
    R = ring_presentation(P, None, base_generators(1))
    assert narrow_by_interior_cones(P, build_fan(P), R) == whole_space(R)


def test_restriction_sets_e_to_zero():
    _, _, _, R, R_bar = family_rings(5, 2, 5)
    i_star = restriction_map(R_bar, "e")
    assert i_star.target.names == ("u",)
    assert i_star.target.dimensions() == R.dimensions()
    assert i_star.apply(R_bar.variable("u")) == i_star.target.variable("u")
    assert i_star.apply(R_bar.variable("e")).is_zero()
    assert i_star.is_well_defined()


def test_restriction_of_free_variable_drops_binomially():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    R = GradedRing(["x", "y"], [x ** (4 - j) * y**j for j in range(5)], 3)
    S = restriction_map(R, "y").target
    assert R.dimensions() == (1, 2, 3, 4)
    assert S.dimensions() == (1, 1, 1, 1)


def test_weighted_sector_rings():
    X_secs = chen_ruan(projective([1, 1, 1, 2, 2, 1]), base_generators(1))
    assert [s.nu for s, _ in X_secs] == [(0,), (Fraction(1, 2),)]
    half = X_secs[1][1]
    assert half.dimensions() == (1, 1)
    assert (half.variable("u") ** 2).is_zero()

    spec = weighted_8_spec()
    hat = blowup_presentation(spec)
    _, T_bar, _ = total_space_presentations(spec, hat)
    secs = dict((s.nu, (s, R)) for s, R in chen_ruan(T_bar, hat_generators(1)))
    sector, R = secs[(Fraction(1, 2), Fraction(0))]
    assert same_ideal(R, GradedRing(["u", "e"], [U**2, (U * (-8) + E) * E], R.top))
    assert R.dimensions()[:3] == (1, 2, 1)
    u, e = R.variable("u"), R.variable("e")
    uf = u * (-8) + e
    image = ideal_image(R, [uf])
    assert image.dimension(1) == 1 and image.dimension(2) == 1
    i_star = restriction_map(R, "e")
    witness = uf * u
    assert not witness.is_zero()
    assert i_star.apply(witness).is_zero()


def test_cap_guard_raises():
    R = GradedRing(["x"], [], 2)
    with pytest.raises(NonvanishingAboveCap):
        R.dimensions()


def proper_presets():
    yield projective([1, 1, 1, 1])
    yield projective([1, 1, 2])
    yield projective([1, 1, 1, 2, 2, 1])
    from toric_transitions.git import GitPresentation

    yield GitPresentation(((1, 0), (1, 0), (1, 0), (0, 1), (0, 1)), (1, 1))


@pytest.mark.parametrize("P", list(proper_presets()), ids=["P3", "P112", "P111221", "P2xP1"])
def test_poincare_duality_dimensions(P):
    for _, R in chen_ruan(P):
        dims = R.dimensions()
        top = max(d for d, x in enumerate(dims) if x)
        assert all(dims[k] == dims[top - k] for k in range(top + 1))


def matrix(R, c, d):
    """Rows indexed by target monomials, columns by source monomials."""
    cols = [img.component(d + 1) for img in R.multiplication_matrix(c, d)]
    n = len(R.standard_monomials(d + 1))
    return [[col[i] if col else 0 for col in cols] for i in range(n)]


def compose(B, A):
    inner = len(A)
    cols = len(A[0]) if A else 0
    return [[sum((B[i][k] * A[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)] for i in range(len(B))]


@pytest.mark.parametrize("mkd", [(5, 2, 5), (5, 4, 5), (4, 3, 2)])
def test_multiplication_operators_commute(mkd):
    _, _, _, _, R = family_rings(*mkd)
    xs = [R.variable(a) for a in range(R.g)]
    for d in range(R.top):
        for a, b in product(range(R.g), repeat=2):
            A, Ab = matrix(R, xs[a], d), matrix(R, xs[b], d)
            B, Ba = matrix(R, xs[b], d + 1), matrix(R, xs[a], d + 1)
            assert compose(B, A) == compose(Ba, Ab)


def random_class(R, rng, d):
    vec = [Fraction(rng.randint(-3, 3)) for _ in R.standard_monomials(d)]
    return R.from_vector(d, vec)


@pytest.mark.parametrize("which", ["family", "sector"])
def test_restriction_is_ring_map(which):
    if which == "family":
        R = family_rings(5, 2, 5)[4]
    else:
        spec = weighted_8_spec()
        hat = blowup_presentation(spec)
        _, T_bar, _ = total_space_presentations(spec, hat)
        R = chen_ruan(T_bar, hat_generators(1))[1][1]
    f = restriction_map(R, "e")
    rng = random.Random(7)
    for _ in range(50):
        a, b = rng.randint(0, R.top), rng.randint(0, R.top)
        x, y = random_class(R, rng, a), random_class(R, rng, b)
        assert f.apply(x * y) == f.apply(x) * f.apply(y)


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=2), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
@settings(max_examples=100)
def test_normal_form_is_linear_and_multiplicative(p, q):
    R = family_rings(5, 2, 5)[4]
    x = R.linear_class(p)
    y = R.linear_class(q)
    assert x * y == y * x
    assert (x + y) * (x + y) == x * x + x * y * 2 + y * y
