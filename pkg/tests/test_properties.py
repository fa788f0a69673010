import warnings

from hypothesis import assume, given
from hypothesis import strategies as st

from builders import projective
from toric_transitions.cohomology import ideal_image, narrow_by_interior_cones, ring_presentation
from toric_transitions.errors import NonCrepantWall
from toric_transitions.fan import build_fan
from toric_transitions.transition import (
    TransitionSpec,
    base_generators,
    blowup_presentation,
    degenerate_filter,
    delta_polytope_points,
    hat_generators,
    support_function,
    total_space_presentations,
    verify_total_space,
    wall_chart,
)


@st.composite
def family_specs(draw, max_m=6):
    m = draw(st.integers(3, max_m))
    k = draw(st.integers(1, m - 1))
    d = draw(st.integers(max(k - 1, 1), m + 1))
    weights = draw(st.lists(st.integers(1, 2), min_size=m - 1, max_size=m - 1)) + [1]
    center = tuple(sorted(draw(st.permutations(range(m)))[:k]))
    return TransitionSpec(projective(weights), (0,) * (m - 1) + (d,), center)


@given(family_specs())
def test_total_space_narrow_equals_fibre_ideal(spec):
    hat = blowup_presentation(spec)
    T, _, _ = total_space_presentations(spec, hat)
    fan = build_fan(T)
    R = ring_presentation(T, fan, base_generators(1))
    uf = R.u(T.character_count - 1)
    assert narrow_by_interior_cones(T, fan, R) == ideal_image(R, [uf])


@given(family_specs(max_m=5))
def test_wall_crepancy_criterion(spec):
    hat = blowup_presentation(spec)
    _, _, T_tilde = total_space_presentations(spec, hat)
    with warnings.catch_warnings():
        warnings.simplefilter("error", NonCrepantWall)
        chart = wall_chart(T_tilde.characters, hat.omega_plus, hat.omega_minus, (0, -1))
    assert chart.pairing_sum == 0 and chart.crepant
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        blow = wall_chart(hat.characters, hat.omega_plus, hat.omega_minus)
    assert blow.pairing_sum == spec.k - 1
    assert any(issubclass(w.category, NonCrepantWall) for w in caught) == (spec.k >= 2)


def standing_hypotheses(spec, hat):
    """Codimension at least two, and both divisors Cartier and nef."""
    if spec.k < 2:
        return False
    X = hat.blowup(1)
    for fan, a in ((build_fan(spec.base), spec.divisor), (build_fan(X), spec.d_tilde_coefficients())):
        sf = support_function(fan, a)
        if not (sf.cartier and sf.nef):
            return False
    return True


@given(family_specs(max_m=5))
def test_structural_checks_hold(spec):
    hat = blowup_presentation(spec)
    assume(standing_hypotheses(spec, hat))
    checks = verify_total_space(spec, hat, *total_space_presentations(spec, hat))
    assert checks["cone_splittings"].ok
    assert checks["minus_cone_families"].ok and checks["plus_cones_over_blowup"].ok


@given(family_specs(max_m=5))
def test_fibre_and_exceptional_classes_multiply_to_zero(spec):
    if spec.k < 2:
        return
    hat = blowup_presentation(spec)
    _, T_bar, _ = total_space_presentations(spec, hat)
    R = ring_presentation(T_bar, build_fan(T_bar), hat_generators(1))
    assert (R.u(hat.f_index) * R.u(hat.e_index)).is_zero()


@given(family_specs(max_m=5))
def test_filter_consistency(spec):
    fan = build_fan(spec.base)
    pts = delta_polytope_points(spec.base, fan, spec.divisor)
    survivors, agrees = degenerate_filter(pts, spec, fan)
    assert agrees
    hat = blowup_presentation(spec)
    X = hat.blowup(1)
    assert len(delta_polytope_points(X, build_fan(X), spec.d_tilde_coefficients())) == len(survivors)


@st.composite
def proper_presentations(draw):
    """Weighted projective spaces and products of two projective spaces."""
    if draw(st.booleans()):
        weights = draw(st.lists(st.integers(1, 3), min_size=2, max_size=5))
        return projective(weights)
    p, q = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    from toric_transitions.git import GitPresentation

    return GitPresentation(tuple([(1, 0)] * (p + 1) + [(0, 1)] * (q + 1)), (1, 1))


@given(proper_presentations())
def test_poincare_duality_on_every_sector(P):
    from toric_transitions.cohomology import chen_ruan

    for _, R in chen_ruan(P):
        dims = R.dimensions()
        top = max(d for d, x in enumerate(dims) if x)
        assert dims == dims[: top + 1][::-1] + (0,) * (len(dims) - top - 1)
