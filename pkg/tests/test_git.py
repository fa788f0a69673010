import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import projective, quintic_spec
from toric_transitions.errors import NotUpwardClosed, ValidationFailure
from toric_transitions.exact import dot, rank
from toric_transitions.fan import build_fan
from toric_transitions.git import (
    GitPresentation,
    anticones,
    chamber_closure,
    divisor_class_data,
    extended_set,
    in_nef_cone,
    require_valid,
    validate,
)
from toric_transitions.transition import TransitionSpec, blowup_presentation, total_space_presentations


def rank_one_anticone(chars, omega, I):
    """Sign rule for open cones on a line."""
    vals = [chars[i][0] for i in I]
    if not vals:
        return omega == 0
    pos, neg = any(v > 0 for v in vals), any(v < 0 for v in vals)
    if pos and neg:
        return True
    if pos:
        return omega > 0
    if neg:
        return omega < 0
    return omega == 0


def scan_minimal(chars, omega):
    m = len(chars)
    hits = [set(I) for s in range(m + 1) for I in combinations(range(m), s) if rank_one_anticone(chars, omega, I)]
    return sorted((tuple(sorted(h)) for h in hits if not any(o < h for o in hits)), key=lambda j: (len(j), j))


def test_projective_plane_singletons():
    P = projective([1, 1, 1])
    assert P.minimal_anticones == ((0,), (1,), (2,))
    assert anticones(P).contains((0, 2))
    assert extended_set(P) == frozenset()
    assert validate(P).ok


def test_quintic_singletons():
    assert projective([1] * 5).minimal_anticones == tuple((i,) for i in range(5))


def test_weighted_singletons_match_scan():
    chars = ((1,), (1,), (1,), (2,), (2,), (1,))
    assert list(projective([1, 1, 1, 2, 2, 1]).minimal_anticones) == scan_minimal(chars, 1)


def test_opposite_characters_pass_all_checks():
    P = GitPresentation(((1,), (-1,)), (1,))
    rep = validate(P)
    assert rep.all_indices_anticone and rep.ok
    assert P.minimal_anticones == ((0,),)


def test_wall_sitting_stability_fails_dimension_check():
    P = GitPresentation(((1, 0), (1, 0), (0, 1), (0, 1)), (1, 0))
    rep = validate(P)
    assert not rep.full_dimensional and not rep.ok
    with pytest.raises(ValidationFailure):
        require_valid(P)


def test_upward_closure_failure_is_reported():
    with pytest.raises(NotUpwardClosed):
        anticones(GitPresentation(((1, 0), (-1, 1), (0, -1)), (0, 0)))


def test_extended_set_nonempty_at_minus_chamber():
    hat = blowup_presentation(TransitionSpec(projective([1] * 5), None, (0, 1)))
    P = hat.blowup(-1)
    assert extended_set(P) == frozenset({5})
    fan = build_fan(P)
    data = divisor_class_data(P, fan)
    assert data.xi[5] == (0, -1)
    # pairing table: 1 on itself, minus the cone coefficients on its minimal cone, zero elsewhere
    for i in range(P.character_count):
        expected = 1 if i == 5 else -data.minimal_cones[5].get(i, 0)
        assert dot(P.characters[i], data.xi[5]) == expected
    assert set(chamber_closure(P).rays) == {(0, -1), (1, 0)}
    assert data.theta_of(P.characters[5]) == (0,)


def test_quintic_total_space_minus_chamber_has_no_extended_vectors():
    spec = quintic_spec()
    hat = blowup_presentation(spec)
    _, T_bar, _ = total_space_presentations(spec, hat)
    assert extended_set(T_bar) == frozenset()


def test_projective_plane_class_data():
    P = projective([1, 1, 1])
    data = divisor_class_data(P, build_fan(P))
    assert data.extended_ample_cone.rays == ((1,),)
    assert data.mori_cone.rays == ((1,),)
    assert data.theta == ((1,),)


def test_blowup_ample_cone_generated_by_two_rays():
    hat = blowup_presentation(TransitionSpec(projective([1] * 5), None, (0, 1, 2, 3)))
    P = hat.blowup(1)
    data = divisor_class_data(P, build_fan(P))
    assert set(data.ample_cone.rays) == {(1, 1), (1, 0)}
    assert data.ample_cone.dual().dual() == data.ample_cone
    assert data.mori_cone == data.ample_cone.dual()
    assert in_nef_cone(data, (3, 3), P.characters)
    assert not in_nef_cone(data, (2, 3), P.characters)


def random_presentation(rng):
    r = rng.choice([1, 2])
    m = rng.randint(r + 1, 5)
    chars = tuple(tuple(rng.randint(-2, 3) for _ in range(r)) for _ in range(m))
    omega = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(r))
    return GitPresentation(chars, omega)


@given(st.integers(0, 10**6))
def test_upward_closure_on_random_supersets(seed):
    rng = random.Random(seed)
    P = random_presentation(rng)
    if not validate(P).ok:
        return
    m = P.character_count
    for _ in range(2):
        J = rng.choice(P.minimal_anticones)
        extra = [i for i in range(m) if rng.random() < 0.5]
        sup = sorted(set(J) | set(extra))
        assert P.is_strict_anticone(sup)
    for J in P.minimal_anticones:
        assert rank([P.characters[j] for j in J], P.torus_rank) == P.torus_rank


@given(st.lists(st.integers(-3, 3).filter(lambda x: x != 0), min_size=1, max_size=6), st.sampled_from([-2, -1, 1, 3]))
def test_rank_one_anticones_match_sign_rule(values, omega):
    chars = tuple((v,) for v in values)
    P = GitPresentation(chars, (omega,))
    assert list(P.minimal_anticones) == scan_minimal(chars, omega)
