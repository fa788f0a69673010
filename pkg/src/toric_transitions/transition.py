"""
Blow-ups along coordinate strata, total spaces of line bundles, and the
checks that tie them together.

Index conventions for a base presentation with ``m`` characters: the
blow-up presentation appends the exceptional character ``e`` at index
``m``; total-space presentations append the fibre character ``f`` at index
``m + 1`` (index ``m`` for the total space over the base itself).
"""

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor
from typing import Any, Optional, Sequence

from .cohomology import (
    NarrowSpace,
    ideal_image,
    induced_map,
    mult_kernel,
    narrow_by_interior_cones,
    ring_presentation,
)
from .cones import PolyCone
from .errors import (
    ToricError,
    CenterMeetsExtendedSet,
    CenterNotCone,
    ChamberChanged,
    InconsistentOnSharedFace,
    NoCommonWall,
    NonCrepantWall,
    OmegaOnWall,
    UnboundedPolytope,
    ValidationFailure,
)
from .exact import (
    as_fraction,
    determinant,
    dot,
    fvec,
    is_integral,
    nullspace,
    primitive,
    rank,
    smith_normal_form,
    solve,
    transpose,
    vadd,
    vscale,
    vsub,
)
from .fan import StackyFan, build_fan, classify_sectors_int_frac, interior_cones, twisted_sectors
from .git import (
    GitPresentation,
    chamber_closure,
    divisor_class_data,
    in_nef_cone,
    require_valid,
    validate,
)
from .lp import OPTIMAL, UNBOUNDED, linprog


@dataclass(frozen=True)
class Verdict:
    """A boolean outcome together with the object that justifies it."""

    ok: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self):
        return self.ok


# ----------------------------------------------------------------------------
# Specs and hat presentations


@dataclass(frozen=True)
class TransitionSpec:
    """
    Input of the pipeline.

    **Arguments:**
    - ``base``: presentation of ``X``.
    - ``divisor``: integer coefficients ``a_i`` of ``D = Σ a_i D_i``.
    - ``center``: 0-based indices whose common zero locus is blown up.
    - ``weights``: optional positive weights on the center (weighted blow-up).
    - ``epsilon``: optional explicit rational, otherwise selected exactly.
    """

    base: GitPresentation
    divisor: Optional[tuple] = None
    center: tuple = ()
    weights: Optional[tuple] = None
    epsilon: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(sorted(int(i) for i in self.center)))
        if self.divisor is not None:
            object.__setattr__(self, "divisor", tuple(int(a) for a in self.divisor))
            if len(self.divisor) != self.base.character_count:
                raise ValueError("one divisor coefficient per character is required")
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            if len(w) != len(self.center) or any(x <= 0 for x in w):
                raise ValueError("weights must be positive, one per center index")
            object.__setattr__(self, "weights", w)
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if len(set(self.center)) != len(self.center) or any(not 0 <= i < self.base.character_count for i in self.center):
            raise ValueError("center indices must be distinct and in range")

    @property
    def m(self) -> int:
        return self.base.character_count

    @property
    def r(self) -> int:
        return self.base.torus_rank

    @property
    def k(self) -> int:
        return len(self.center)

    @property
    def weight_map(self) -> dict:
        w = self.weights or (1,) * self.k
        return dict(zip(self.center, w))

    @property
    def weighted(self) -> bool:
        return self.weights is not None and any(x != 1 for x in self.weights)

    def d_tilde_coefficients(self) -> tuple:
        """Coefficients of ``D̃`` over the ``m + 1`` blow-up characters."""
        a = self.divisor
        w = self.weight_map
        ae = 1 + sum(w[i] * (a[i] - 1) for i in self.center)
        return tuple(a) + (ae,)


def hat_characters(spec: TransitionSpec) -> tuple:
    w = spec.weight_map
    r = spec.r
    chars = [tuple(d) + (w.get(i, 0),) for i, d in enumerate(spec.base.characters)]
    chars.append((0,) * r + (-1,))
    return tuple(chars)


def f_character(spec: TransitionSpec) -> tuple:
    """``D̂_f = −D̃`` in ``L̂∨``."""
    chars = hat_characters(spec)
    coeffs = spec.d_tilde_coefficients()
    total = [0] * (spec.r + 1)
    for c, d in zip(coeffs, chars):
        total = [t + c * x for t, x in zip(total, d)]
    return tuple(-t for t in total)


def base_f_character(spec: TransitionSpec) -> tuple:
    total = [0] * spec.r
    for a, d in zip(spec.divisor, spec.base.characters):
        total = [t + a * x for t, x in zip(total, d)]
    return tuple(-t for t in total)


@dataclass(frozen=True)
class HatPresentation:
    """
    Characters over ``L⊕Z`` for the blow-up and, when a divisor is present,
    the fibre character; plus the two stability vectors ``(ω, ±ε)``.
    """

    spec: TransitionSpec
    characters: tuple
    f_character: Optional[tuple]
    epsilon: Fraction
    critical_values: tuple
    omega_plus: tuple
    omega_minus: tuple
    permutation: tuple

    @property
    def e_index(self) -> int:
        return self.spec.m

    @property
    def f_index(self) -> int:
        return self.spec.m + 1

    def labels(self, with_f: bool = False) -> tuple:
        out = tuple(self.spec.base.labels) + ("E",)
        return out + ("F",) if with_f else out

    def blowup(self, sign: int) -> GitPresentation:
        omega = self.omega_plus if sign > 0 else self.omega_minus
        return GitPresentation(self.characters, omega, self.labels())

    def total(self, sign: int) -> GitPresentation:
        if self.f_character is None:
            raise ValueError("no divisor, so no total space")
        omega = self.omega_plus if sign > 0 else self.omega_minus
        return GitPresentation(self.characters + (self.f_character,), omega, self.labels(True))


def epsilon_select(hat_chars: Sequence[Sequence], omega: Sequence):
    """
    Half the smallest ``|t| > 0`` at which ``(ω, t)`` meets a cone spanned
    by at most ``r`` independent characters, or 1 when there is none.

    Returns ``(ε, signed critical values)``. Both ``(ω, ε)`` and ``(ω, -ε)``
    then stay inside one chamber each. Raises :class:`OmegaOnWall` when the
    line ``{(ω, t)}`` runs inside such a cone for arbitrarily small ``|t|``.
    """
    chars = [fvec(c) for c in hat_chars]
    R = len(chars[0])
    r = R - 1
    target = fvec(omega) + (Fraction(0),)
    crit = set()
    for s in range(1, r + 1):
        for J in combinations(range(len(chars)), s):
            vecs = [chars[j] for j in J]
            if rank(vecs, R) < s:
                continue
            A = [tuple(v[a] for v in vecs) + (Fraction(-int(a == R - 1)),) for a in range(R)]
            sol = solve(A, target, s + 1)
            if sol is None:
                continue
            null = nullspace(A, s + 1)
            if not null:
                c, t = sol[:s], sol[s]
                if t != 0 and all(x >= 0 for x in c):
                    crit.add(t)
                continue
            nvec = null[0]
            # c(t) = c0 + (t - t0)/n_t * n_c
            t0, nt = sol[s], nvec[s]
            lo, hi = None, None
            for j in range(s):
                slope = nvec[j] / nt
                base = sol[j] - t0 * slope
                # base + slope * t >= 0
                if slope == 0:
                    if base < 0:
                        lo, hi = Fraction(1), Fraction(0)
                    continue
                bound = -base / slope
                if slope > 0:
                    lo = bound if lo is None else max(lo, bound)
                else:
                    hi = bound if hi is None else min(hi, bound)
            if lo is not None and hi is not None and lo > hi:
                continue
            above = (lo is None or lo <= 0) and (hi is None or hi > 0)
            below = (lo is None or lo < 0) and (hi is None or hi >= 0)
            if above or below:
                raise OmegaOnWall(f"(ω, t) lies on the wall spanned by {list(J)} for small t")
            if lo is not None and lo > 0:
                crit.add(lo)
            if hi is not None and hi < 0:
                crit.add(hi)
    values = tuple(sorted(crit))
    eps = min(abs(t) for t in values) / 2 if values else Fraction(1)
    return eps, values


def _stability(omega, t):
    return tuple(omega) + (t,)


def blowup_presentation(spec: TransitionSpec) -> HatPresentation:
    """Hat characters, the fibre character, and an exactly chosen ``ε``."""
    base = spec.base
    require_valid(base, "base")
    fan = build_fan(base)
    if set(spec.center) & fan.S:
        raise CenterMeetsExtendedSet(f"center {list(spec.center)} meets the extended set {sorted(fan.S)}")
    if not fan.is_cone(spec.center):
        raise CenterNotCone(f"center {list(spec.center)} does not span a cone")
    chars = hat_characters(spec)
    fchar = f_character(spec) if spec.divisor is not None else None
    all_chars = chars + ((fchar,) if fchar is not None else ())
    eps, crit = epsilon_select(all_chars, base.stability)
    omega = base.stability
    if spec.epsilon is not None:
        user = spec.epsilon
        for sign in (1, -1):
            auto_p = GitPresentation(all_chars, _stability(omega, sign * eps))
            user_p = GitPresentation(all_chars, _stability(omega, sign * user))
            if auto_p.minimal_anticones != user_p.minimal_anticones:
                raise ChamberChanged(f"ε = {user} leaves the chamber selected by ε = {eps}")
        eps = user
    hat = HatPresentation(
        spec=spec,
        characters=chars,
        f_character=fchar,
        epsilon=eps,
        critical_values=crit,
        omega_plus=_stability(omega, eps),
        omega_minus=_stability(omega, -eps),
        permutation=tuple(spec.center) + tuple(i for i in range(spec.m) if i not in spec.center),
    )
    for sign in (1, -1):
        P = hat.blowup(sign)
        if not validate(P).ok:
            raise OmegaOnWall(f"blow-up presentation at sign {sign:+d} fails validation: {validate(P).failures}")
    return hat


def verify_blowup_fan(spec: TransitionSpec, hat: HatPresentation) -> dict:
    """Compare both blow-up fans with the cone lists predicted from the base fan."""
    base_fan = build_fan(spec.base)
    minus = build_fan(hat.blowup(-1))
    plus = build_fan(hat.blowup(1))
    e = hat.e_index
    center = set(spec.center)
    base_cones = set(base_fan.maximal_cones)
    minus_ok = set(minus.maximal_cones) == base_cones and minus.S == base_fan.S | {e}
    type1 = {c for c in base_cones if not center <= set(c)}
    type2 = set()
    for c in base_cones:
        if center <= set(c):
            for i in spec.center:
                type2.add(tuple(sorted((set(c) - {i}) | {e})))
    predicted = type1 | type2
    actual = set(plus.maximal_cones)
    plus_ok = predicted == actual
    mismatch = sorted(predicted ^ actual)
    n_without = sum(1 for c in base_cones if not center <= set(c))
    n_with = len(base_cones) - n_without
    return {
        "minus_equals_base": Verdict(minus_ok, sorted(set(minus.maximal_cones) ^ base_cones), "fan at ω₋ equals the base fan"),
        "plus_cone_families": Verdict(plus_ok, mismatch, "fan at ω₊ is the predicted blow-up fan"),
        "counts": {
            "type1": len(type1),
            "type2": len(type2),
            "total": len(actual),
            "formula": n_without + spec.k * n_with,
        },
    }


# ----------------------------------------------------------------------------
# Support functions and polytopes


@dataclass(frozen=True)
class SupportFunctionData:
    """
    Linear pieces ``m_σ`` of the support function of ``Σ a_i D_i``.

    ``cartier``: every ``m_σ`` is integral. ``convex``: every ``m_σ`` lies in
    the polytope, i.e. ``⟨m_σ, b̄_i⟩ ≥ −a_i`` for all rays. ``extended_ok``:
    the value at each extended vector is at least ``−a_j``.
    """

    m_sigma: dict
    cartier: bool
    convex: bool
    extended_ok: bool
    cartier_witness: Any = None
    convex_witness: Any = None
    extended_witness: Any = None
    fan: Optional[StackyFan] = field(default=None, compare=False, repr=False)

    def value(self, v: Sequence) -> Fraction:
        """``φ(v)`` for a vector in the support."""
        for cone, msig in self.m_sigma.items():
            rays = [self.fan.rays[i] for i in cone]
            coeffs = solve(transpose(rays), fvec(v), len(rays))
            if coeffs is not None and all(c >= 0 for c in coeffs):
                return dot(msig, v)
        raise ValueError(f"{v} is outside the support")

    @property
    def nef(self) -> bool:
        return self.convex and self.extended_ok


def support_function(fan: StackyFan, a: Sequence[int]) -> SupportFunctionData:
    """Solve ``⟨m_σ, b̄_i⟩ = −a_i`` on each maximal cone and test integrality and convexity."""
    a = fvec(a)
    n = fan.n
    m_sigma = {}
    for cone in fan.maximal_cones:
        rays = [fan.rays[i] for i in cone]
        sol = solve(rays, [-a[i] for i in cone], n)
        if sol is None or any(dot(fan.rays[i], sol) != -a[i] for i in cone):
            raise InconsistentOnSharedFace(f"no linear function on cone {list(cone)}")
        m_sigma[cone] = sol
    for s1, s2 in combinations(fan.maximal_cones, 2):
        for i in set(s1) & set(s2):
            if dot(m_sigma[s1], fan.rays[i]) != dot(m_sigma[s2], fan.rays[i]):
                raise InconsistentOnSharedFace(f"cones {list(s1)} and {list(s2)} disagree on ray {i}")
    cartier_w = next((c for c, msig in m_sigma.items() if not is_integral(msig)), None)
    convex_w = None
    for cone, msig in m_sigma.items():
        for i in range(len(a)):
            if i in fan.S:
                continue
            if dot(msig, fan.rays[i]) < -a[i]:
                convex_w = {"cone": list(cone), "ray": i, "value": dot(msig, fan.rays[i]), "bound": -a[i]}
                break
        if convex_w:
            break
    data = SupportFunctionData(m_sigma, cartier_w is None, convex_w is None, True, cartier_w, convex_w, None, fan)
    ext_w = None
    for j in sorted(fan.S):
        val = data.value(fan.rays[j])
        if val < -a[j]:
            ext_w = {"index": j, "value": val, "bound": -a[j]}
            break
    return SupportFunctionData(m_sigma, cartier_w is None, convex_w is None, ext_w is None, cartier_w, convex_w, ext_w, fan)


def delta_polytope_points(P: GitPresentation, fan: StackyFan, a: Sequence[int]) -> list:
    """Lattice points ``m`` of ``N∨`` with ``⟨m, b̄_i⟩ ≥ −a_i`` for every non-extended ``i``."""
    a = fvec(a)
    n = fan.n
    idx = [i for i in range(P.character_count) if i not in fan.S]
    # variables m+ (n), m- (n), slacks (len idx)
    A, b = [], []
    for k, i in enumerate(idx):
        ray = fan.rays[i]
        row = [Fraction(x) for x in ray] + [Fraction(-x) for x in ray] + [Fraction(-int(j == k)) for j in range(len(idx))]
        A.append(row)
        b.append(-a[i])
    bounds = []
    for c in range(n):
        lim = []
        for sgn in (1, -1):
            obj = [0] * (2 * n + len(idx))
            obj[c], obj[n + c] = sgn, -sgn
            status, x, val = linprog(obj, A, b)
            if status == UNBOUNDED:
                raise UnboundedPolytope("the polytope of sections is unbounded")
            if status != OPTIMAL:
                return []
            lim.append(sgn * val)
        hi, lo = lim
        bounds.append(range(ceil(lo), floor(hi) + 1))
    size = 1
    for rg in bounds:
        size *= len(rg)
    if size > 5_000_000:
        raise UnboundedPolytope(f"bounding box with {size} points is too large to enumerate")
    pts = []
    for mvec in product(*bounds):
        if all(dot(mvec, fan.rays[i]) >= -a[i] for i in idx):
            pts.append(tuple(mvec))
    return pts


def degenerate_filter(points: Sequence[Sequence[int]], spec: TransitionSpec, fan: Optional[StackyFan] = None):
    """
    Keep sections vanishing to weighted order at least ``Σ w_i − 1`` along the center.

    Returns ``(survivors, agrees)`` where ``agrees`` confirms that the same
    set is cut out by the exceptional inequality of the blown-up polytope.
    """
    fan = fan or build_fan(spec.base)
    a = spec.divisor
    w = spec.weight_map
    threshold = sum(w.values()) - 1
    b_e = [0] * fan.n
    for i in spec.center:
        b_e = [x + w[i] * y for x, y in zip(b_e, fan.rays[i])]
    survivors, agrees = [], True
    for mvec in points:
        order = sum(w[i] * (dot(mvec, fan.rays[i]) + a[i]) for i in spec.center)
        keep = order >= threshold
        alt = dot(mvec, b_e) + sum(w[i] * a[i] for i in spec.center) >= threshold
        agrees &= keep == alt
        if keep:
            survivors.append(tuple(mvec))
    return survivors, agrees


@dataclass(frozen=True)
class CrepancyResult:
    ok: bool
    mismatch: tuple
    certificate: dict

    def __bool__(self):
        return self.ok


def crepancy_check(spec: TransitionSpec, hat: HatPresentation, d_tilde: Optional[Sequence] = None) -> CrepancyResult:
    """
    Check ``q*(K_X + D) = K_X̃ + D̃`` as vectors of ``L̂∨``.

    Pullbacks are formed from support-function values at the exceptional
    ray, so the identity is tested against an independent computation of
    ``φ(b̄_e)``. ``d_tilde`` overrides the coefficients of ``D̃``.
    """
    fan = build_fan(spec.base)
    m, r = spec.m, spec.r
    chars = hat.characters
    w = spec.weight_map
    b_e = tuple(sum(w[i] * fan.rays[i][c] for i in spec.center) for c in range(fan.n))

    def combo(coeffs):
        out = (Fraction(0),) * (r + 1)
        for c, d in zip(coeffs, chars):
            out = vadd(out, vscale(Fraction(c), d))
        return out

    def pullback(a):
        phi = support_function(fan, a).value(b_e)
        return combo(tuple(a) + (-phi,))

    a = spec.divisor
    q_d = pullback(a)
    q_k = pullback((1,) * m)
    q_k = vscale(-1, q_k)
    K_tilde = combo((-1,) * (m + 1))
    dt_coeffs = tuple(d_tilde) if d_tilde is not None else spec.d_tilde_coefficients()
    D_tilde = combo(dt_coeffs)
    lhs = vadd(q_k, q_d)
    rhs = vadd(K_tilde, D_tilde)
    mismatch = vsub(lhs, rhs)
    sw = sum(w.values())
    d_e = chars[m]
    cert = {
        "q_star_D": q_d,
        "q_star_K": q_k,
        "K_tilde": K_tilde,
        "D_tilde": D_tilde,
        "D_tilde_coefficients": dt_coeffs,
        "q_star_D_minus_D_tilde": vsub(q_d, D_tilde),
        "expected_difference": vscale(sw - 1, d_e),
        "q_star_K_minus_K_tilde": vsub(q_k, K_tilde),
        "expected_canonical_difference": vscale(1 - sw, d_e),
    }
    ok = all(x == 0 for x in mismatch)
    ok &= cert["q_star_D_minus_D_tilde"] == cert["expected_difference"] or d_tilde is not None
    ok &= cert["q_star_K_minus_K_tilde"] == cert["expected_canonical_difference"]
    return CrepancyResult(ok, mismatch, cert)


# ----------------------------------------------------------------------------
# Total spaces


def total_space_presentations(spec: TransitionSpec, hat: HatPresentation):
    """``(T, T̄, T̃)``: total spaces over ``X``, the ω₋ partial compactification, and over ``X̃``."""
    if spec.divisor is None:
        raise ValueError("total spaces need a divisor")
    base = spec.base
    T = GitPresentation(base.characters + (base_f_character(spec),), base.stability, tuple(base.labels) + ("F",))
    T_bar = hat.total(-1)
    T_tilde = hat.total(1)
    for name, P in (("T", T), ("T_bar", T_bar), ("T_tilde", T_tilde)):
        require_valid(P, name)
    return T, T_bar, T_tilde


def explicit_beta_hat(spec: TransitionSpec, fan: StackyFan) -> tuple:
    """Columns ``β̂(e_i)``, ``β̂(e_e)``, ``β̂(e_f)`` written in the free coordinates of the base fan."""
    a = spec.divisor
    w = spec.weight_map
    cols = [tuple(fan.rays[i]) + (a[i],) for i in range(spec.m)]
    be = tuple(sum(w[i] * fan.rays[i][c] for i in spec.center) for c in range(fan.n))
    ae = spec.d_tilde_coefficients()[-1]
    cols.append(be + (ae,))
    cols.append((0,) * fan.n + (1,))
    return tuple(cols)


def verify_total_space(spec: TransitionSpec, hat: HatPresentation, T: GitPresentation, T_bar: GitPresentation, T_tilde: GitPresentation) -> dict:
    """Structural checks on the three total spaces; one :class:`Verdict` per check."""
    m = spec.m
    e, f = hat.e_index, hat.f_index
    out = {}

    # (a) cones over the blow-up fan
    try:
        x_plus = build_fan(hat.blowup(1))
        tt = build_fan(T_tilde)
        predicted = {tuple(sorted(c + (f,))) for c in x_plus.maximal_cones}
        actual = set(tt.maximal_cones)
        out["plus_cones_over_blowup"] = Verdict(predicted == actual, sorted(predicted ^ actual), "T̃ cones are blow-up cones joined with f")
    except ValidationFailure as exc:
        out["plus_cones_over_blowup"] = Verdict(False, str(exc), "T̃ presentation invalid")
        tt = None

    # (b) the two cone families at ω₋
    base_fan = build_fan(spec.base)
    try:
        tb = build_fan(T_bar)
        center = set(spec.center)
        type1 = {tuple(sorted(c + (f,))) for c in base_fan.maximal_cones}
        type2 = {tuple(sorted(c + (e,))) for c in base_fan.maximal_cones if center <= set(c)}
        actual = set(tb.maximal_cones)
        ok = (type1 | type2) == actual and tb.S == base_fan.S
        out["minus_cone_families"] = Verdict(ok, sorted((type1 | type2) ^ actual), f"{len(type1)} type (1) and {len(type2)} type (2) cones")
    except ValidationFailure as exc:
        out["minus_cone_families"] = Verdict(False, str(exc), "T̄ presentation invalid")

    # (c) unique interior ray
    if tt is not None:
        rays = [c for c in interior_cones(tt) if len(c) == 1]
        out["unique_interior_ray"] = Verdict(rays == [(f,)], rays, "interior rays of the T̃ fan")
    else:
        out["unique_interior_ray"] = Verdict(False, None, "T̃ fan unavailable")

    # (d) sector bijection
    try:
        bar_sectors = twisted_sectors(T_bar)
        t_sectors = twisted_sectors(T)
        ints, fracs = classify_sectors_int_frac(bar_sectors, e, t_sectors)
        out["sector_bijection"] = Verdict(
            True,
            {"int": [list(map(str, s.nu)) for s in ints], "frac": [list(map(str, s.nu)) for s in fracs]},
            "integral sectors of T̄ are the sectors of T",
        )
    except Exception as exc:  # reported, not raised
        out["sector_bijection"] = Verdict(False, str(exc), "sector matching failed")

    # (e) cone splittings
    r = spec.r
    down = (0,) * r + (-1,)
    try:
        cT = chamber_closure(T)
        cTb = chamber_closure(T_bar)
        lifted = [tuple(g) + (0,) for g in cT.generators] + [down]
        product_cone = PolyCone.from_generators(lifted, r + 1)
        ext_ok = product_cone == cTb
        facets_lifted = sorted([tuple(n) + (0,) for n in cT.inequalities] + [down])
        facet_ok = sorted(cTb.inequalities) == facets_lifted
        dT = divisor_class_data(T, build_fan(T))
        dTb = divisor_class_data(T_bar, build_fan(T_bar))
        amp = PolyCone.from_generators([tuple(g) + (0,) for g in dT.ample_cone.generators] + [down], r + 1)
        mori = PolyCone.from_generators([tuple(g) + (0,) for g in dT.mori_cone.generators] + [down], r + 1)
        ok = ext_ok and facet_ok and amp == dTb.ample_cone and mori == dTb.mori_cone
        out["cone_splittings"] = Verdict(
            ok,
            {
                "extended_ample_T_bar": [list(v) for v in cTb.rays],
                "extended_ample_T": [list(v) for v in cT.rays],
                "mori_T_bar": [list(v) for v in dTb.mori_cone.rays],
                "mori_T": [list(v) for v in dT.mori_cone.rays],
            },
            "cones at ω₋ split off the ray (0,-1)",
        )
    except ValidationFailure as exc:
        out["cone_splittings"] = Verdict(False, str(exc), "cone data unavailable")

    # exactness of the explicit quotient map over L⊕Z
    bh = explicit_beta_hat(spec, base_fan)
    chars = T_bar.characters
    comp = [[sum(bh[i][a] * chars[i][c] for i in range(m + 2)) for c in range(r + 1)] for a in range(base_fan.n + 1)]
    exact_zero = all(x == 0 for row in comp for x in row)
    snf = smith_normal_form(transpose(bh))
    surjective = all(d == 1 for d in snf.diagonal) and len(snf.diagonal) == base_fan.n + 1 and not base_fan.torsion
    out["explicit_quotient_map"] = Verdict(exact_zero and (surjective or bool(base_fan.torsion)), {"composition_zero": exact_zero, "unimodular": surjective}, "explicit β̂ kills the characters")
    return out


# ----------------------------------------------------------------------------
# Wall chart


@dataclass(frozen=True)
class WallChart:
    e: tuple
    pairings: tuple
    pairing_sum: int
    crepant: bool
    frak_c: Fraction
    wall_basis: tuple
    p_plus_last: tuple
    p_minus_last: tuple
    c_exponents: tuple
    wall_basis_in_wall_cone: bool

    def as_dict(self) -> dict:
        return {
            "e": list(self.e),
            "pairings": list(self.pairings),
            "pairing_sum": self.pairing_sum,
            "crepant": self.crepant,
            "frak_c": str(self.frak_c),
            "wall_basis": [list(p) for p in self.wall_basis],
            "p_plus_last": list(self.p_plus_last),
            "p_minus_last": list(self.p_minus_last),
            "c_exponents": [str(c) for c in self.c_exponents],
            "wall_basis_in_wall_cone": self.wall_basis_in_wall_cone,
        }


def frak_c(pairings: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for p in pairings:
        if p != 0:
            out *= Fraction(p) ** p
    return out


def _lattice_search(cone: PolyCone, origin, basis, bound=4):
    """Lattice point ``origin + Σ z_i basis_i`` in ``cone`` with the smallest ``Σ|z_i|``."""
    best = None
    for z in product(range(-bound, bound + 1), repeat=len(basis)):
        p = tuple(origin)
        for zi, b in zip(z, basis):
            p = tuple(x + zi * y for x, y in zip(p, b))
        if cone.contains(p):
            key = (sum(abs(x) for x in z), z)
            if best is None or key < best[0]:
                best = (key, p)
    return None if best is None else best[1]


def wall_chart(characters: Sequence[Sequence[int]], omega_plus: Sequence, omega_minus: Sequence, p_minus_last: Optional[Sequence[int]] = None) -> WallChart:
    """
    Primitive wall normal, the constant ``𝔠``, and the exponents of the
    change of variables between the two chambers.
    """
    plus = GitPresentation(characters, omega_plus)
    minus = GitPresentation(characters, omega_minus)
    cp, cm = chamber_closure(plus), chamber_closure(minus)
    R = len(characters[0])
    normal = None
    for n in cp.inequalities:
        neg = tuple(-x for x in n)
        if neg in cm.inequalities:
            face = cp.face(n)
            if face.cone_dimension == R - 1 and face == cm.face(neg):
                normal = n
                break
    if normal is None:
        raise NoCommonWall("the chambers of ω₊ and ω₋ share no facet")
    e = primitive(normal)
    if dot(e, plus.stability) < 0:
        e = tuple(-x for x in e)
    pairings = tuple(dot(c, e) for c in characters)
    total = sum(pairings)
    if total != 0:
        warnings.warn(f"wall with pairing sum {total} is not crepant", NonCrepantWall, stacklevel=2)
    # lattice basis of e-perp
    snf = smith_normal_form([e])
    Rm = snf.R
    lattice = [tuple(Rm[a][c] for a in range(R)) for c in range(1, R)]
    first = tuple(Rm[a][0] for a in range(R))
    sign = dot(e, first)
    wall_cone = cp.face(e)
    wall_basis = None
    in_cone = True
    rays = [tuple(v) for v in wall_cone.rays]
    if len(rays) == R - 1 and not wall_cone.lineality:
        coords = [solve(transpose(lattice), r, R - 1) for r in rays]
        if all(c is not None for c in coords) and abs(determinant(coords)) == 1:
            wall_basis = tuple(sorted(rays))
    if wall_basis is None:
        pts = []
        for z in product(range(-3, 4), repeat=R - 1):
            p = tuple(sum(zi * b[a] for zi, b in zip(z, lattice)) for a in range(R))
            if any(p) and wall_cone.contains(p):
                pts.append(p)
        pts.sort(key=lambda p: (sum(abs(x) for x in p), p))
        for combo in combinations(pts, R - 1):
            coords = [solve(transpose(lattice), p, R - 1) for p in combo]
            if abs(determinant(coords)) == 1:
                wall_basis = tuple(combo)
                break
    if wall_basis is None:
        wall_basis, in_cone = tuple(lattice), False
    # vectors pairing to ±1 with e
    unit = tuple(x * sign for x in first)  # e·unit = 1
    p_plus = _lattice_search(cp, unit, wall_basis)
    if p_minus_last is not None and dot(e, p_minus_last) == -1 and cm.contains(p_minus_last):
        p_minus = tuple(p_minus_last)
    else:
        p_minus = _lattice_search(cm, tuple(-x for x in unit), wall_basis)
    if p_plus is None or p_minus is None:
        raise NoCommonWall("no integral basis adapted to the wall was found")
    cexp = solve(transpose(wall_basis), vadd(p_plus, p_minus), R - 1)
    return WallChart(e, pairings, total, total == 0, frak_c(pairings), tuple(wall_basis), p_plus, p_minus, tuple(cexp), in_cone)


# ----------------------------------------------------------------------------
# Conditions on narrow cohomology


def hat_generators(r: int) -> list:
    names = ["u"] if r == 1 else [f"u{a + 1}" for a in range(r)]
    gens = [(names[a], tuple(int(b == a) for b in range(r)) + (0,)) for a in range(r)]
    gens.append(("e", (0,) * r + (-1,)))
    return gens


def base_generators(r: int) -> list:
    names = ["u"] if r == 1 else [f"u{a + 1}" for a in range(r)]
    return [(names[a], tuple(int(b == a) for b in range(r))) for a in range(r)]


@dataclass
class SectorCheck:
    nu: tuple
    ring_bar: Any
    ring_base: Any
    uf_image: NarrowSpace
    narrow_base: NarrowSpace
    narrow_bar: NarrowSpace
    kernel_ue_narrow: NarrowSpace
    c1: Verdict
    c2: Verdict
    restriction_well_defined: bool
    base_narrow_agrees: bool


@dataclass
class ConditionsResult:
    c1: Verdict
    c2: Verdict
    sectors: list
    frac_sectors_vanish: Verdict


def check_conditions(T: GitPresentation, T_bar: GitPresentation, e_index: Optional[int] = None, f_index: Optional[int] = None) -> ConditionsResult:
    """
    Decide both conditions sector by sector.

    (1) restriction ``u_f H*(T̄_ν) -> H*_nar(T_ν)`` is bijective for each
    integral sector; (2) ``u_f H*(T̄_ν)`` equals ``ker(u_e·)`` on the narrow
    part of ``H*(T̄_ν)``.
    """
    m2 = T_bar.character_count
    e = m2 - 2 if e_index is None else e_index
    f = m2 - 1 if f_index is None else f_index
    r = T.torus_rank
    d_e = T_bar.characters[e]
    d_f = T_bar.characters[f]
    t_f = T.characters[-1]
    bar_sectors = twisted_sectors(T_bar)
    base_sectors = {tuple(s.nu): s for s in twisted_sectors(T)}
    ints, fracs = classify_sectors_int_frac(bar_sectors, e, list(base_sectors.values()))
    project = lambda v: tuple(v[:r])
    checks = []
    c1_fail, c2_fail = None, None
    for sb in ints:
        nu = tuple(sb.nu[:r])
        sT = base_sectors[nu]
        Rb = ring_presentation(sb.presentation, build_fan(sb.presentation), hat_generators(r))
        Rt = ring_presentation(sT.presentation, build_fan(sT.presentation), base_generators(r))
        uf = Rb.character_class(d_f)
        ue = Rb.character_class(d_e)
        W = ideal_image(Rb, [uf], ["u_f"])
        istar = induced_map(Rb, Rt, project)
        well = istar.is_well_defined()
        narrow_T = narrow_by_interior_cones(sT.presentation, Rt.fan, Rt)
        narrow_T_uf = ideal_image(Rt, [Rt.character_class(t_f)], ["u_f"])
        kernel = istar.kernel_on(W)
        image = istar.image(W)
        if kernel.total_dimension():
            v1 = Verdict(False, {"sector": [str(x) for x in sb.nu], "kernel_class": str(kernel.all_basis_classes()[0])}, "restriction is not injective")
        elif image != narrow_T:
            missing = image.missing_from(narrow_T)
            v1 = Verdict(False, {"sector": [str(x) for x in sb.nu], "missing_class": str(missing)}, "restriction is not onto the narrow part")
        else:
            v1 = Verdict(True, {"sector": [str(x) for x in sb.nu], "dimensions": list(W.dimensions())}, "restriction is an isomorphism")
        narrow_bar = narrow_by_interior_cones(sb.presentation, Rb.fan, Rb)
        K = mult_kernel(Rb, ue).intersect(narrow_bar)
        if K == W:
            v2 = Verdict(True, {"sector": [str(x) for x in sb.nu], "dimensions": list(W.dimensions())}, "kernel of u_e on the narrow part equals u_f H*")
        else:
            extra = W.missing_from(K)
            lost = K.missing_from(W)
            v2 = Verdict(
                False,
                {"sector": [str(x) for x in sb.nu], "extra_kernel_class": str(extra) if extra else None, "missing_class": str(lost) if lost else None},
                "kernel of u_e on the narrow part differs from u_f H*",
            )
        checks.append(SectorCheck(sb.nu, Rb, Rt, W, narrow_T, narrow_bar, K, v1, v2, well, narrow_T == narrow_T_uf))
        if not v1.ok and c1_fail is None:
            c1_fail = v1
        if not v2.ok and c2_fail is None:
            c2_fail = v2
    bad_frac = []
    for sb in fracs:
        Rb = ring_presentation(sb.presentation, build_fan(sb.presentation), hat_generators(r))
        W = ideal_image(Rb, [Rb.character_class(d_f)])
        if W.total_dimension():
            bad_frac.append([str(x) for x in sb.nu])
    frac_v = Verdict(not bad_frac, bad_frac, "u_f H* vanishes on non-integral sectors")
    c1 = c1_fail if c1_fail is not None else Verdict(True, [c.c1.witness for c in checks], "holds on every integral sector")
    c2 = c2_fail if c2_fail is not None else Verdict(True, [c.c2.witness for c in checks], "holds on every integral sector")
    return ConditionsResult(c1, c2, checks, frac_v)


# ----------------------------------------------------------------------------
# Full report


def plain(obj):
    """Convert verdicts, rationals and tuples into JSON-ready values."""
    if isinstance(obj, Verdict):
        return {"ok": obj.ok, "witness": plain(obj.witness), "detail": obj.detail}
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [plain(x) for x in items]
    if hasattr(obj, "as_dict"):
        return plain(obj.as_dict())
    return str(obj)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ToricError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


def _flags(fan: StackyFan, P: GitPresentation, coeffs) -> dict:
    sf = support_function(fan, coeffs)
    x = [0] * P.torus_rank
    for c, d in zip(coeffs, P.characters):
        x = [a + c * b for a, b in zip(x, d)]
    ample = in_nef_cone(divisor_class_data(P, fan), x, P.characters)
    return {
        "cartier": Verdict(sf.cartier, plain(sf.cartier_witness) if not sf.cartier else {str(list(c)): plain(v) for c, v in sf.m_sigma.items()}, "every linear piece is integral"),
        "convex": Verdict(sf.convex, plain(sf.convex_witness), "linear pieces bound the support function from below"),
        "extended_ok": Verdict(sf.extended_ok, plain(sf.extended_witness), "values at extended vectors"),
        "nef": Verdict(sf.nef, {"class": x}, "convex and extended conditions"),
        "nef_cone_membership": Verdict(ample, {"class": x}, "class lies in the closed ample cone"),
    }


@dataclass
class TransitionReport:
    spec: TransitionSpec
    hat: HatPresentation
    validation: dict
    nef: dict
    crepancy: CrepancyResult
    blowup_fan: dict
    total_space: dict
    polytope: dict
    wall_chart: Optional[WallChart]
    blowup_wall: Optional[WallChart]
    conditions: ConditionsResult
    conventions: dict

    @property
    def c1(self) -> bool:
        return self.conditions.c1.ok

    @property
    def c2(self) -> bool:
        return self.conditions.c2.ok

    def summary(self) -> dict:
        return {
            "crepancy": self.crepancy.ok,
            "nef_D": self.nef["D"]["nef"].ok,
            "nef_D_tilde": self.nef["D_tilde"]["nef"].ok,
            "blowup_fan": all(v.ok for v in self.blowup_fan.values() if isinstance(v, Verdict)),
            "total_space": all(v.ok for v in self.total_space.values()),
            "condition_1": self.c1,
            "condition_2": self.c2,
        }

    def as_dict(self) -> dict:
        cond = self.conditions
        return plain(
            {
                "validation": self.validation,
                "epsilon": self.hat.epsilon,
                "critical_values": self.hat.critical_values,
                "hat_characters": self.hat.characters,
                "f_character": self.hat.f_character,
                "nef": self.nef,
                "crepancy": {"ok": self.crepancy.ok, "mismatch": self.crepancy.mismatch, "certificate": self.crepancy.certificate},
                "blowup_fan": self.blowup_fan,
                "total_space": self.total_space,
                "polytope": self.polytope,
                "wall_chart": self.wall_chart.as_dict() if self.wall_chart else None,
                "blowup_wall": self.blowup_wall.as_dict() if self.blowup_wall else None,
                "conditions": {
                    "condition_1": cond.c1,
                    "condition_2": cond.c2,
                    "fractional_sectors_vanish": cond.frac_sectors_vanish,
                    "sectors": [
                        {
                            "nu": s.nu,
                            "ring": s.ring_bar.describe(),
                            "u_f_image": s.uf_image.describe(),
                            "narrow_T": s.narrow_base.describe(),
                            "narrow_T_bar": s.narrow_bar.describe(),
                            "kernel_u_e_narrow": s.kernel_ue_narrow.describe(),
                            "restriction_well_defined": s.restriction_well_defined,
                            "narrow_matches_u_f_ideal": s.base_narrow_agrees,
                            "condition_1": s.c1,
                            "condition_2": s.c2,
                        }
                        for s in cond.sectors
                    ],
                },
                "summary": self.summary(),
                "conventions": self.conventions,
            }
        )


def transition_report(spec: TransitionSpec) -> TransitionReport:
    """Run every stage and collect the verdicts; the first hard error is tagged with its stage."""
    if spec.divisor is None:
        raise ValueError("a transition needs a divisor")
    _stage("base", require_valid, spec.base, "base")
    hat = _stage("blowup", blowup_presentation, spec)
    T, T_bar, T_tilde = _stage("total_spaces", total_space_presentations, spec, hat)
    X_tilde = hat.blowup(1)
    validation = {name: validate(P).as_dict() for name, P in (("X", spec.base), ("X_tilde", X_tilde), ("T", T), ("T_bar", T_bar), ("T_tilde", T_tilde))}
    base_fan = build_fan(spec.base)
    tilde_fan = build_fan(X_tilde)
    nef = {
        "D": _stage("nef", _flags, base_fan, spec.base, spec.divisor),
        "D_tilde": _stage("nef", _flags, tilde_fan, X_tilde, spec.d_tilde_coefficients()),
    }
    crep = _stage("crepancy", crepancy_check, spec, hat)
    blowup_fan = _stage("blowup_fan", verify_blowup_fan, spec, hat)
    total = _stage("total_spaces", verify_total_space, spec, hat, T, T_bar, T_tilde)
    polytope = {}
    try:
        pts = delta_polytope_points(spec.base, base_fan, spec.divisor)
        survivors, agrees = degenerate_filter(pts, spec, base_fan)
        tilde_pts = delta_polytope_points(X_tilde, tilde_fan, spec.d_tilde_coefficients())
        polytope = {
            "delta_D_points": len(pts),
            "filter_survivors": len(survivors),
            "delta_D_tilde_points": len(tilde_pts),
            "filter_agreement": Verdict(agrees and len(survivors) == len(tilde_pts), {"survivors": len(survivors), "delta_D_tilde": len(tilde_pts)}, "coefficient filter matches the blown-up polytope"),
        }
    except UnboundedPolytope as exc:
        polytope = {"unbounded": str(exc)}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCrepantWall)
        chart = _stage("wall_chart", wall_chart, T_tilde.characters, hat.omega_plus, hat.omega_minus, (0,) * spec.r + (-1,))
        bchart = _stage("wall_chart", wall_chart, hat.characters, hat.omega_plus, hat.omega_minus, (0,) * spec.r + (-1,))
    cond = _stage("conditions", check_conditions, T, T_bar, hat.e_index, hat.f_index)
    conventions = {
        "indices": "0-based; e is index m, f is index m+1",
        "center_first_permutation": hat.permutation,
        "ring_generators": "u (or u1..ur) dual to the base torus, e = (0,...,0,-1)",
        "degrees": "cohomological, twice the polynomial degree",
        "age": "sector labels use the sum of fractional pairings",
        "weighted_blowup": "experimental" if spec.weighted else "no",
        "wall_basis": chart.wall_basis,
    }
    return TransitionReport(spec, hat, validation, nef, crep, blowup_fan, total, polytope, chart, bchart, cond, conventions)
