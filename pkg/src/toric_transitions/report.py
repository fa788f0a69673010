"""
Input documents, presets, pipeline dispatch, and deterministic reports.

Documents are JSON objects. Rationals travel as integers or ``"p/q"``
strings so that no value ever passes through a float.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .cohomology import chen_ruan, narrow_by_interior_cones, ring_presentation
from .errors import ParseError, SchemaError, ToricError, UnknownPreset, ValidationFailure
from .fan import build_fan, interior_cones
from .git import GitPresentation, validate
from .transition import (
    TransitionSpec,
    base_generators,
    blowup_presentation,
    hat_generators,
    plain,
    total_space_presentations,
    transition_report,
)

REQUESTS = ("validate", "fan", "cohomology", "transition")
SPACES = ("X", "X_tilde", "T", "T_bar", "T_tilde")
TOP_KEYS = {"torus_rank", "characters", "stability", "divisor", "blowup", "request", "options", "labels"}
BLOWUP_KEYS = {"center", "weights", "epsilon"}
OPTION_KEYS = {"narrow", "sectors", "space"}

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2


@dataclass(frozen=True)
class InputDocument:
    torus_rank: int
    characters: tuple
    stability: tuple
    divisor: Optional[tuple] = None
    center: Optional[tuple] = None
    weights: Optional[tuple] = None
    epsilon: Optional[Fraction] = None
    request: str = "validate"
    narrow: bool = False
    sectors: bool = False
    space: str = "X"
    labels: Optional[tuple] = None

    @property
    def m(self) -> int:
        return len(self.characters)

    @property
    def r(self) -> int:
        return self.torus_rank

    def presentation(self) -> GitPresentation:
        return GitPresentation(self.characters, self.stability, self.labels)

    def transition_spec(self) -> TransitionSpec:
        if self.divisor is None or self.center is None:
            raise SchemaError("a transition needs both divisor and blowup.center", "blowup")
        return TransitionSpec(self.presentation(), self.divisor, self.center, self.weights, self.epsilon)

    def with_request(self, request: str, **options) -> "InputDocument":
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values["request"] = request
        values.update(options)
        return InputDocument(**values)

    def to_json_object(self) -> dict:
        obj = {
            "torus_rank": self.torus_rank,
            "characters": [list(c) for c in self.characters],
            "stability": [rational_string(x) for x in self.stability],
            "request": self.request,
            "options": {"narrow": self.narrow, "sectors": self.sectors, "space": self.space},
        }
        if self.divisor is not None:
            obj["divisor"] = list(self.divisor)
        if self.center is not None:
            blow = {"center": list(self.center)}
            if self.weights is not None:
                blow["weights"] = list(self.weights)
            if self.epsilon is not None:
                blow["epsilon"] = rational_string(self.epsilon)
            obj["blowup"] = blow
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        return obj


# ----------------------------------------------------------------------------
# Parsing


def rational_string(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{key} must be an integer", key)
    return value


def _int_list(value, key: str) -> tuple:
    if not isinstance(value, list):
        raise SchemaError(f"{key} must be an array", key)
    return tuple(_int(v, f"{key}[{i}]") for i, v in enumerate(value))


def _rational(value, key: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"{key} must be an integer or a 'p/q' string", key)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        parts = value.strip().split("/")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise SchemaError(f"{key}: cannot read {value!r} as a rational", key) from None
        if len(nums) == 1:
            return Fraction(nums[0])
        if len(nums) == 2:
            if nums[1] == 0:
                raise SchemaError(f"{key}: zero denominator in {value!r}", key)
            return Fraction(nums[0], nums[1])
    raise SchemaError(f"{key} must be an integer or a 'p/q' string", key)


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise SchemaError(f"duplicate key {k!r}", k)
        out[k] = v
    return out


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where or 'document'} must be an object", where or None)
    for k in sorted(obj):
        if k not in allowed:
            name = f"{where}.{k}" if where else k
            raise SchemaError(f"unknown key {name!r}", name)


def parse_input(text: str) -> InputDocument:
    """Strictly parse a JSON input document."""
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_json_object(obj)


def from_json_object(obj) -> InputDocument:
    _check_keys(obj, TOP_KEYS, "")
    for key in ("torus_rank", "characters", "stability"):
        if key not in obj:
            raise SchemaError(f"missing key {key!r}", key)
    r = _int(obj["torus_rank"], "torus_rank")
    if r < 1:
        raise SchemaError("torus_rank must be positive", "torus_rank")
    if not isinstance(obj["characters"], list) or not obj["characters"]:
        raise SchemaError("characters must be a non-empty array", "characters")
    chars = []
    for i, row in enumerate(obj["characters"]):
        key = f"characters[{i}]"
        vec = _int_list(row, key)
        if len(vec) != r:
            raise SchemaError(f"{key} has length {len(vec)}, expected {r}", key)
        chars.append(vec)
    stab = obj["stability"]
    if not isinstance(stab, list) or len(stab) != r:
        raise SchemaError(f"stability must be an array of length {r}", "stability")
    stability = tuple(_rational(v, f"stability[{i}]") for i, v in enumerate(stab))
    m = len(chars)
    divisor = None
    if "divisor" in obj:
        divisor = _int_list(obj["divisor"], "divisor")
        if len(divisor) != m:
            raise SchemaError(f"divisor has length {len(divisor)}, expected {m}", "divisor")
    center = weights = epsilon = None
    if "blowup" in obj:
        blow = obj["blowup"]
        _check_keys(blow, BLOWUP_KEYS, "blowup")
        if "center" not in blow:
            raise SchemaError("missing key 'blowup.center'", "blowup.center")
        center = _int_list(blow["center"], "blowup.center")
        if len(set(center)) != len(center):
            raise SchemaError("blowup.center indices must be distinct", "blowup.center")
        for i, c in enumerate(center):
            if not 0 <= c < m:
                raise SchemaError(f"blowup.center[{i}] = {c} is out of range", f"blowup.center[{i}]")
        if "weights" in blow:
            weights = _int_list(blow["weights"], "blowup.weights")
            if len(weights) != len(center) or any(w <= 0 for w in weights):
                raise SchemaError("blowup.weights must be positive, one per center index", "blowup.weights")
        if "epsilon" in blow:
            epsilon = _rational(blow["epsilon"], "blowup.epsilon")
            if epsilon <= 0:
                raise SchemaError("blowup.epsilon must be positive", "blowup.epsilon")
    request = obj.get("request", "validate")
    if request not in REQUESTS:
        raise SchemaError(f"request must be one of {', '.join(REQUESTS)}", "request")
    opts = obj.get("options", {})
    _check_keys(opts, OPTION_KEYS, "options")
    flags = {}
    for key in ("narrow", "sectors"):
        v = opts.get(key, False)
        if not isinstance(v, bool):
            raise SchemaError(f"options.{key} must be a boolean", f"options.{key}")
        flags[key] = v
    space = opts.get("space", "X")
    if space not in SPACES:
        raise SchemaError(f"options.space must be one of {', '.join(SPACES)}", "options.space")
    labels = None
    if "labels" in obj:
        labels = obj["labels"]
        if not isinstance(labels, list) or len(labels) != m or not all(isinstance(x, str) for x in labels):
            raise SchemaError(f"labels must be {m} strings", "labels")
        labels = tuple(labels)
    return InputDocument(r, tuple(chars), stability, divisor, center, weights, epsilon, request, flags["narrow"], flags["sectors"], space, labels)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize(doc: InputDocument) -> str:
    return canonical_json(doc.to_json_object())


# ----------------------------------------------------------------------------
# Presets


def _hypersurface(chars, d_last, k):
    m = len(chars)
    a = (0,) * (m - 1) + (d_last,)
    return InputDocument(1, tuple((c,) for c in chars), (Fraction(1),), a, tuple(range(k)), request="transition")


def _param(params, key, default, cast=int):
    if key not in params:
        return default
    value = params[key]
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise SchemaError(f"preset parameter {key}={value!r} is malformed", key) from None


def _int_tuple(value):
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    return tuple(int(v) for v in str(value).split(",") if v.strip())


def preset(name: str, **params) -> InputDocument:
    """
    Named inputs, all with request ``transition``.

    - ``quintic-conifold``: the quintic threefold degenerating onto a plane.
    - ``cubic-transition``: the quintic degenerating onto a line.
    - ``proj-hypersurface``: degree ``d`` hypersurfaces of ``P^{m-1}`` with a
      codimension-``k`` center; parameters ``m``, ``k``, ``d``.
    - ``product-proj``: products of projective spaces; parameters ``m``,
      ``k``, ``d`` as comma-separated lists, one entry per factor.
    - ``weighted-p11122-8``: degree 8 hypersurfaces of ``P(1,1,1,2,2,1)``.
    - ``weighted-proj``: ``P(c_1..c_{m-1},1)``; parameters ``c`` (list), ``k``, ``d``.
    """
    if name == "quintic-conifold":
        return InputDocument(1, ((1,),) * 5, (Fraction(1),), (1,) * 5, (0, 1), request="transition")
    if name == "cubic-transition":
        return InputDocument(1, ((1,),) * 5, (Fraction(1),), (1,) * 5, (0, 1, 2, 3), request="transition")
    if name == "proj-hypersurface":
        m, k, d = _param(params, "m", 5), _param(params, "k", 2), _param(params, "d", 5)
        if not 1 < k < m:
            raise SchemaError("proj-hypersurface needs 1 < k < m", "k")
        if d < 1:
            raise SchemaError("proj-hypersurface needs d >= 1", "d")
        return _hypersurface([1] * m, d, k)
    if name == "weighted-p11122-8":
        return _hypersurface([1, 1, 1, 2, 2, 1], 8, 2)
    if name == "weighted-proj":
        c = _param(params, "c", (1, 1, 1, 2, 2), _int_tuple)
        k, d = _param(params, "k", 2), _param(params, "d", 2)
        if not c or any(x <= 0 for x in c):
            raise SchemaError("weighted-proj weights must be positive", "c")
        if not 1 <= k <= len(c):
            raise SchemaError("weighted-proj needs 1 <= k <= len(c)", "k")
        if d < 1:
            raise SchemaError("weighted-proj needs d >= 1", "d")
        return _hypersurface(list(c) + [1], d, k)
    if name == "product-proj":
        ms = _param(params, "m", (3, 3), _int_tuple)
        ks = _param(params, "k", (1,) * len(ms), _int_tuple)
        ds = _param(params, "d", (3,) * len(ms), _int_tuple)
        if not (len(ms) == len(ks) == len(ds)) or not ms:
            raise SchemaError("product-proj needs one m, k and d per factor", "m")
        if any(mj < 2 or not 0 <= kj < mj for mj, kj in zip(ms, ks)):
            raise SchemaError("product-proj needs m_j >= 2 and 0 <= k_j < m_j", "k")
        if sum(ks) < 1:
            raise SchemaError("product-proj needs a nonempty center", "k")
        if any(dj < 0 for dj in ds):
            raise SchemaError("product-proj needs d_j >= 0", "d")
        r = len(ms)
        chars, a, center = [], [], []
        for j, (mj, kj, dj) in enumerate(zip(ms, ks, ds)):
            start = len(chars)
            for i in range(mj):
                chars.append(tuple(int(b == j) for b in range(r)))
                a.append(dj if i == mj - 1 else 0)
            center.extend(range(start, start + kj))
        return InputDocument(r, tuple(chars), (Fraction(1),) * r, tuple(a), tuple(center), request="transition")
    raise UnknownPreset(f"unknown preset {name!r}")


PRESET_NAMES = ("quintic-conifold", "cubic-transition", "proj-hypersurface", "product-proj", "weighted-p11122-8", "weighted-proj")


# ----------------------------------------------------------------------------
# Running


def _anticone_stage(P: GitPresentation) -> dict:
    rep = validate(P)
    out = rep.as_dict()
    out["minimal_anticones"] = [list(j) for j in P.minimal_anticones]
    return out


def _fan_stage(P: GitPresentation) -> dict:
    fan = build_fan(P)
    out = {
        "n": fan.n,
        "torsion": list(fan.torsion),
        "rays": [list(v) for v in fan.rays],
        "maximal_cones": [list(c) for c in fan.maximal_cones],
        "extended_set": sorted(fan.S),
        "beta": [list(r) for r in fan.beta],
    }
    try:
        out["interior_cones"] = [list(c) for c in interior_cones(fan)]
    except ToricError as exc:
        out["interior_cones"] = {"error": type(exc).__name__, "message": str(exc)}
    return out


def _space(doc: InputDocument):
    """Presentation and ring generators for the requested space."""
    if doc.space == "X":
        P = doc.presentation()
        return P, base_generators(P.torus_rank)
    spec = doc.transition_spec()
    hat = blowup_presentation(spec)
    r = spec.r
    if doc.space == "X_tilde":
        return hat.blowup(1), hat_generators(r)
    T, T_bar, T_tilde = total_space_presentations(spec, hat)
    if doc.space == "T":
        return T, base_generators(r)
    return (T_bar if doc.space == "T_bar" else T_tilde), hat_generators(r)


def _cohomology_stage(doc: InputDocument) -> dict:
    P, gens = _space(doc)
    fan = build_fan(P)
    R = ring_presentation(P, fan, gens)
    out = {"space": doc.space, "ring": R.describe()}
    if doc.narrow:
        nar = narrow_by_interior_cones(P, fan, R)
        desc = nar.describe()
        desc["interior_cones"] = desc.pop("generators")
        desc["generators"] = [str(c) for c in _narrow_generators(P, fan, R)]
        out["narrow"] = desc
    if doc.sectors:
        secs = []
        for sector, ring in chen_ruan(P, gens):
            secs.append({"nu": plain(sector.nu), "indices": list(sector.indices), "age_label": plain(sector.age_label), "ring": ring.describe()})
        out["sectors"] = secs
    return out


def _narrow_generators(P, fan, R):
    return narrow_by_interior_cones(P, fan, R).minimal_generators()


def run(doc: InputDocument):
    """Dispatch one request; returns ``(report dict, exit code)``."""
    report = {
        "version": __version__,
        "input": doc.to_json_object(),
        "request": doc.request,
        "convention_flags": {"indices": "0-based; Di in text is character i-1", "degrees": "cohomological"},
    }
    code = EXIT_OK
    try:
        P = doc.presentation()
        report["anticones"] = _anticone_stage(P)
        if not validate(P).ok:
            report["verdict"] = {"ok": False, "stage": "anticones", "failures": list(validate(P).failures)}
            return plain(report), EXIT_INVALID
        if doc.request in ("fan", "cohomology", "transition"):
            report["fan"] = _fan_stage(P)
        if doc.request == "cohomology":
            report["cohomology"] = _cohomology_stage(doc)
        if doc.request == "transition":
            tr = transition_report(doc.transition_spec())
            d = tr.as_dict()
            report["blowup"] = {
                "epsilon": d["epsilon"],
                "critical_values": d["critical_values"],
                "hat_characters": d["hat_characters"],
                "f_character": d["f_character"],
                "fan_checks": d["blowup_fan"],
                "crepancy": d["crepancy"],
                "nef": d["nef"],
                "polytope": d["polytope"],
            }
            report["total_spaces"] = {"validation": d["validation"], "checks": d["total_space"]}
            report["wall_chart"] = {"total_space_wall": d["wall_chart"], "blowup_wall": d["blowup_wall"]}
            report["conditions"] = d["conditions"]
            report["convention_flags"].update(d["conventions"])
            report["verdict"] = dict(d["summary"], ok=True)
        else:
            report["verdict"] = {"ok": True}
    except ValidationFailure as exc:
        report["verdict"] = {"ok": False, "stage": getattr(exc, "stage", doc.request), "error": type(exc).__name__, "message": str(exc)}
        code = EXIT_INVALID
    except SchemaError as exc:
        report["verdict"] = {"ok": False, "stage": "input", "error": type(exc).__name__, "message": str(exc), "key": exc.key}
        code = EXIT_INVALID
    except Exception as exc:  # reported through the exit code
        report["verdict"] = {"ok": False, "stage": getattr(exc, "stage", doc.request), "error": type(exc).__name__, "message": str(exc)}
        code = EXIT_INTERNAL
    return plain(report), code


# ----------------------------------------------------------------------------
# Text output


def _yes(flag) -> str:
    return "yes" if flag else "no"


def format_text(report: dict) -> str:
    """Plain-text summary of a report produced by :func:`run`."""
    lines = [f"toric_transitions {report['version']}: {report['request']}"]
    inp = report["input"]
    chars = ", ".join(f"D{i + 1}={tuple(c)}" for i, c in enumerate(inp["characters"]))
    lines.append(f"characters: {chars}")
    lines.append(f"stability: {tuple(inp['stability'])}")
    ant = report.get("anticones")
    if ant:
        mins = ", ".join("{" + ",".join(f"D{i + 1}" for i in j) + "}" for j in ant["minimal_anticones"])
        lines.append(f"minimal anticones: {mins or 'none'}")
        lines.append(f"assumptions hold: {_yes(ant['ok'])}")
        for f in ant["failures"]:
            lines.append(f"  failure: {f}")
    fan = report.get("fan")
    if fan:
        lines.append(f"fan: rank {fan['n']}, torsion {fan['torsion'] or 'none'}, {len(fan['maximal_cones'])} maximal cones")
        lines.append("  rays: " + ", ".join(f"b{i + 1}={tuple(v)}" for i, v in enumerate(fan["rays"])))
    coh = report.get("cohomology")
    if coh:
        ring = coh["ring"]
        lines.append(f"cohomology of {coh['space']}: generators {', '.join(ring['variables'])}")
        lines.append("  relations: " + "; ".join(ring["relations"]))
        lines.append("  dimensions: " + ", ".join(f"H^{k}={v}" for k, v in sorted(ring["dimensions"].items(), key=lambda kv: int(kv[0]))))
        if "narrow" in coh:
            lines.append("  narrow generators: " + ", ".join(coh["narrow"]["generators"]))
        for s in coh.get("sectors", []):
            lines.append(f"  sector {tuple(s['nu'])}: relations " + "; ".join(s["ring"]["relations"]))
    if "blowup" in report:
        b = report["blowup"]
        lines.append(f"epsilon: {b['epsilon']} (critical values {', '.join(b['critical_values']) or 'none'})")
        lines.append(f"crepant: {_yes(b['crepancy']['ok'])}")
        lines.append(f"D nef: {_yes(b['nef']['D']['nef']['ok'])}, D~ nef: {_yes(b['nef']['D_tilde']['nef']['ok'])}")
        pol = b["polytope"]
        if "delta_D_points" in pol:
            lines.append(f"sections: {pol['delta_D_points']} for D, {pol['filter_survivors']} after degeneration, {pol['delta_D_tilde_points']} for D~")
        checks = report["total_spaces"]["checks"]
        for name in sorted(checks):
            lines.append(f"  {name}: {_yes(checks[name]['ok'])}")
        w = report["wall_chart"]["total_space_wall"]
        lines.append(f"wall: e={tuple(w['e'])}, pairing sum {w['pairing_sum']}, c={w['frak_c']}")
        c = report["conditions"]
        lines.append(f"condition (1): {_yes(c['condition_1']['ok'])}")
        if not c["condition_1"]["ok"]:
            lines.append(f"  witness: {c['condition_1']['witness']}")
        lines.append(f"condition (2): {_yes(c['condition_2']['ok'])}")
        if not c["condition_2"]["ok"]:
            lines.append(f"  witness: {c['condition_2']['witness']}")
    v = report.get("verdict", {})
    if not v.get("ok", True) and "failures" in v:
        lines.append(f"error at {v['stage']}: standing assumptions fail")
    elif not v.get("ok", True):
        lines.append(f"error at {v.get('stage')}: {v.get('error', '')} {v.get('message', '')}".rstrip())
    return "\n".join(lines) + "\n"
