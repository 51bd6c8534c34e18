"""Reduction of webs to irreducible normal form.

Circles evaluate to ``delta``, a bigon collapses to a single edge times
``bigon_factor``, and a square is replaced by the sum of its two
orientation-compatible reconnections. Everything is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .laurent import ONE, ZERO, LaurentPoly, lp_format, lp_monomial, lp_parse
from .webs import (
    EMPTY_WEB,
    ReductionSite,
    Web,
    WebError,
    _cached_component_code,
    connected_components,
    disjoint_union,
    find_sites,
    find_squares,
    format_key,
    parse_canonical,
    splice,
)

__all__ = [
    "RuleSet",
    "RuleSetError",
    "DEFAULT_RULES",
    "load_ruleset",
    "WebCombination",
    "smooth_circle",
    "reduce_bigon",
    "resolve_square",
    "normal_form",
    "reduce_in_random_order",
    "combo_add",
    "combo_scale",
    "combo_mul_web",
]


class RuleSetError(ValueError):
    pass


_A8 = lp_monomial(1, 8)
_A_8 = lp_monomial(1, -8)


@dataclass(frozen=True)
class RuleSet:
    """Coefficients of the skein and web relations.

    The crossing expansions are ``pos_oriented * (oriented smoothing) +
    pos_web * (web)`` and likewise for negative crossings. Construction checks
    that a kink costs exactly ``A^8`` (resp. ``A^-8``) unless ``check=False``.
    """

    delta: LaurentPoly = field(default_factory=lambda: lp_parse("A^6 + 1 + A^-6"))
    bigon_factor: LaurentPoly = field(default_factory=lambda: lp_parse("A^3 + A^-3"))
    pos_oriented: LaurentPoly = field(default_factory=lambda: lp_parse("A^2"))
    pos_web: LaurentPoly = field(default_factory=lambda: lp_parse("-A^-1"))
    neg_oriented: LaurentPoly = field(default_factory=lambda: lp_parse("A^-2"))
    neg_web: LaurentPoly = field(default_factory=lambda: lp_parse("-A"))
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.check:
            self.verify()

    def consistency_defects(self) -> list[str]:
        bad = []
        pos = self.pos_oriented * self.delta + self.pos_web * self.bigon_factor
        neg = self.neg_oriented * self.delta + self.neg_web * self.bigon_factor
        if pos != _A8:
            bad.append(f"positive kink evaluates to {lp_format(pos)}, expected A^8")
        if neg != _A_8:
            bad.append(f"negative kink evaluates to {lp_format(neg)}, expected A^-8")
        return bad

    def verify(self) -> None:
        bad = self.consistency_defects()
        if bad:
            raise RuleSetError("; ".join(bad))

    def crossing_coefficient(self, sign: int, webbed: bool) -> LaurentPoly:
        if sign > 0:
            return self.pos_web if webbed else self.pos_oriented
        return self.neg_web if webbed else self.neg_oriented

    def to_json(self) -> dict[str, str]:
        return {name: lp_format(getattr(self, name)) for name in _RULE_NAMES}


_RULE_NAMES = ("delta", "bigon_factor", "pos_oriented", "pos_web", "neg_oriented", "neg_web")

DEFAULT_RULES = RuleSet()


def load_ruleset(path, check: bool = True) -> RuleSet:
    """Read ``name = polynomial`` lines (``#`` comments) or a JSON object."""
    import json

    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise RuleSetError(f"line {lineno}: expected 'name = polynomial'")
            k, v = line.split("=", 1)
            raw[k.strip()] = v.strip()
    unknown = set(raw) - set(_RULE_NAMES)
    if unknown:
        raise RuleSetError(f"unknown rule names: {', '.join(sorted(unknown))}")
    return RuleSet(**{k: lp_parse(str(v)) for k, v in raw.items()}, check=check)


# ---------------------------------------------------------------------------
# linear combinations of irreducible webs

Key = tuple[str, ...]  # sorted component codes of a product of irreducible webs


class WebCombination:
    """Finite map from canonical irreducible web products to nonzero coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[str, LaurentPoly] | None = None):
        self._terms: dict[Key, LaurentPoly] = {}
        for k, v in (terms or {}).items():
            if v:
                key = _key_of(k)
                self._terms[key] = self._terms.get(key, ZERO) + v
        self._terms = {k: v for k, v in self._terms.items() if v}

    @classmethod
    def _from_keys(cls, terms: dict[Key, LaurentPoly]) -> WebCombination:
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    @property
    def terms(self) -> dict[str, LaurentPoly]:
        return {format_key(0, k): v for k, v in sorted(self._terms.items(), key=_term_order)}

    def items(self) -> list[tuple[str, LaurentPoly]]:
        return list(self.terms.items())

    def __getitem__(self, key: str) -> LaurentPoly:
        return self._terms.get(_key_of(key), ZERO)

    def __contains__(self, key: str) -> bool:
        return _key_of(key) in self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WebCombination):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: WebCombination) -> WebCombination:
        return combo_add(self, other)

    def __neg__(self) -> WebCombination:
        return combo_scale(self, -ONE)

    def __sub__(self, other: WebCombination) -> WebCombination:
        return combo_add(self, -other)

    def scalar(self) -> LaurentPoly | None:
        """Coefficient of the empty web if that is the only term (or zero), else ``None``."""
        if not self._terms:
            return ZERO
        if set(self._terms) == {()}:
            return self._terms[()]
        return None

    def map_coefficients(self, fn) -> WebCombination:
        return WebCombination._from_keys({k: fn(v) for k, v in self._terms.items()})

    def max_vertices(self) -> int:
        return max((_key_vertices(k) for k in self._terms), default=0)

    def to_json(self) -> list[dict[str, str]]:
        return [{"web": k, "coeff": lp_format(v)} for k, v in self.terms.items()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, str]]) -> WebCombination:
        return cls({d["web"]: lp_parse(d["coeff"]) for d in data})

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {lp_format(v)!r}" for k, v in self.terms.items())
        return f"WebCombination({{{body}}})"


def _key_vertices(key: Key) -> int:
    total = 0
    for code in key:
        s, t = code.split(";", 1)[0].split(",")
        total += int(s[1:]) + int(t[1:])
    return total


def _term_order(item):
    key = item[0]
    return (-_key_vertices(key), key)


def _key_of(key: str | Key) -> Key:
    if isinstance(key, tuple):
        return key
    w = parse_canonical(key)
    if w.circles:
        raise WebError(f"combination keys carry no circles: {key!r}")
    codes = []
    for c in connected_components(w):
        if find_sites(c):
            raise WebError(f"combination keys must be irreducible: {key!r}")
        codes.append(_cached_component_code(c))
    return tuple(sorted(codes))


def _merge(a: Key, b: Key) -> Key:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _mul(x: dict[Key, LaurentPoly], y: dict[Key, LaurentPoly]) -> dict[Key, LaurentPoly]:
    out: dict[Key, LaurentPoly] = {}
    for k1, v1 in x.items():
        for k2, v2 in y.items():
            k = _merge(k1, k2)
            p = v1 * v2
            prev = out.get(k)
            out[k] = p if prev is None else prev + p
    return {k: v for k, v in out.items() if v}


def _accumulate(out: dict[Key, LaurentPoly], x: Mapping[Key, LaurentPoly], scale: LaurentPoly = ONE) -> None:
    for k, v in x.items():
        p = v if scale is ONE else v * scale
        prev = out.get(k)
        s = p if prev is None else prev + p
        if s:
            out[k] = s
        else:
            out.pop(k, None)


def combo_add(c1: WebCombination, c2: WebCombination) -> WebCombination:
    out = dict(c1._terms)
    _accumulate(out, c2._terms)
    return WebCombination._from_keys(out)


def combo_scale(c: WebCombination, p: LaurentPoly) -> WebCombination:
    return WebCombination._from_keys({k: v * p for k, v in c._terms.items()})


def combo_mul_web(c: WebCombination, w: Web, rules: RuleSet = DEFAULT_RULES) -> WebCombination:
    return WebCombination._from_keys(_mul(c._terms, _normal_form_terms(w, rules)))


# ---------------------------------------------------------------------------
# local rules


def smooth_circle(w: Web, rules: RuleSet = DEFAULT_RULES) -> tuple[Web, LaurentPoly]:
    if w.circles < 1:
        raise WebError("no circle present")
    return w.with_circles(w.circles - 1), rules.delta


def _bigon_parts(w: Web, site: ReductionSite):
    if site.kind != "bigon" or len(site.edges) != 2:
        raise WebError(f"not a bigon site: {site}")
    e1, e2 = site.edges
    if e1 == e2 or max(e1, e2) >= len(w.edges) or w.edges[e1] != w.edges[e2]:
        raise WebError("bigon site edges are not parallel")
    u, v = w.edges[e1]
    third_out = [i for i, (s, _) in enumerate(w.edges) if s == u and i not in (e1, e2)]
    third_in = [i for i, (_, t) in enumerate(w.edges) if t == v and i not in (e1, e2)]
    if len(third_out) != 1 or len(third_in) != 1:
        raise WebError("bigon endpoints are not trivalent")
    return u, v, third_out[0], third_in[0]


def reduce_bigon(w: Web, site: ReductionSite, rules: RuleSet = DEFAULT_RULES) -> tuple[Web, LaurentPoly]:
    u, v, out_e, in_e = _bigon_parts(w, site)
    return splice(w, [u], [v], site.edges, {in_e: out_e}), rules.bigon_factor


def resolve_square(w: Web, site: ReductionSite) -> tuple[Web, Web]:
    """The two reconnections of a square; both carry coefficient 1."""
    if site.kind != "square" or len(site.vertices) != 4:
        raise WebError(f"not a square site: {site}")
    s1, s2, t1, t2 = site.vertices
    if s1 == s2 or t1 == t2:
        raise WebError("square corners must be distinct")
    cycle = {}
    for s in (s1, s2):
        for t in (t1, t2):
            idx = next((i for i, e in enumerate(w.edges) if e == (s, t)), None)
            if idx is None:
                raise WebError(f"square is missing edge s{s}->t{t}")
            cycle[(s, t)] = idx
    used = set(cycle.values())
    ext_out = {}
    ext_in = {}
    for s in (s1, s2):
        rest = [i for i, (a, _) in enumerate(w.edges) if a == s and i not in used]
        if len(rest) != 1:
            raise WebError(f"square corner s{s} is not trivalent")
        ext_out[s] = rest[0]
    for t in (t1, t2):
        rest = [i for i, (_, b) in enumerate(w.edges) if b == t and i not in used]
        if len(rest) != 1:
            raise WebError(f"square corner t{t} is not trivalent")
        ext_in[t] = rest[0]
    srcs, snks = (s1, s2), (t1, t2)
    first = splice(w, srcs, snks, used, {ext_in[t1]: ext_out[s1], ext_in[t2]: ext_out[s2]})
    second = splice(w, srcs, snks, used, {ext_in[t1]: ext_out[s2], ext_in[t2]: ext_out[s1]})
    return first, second


# ---------------------------------------------------------------------------
# normal form

_NF_MEMO: dict[RuleSet, dict[str, dict[Key, LaurentPoly]]] = {}
_MEMO_LIMIT = 100_000


def clear_memo() -> None:
    _NF_MEMO.clear()


def _first_bigon(w: Web) -> ReductionSite | None:
    seen: dict[tuple[int, int], int] = {}
    for i, e in enumerate(w.edges):
        j = seen.get(e)
        if j is not None:
            return ReductionSite("bigon", e, (j, i))
        seen[e] = i
    return None


def _strip(w: Web, rules: RuleSet) -> tuple[Web, int, int]:
    """Remove all bigons; return the web (circles untouched) and the number of bigons removed."""
    bigons = 0
    while True:
        site = _first_bigon(w)
        if site is None:
            return w, w.circles, bigons
        w, _ = reduce_bigon(w, site, rules)
        bigons += 1


def _normal_form_terms(w: Web, rules: RuleSet) -> dict[Key, LaurentPoly]:
    w, circles, bigons = _strip(w, rules)
    scalar = rules.delta ** circles * rules.bigon_factor ** bigons if (circles or bigons) else ONE
    result: dict[Key, LaurentPoly] = {(): scalar}
    memo = _NF_MEMO.setdefault(rules, {})
    for comp in connected_components(w):
        code = _cached_component_code(comp)
        nf = memo.get(code)
        if nf is None:
            squares = find_squares(comp)
            if not squares:
                nf = {(code,): ONE}
            else:
                a, b = resolve_square(comp, squares[0])
                nf = dict(_normal_form_terms(a, rules))
                _accumulate(nf, _normal_form_terms(b, rules))
            if len(memo) >= _MEMO_LIMIT:
                memo.clear()
            memo[code] = nf
        result = _mul(result, nf)
    return result


def normal_form(w: Web, rules: RuleSet = DEFAULT_RULES) -> WebCombination:
    """Unique expansion of ``w`` in irreducible webs."""
    return WebCombination._from_keys(_normal_form_terms(w, rules))


def reduce_in_random_order(w: Web, rng: random.Random, rules: RuleSet = DEFAULT_RULES) -> WebCombination:
    """Reference reducer: any site may fire at any step, no memo, no priority."""
    out: dict[Key, LaurentPoly] = {}
    stack: list[tuple[Web, LaurentPoly]] = [(w, ONE)]
    while stack:
        web, coeff = stack.pop()
        sites = find_sites(web)
        if not sites:
            key = tuple(sorted(_cached_component_code(c) for c in connected_components(web)))
            _accumulate(out, {key: coeff})
            continue
        site = rng.choice(sites)
        if site.kind == "circle":
            nxt, f = smooth_circle(web, rules)
            stack.append((nxt, coeff * f))
        elif site.kind == "bigon":
            nxt, f = reduce_bigon(web, site, rules)
            stack.append((nxt, coeff * f))
        else:
            a, b = resolve_square(web, site)
            stack.append((a, coeff))
            stack.append((b, coeff))
    return WebCombination._from_keys(out)


def web_of_key(key: str) -> Web:
    return parse_canonical(key)


__all__ += ["web_of_key", "clear_memo", "EMPTY_WEB", "disjoint_union"]
