from __future__ import annotations

import random

import numpy as np
import pytest

from oracles import expand_bruteforce, kauffman_f_bruteforce, state_coefficient, state_web
from vkspider import _kernels, fixtures
from vkspider import invariants as inv
from vkspider.diagrams import DiagramError, mirror, parse_diagram, random_diagram
from vkspider.invariants import (
    Choice,
    CrossingLimitError,
    crossing_limit,
    distinguish,
    expand,
    kauffman_f,
    kus,
    leading_term_check,
    minimality_certificate,
    normalized_bracket,
    resolve_state,
)
from vkspider.laurent import lp_monomial, lp_parse, lp_substitute_inverse
from vkspider.moves import MoveSpec, apply_move, random_equivalent
from vkspider.webs import Web, canonical_form, is_irreducible

DELTA = lp_parse("A^6 + 1 + A^-6")


def test_unknot_and_kinks():
    assert expand(fixtures.load("unknot")).terms == {"circles:0;": DELTA}
    assert expand(fixtures.load("kink")).terms == {"circles:0;": lp_parse("A^14 + A^8 + A^2")}
    for text, shift in [("O1+U1+", 8), ("U1+O1+", 8), ("O1-U1-", -8), ("U1-O1-", -8)]:
        d = parse_diagram(text)
        assert expand(d).terms == {"circles:0;": DELTA.shift(shift)}
        assert normalized_bracket(d) == normalized_bracket(fixtures.load("unknot"))


def test_resolve_state_kink():
    d = fixtures.load("kink")
    w, c = resolve_state(d, {1: Choice.ORIENTED})
    assert (w, c) == (Web(0, 0, (), 2), lp_monomial(1, 2))
    w, c = resolve_state(d, {1: "webbed"})
    assert canonical_form(w) == "circles:0; s1,t1;(0->0)(0->0)(0->0)"
    assert c == lp_monomial(-1, -1)
    with pytest.raises(DiagramError):
        resolve_state(d, {2: Choice.WEBBED})
    with pytest.raises(ValueError):
        resolve_state(d, {1: "sideways"})


def _diagrams(seed, count, max_n=5):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_diagram(rng.randint(0, max_n), rng, rng.choice((1, 1, 2)))


def test_states_match_reference_resolver():
    for d in _diagrams(0, 40, 5):
        ks = d.crossings
        for mask in range(1 << len(ks)):
            webbed = {k for i, k in enumerate(ks) if mask >> i & 1}
            w, c = resolve_state(d, mask)
            ref = state_web(d, webbed)
            assert canonical_form(w) == canonical_form(ref)
            assert c == state_coefficient(d, webbed)


def test_expand_matches_bruteforce():
    for d in _diagrams(1, 25, 5):
        assert expand(d) == expand_bruteforce(d)


def test_kus_has_2n_vertices():
    for d in _diagrams(2, 50, 9):
        w = kus(d)
        assert w.n_vertices == 2 * d.crossing_count
        assert w.circles == sum(1 for c in d.components if not c)


def test_backends_agree():
    if "numba" not in _kernels.available_backends():
        pytest.skip("numba not installed")
    for d in _diagrams(3, 30, 8):
        t = inv._tables(d)
        masks = np.arange(1 << d.crossing_count, dtype=np.int64)
        a = _kernels.resolve_webs(masks, t.succ, t.mate, t.cross, backend="numba")
        b = _kernels.resolve_webs(masks, t.succ, t.mate, t.cross, backend="numpy")
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        a = _kernels.kauffman_counts(masks, t.succ, t.mate, t.cross, t.over, t.signs, backend="numba")
        b = _kernels.kauffman_counts(masks, t.succ, t.mate, t.cross, t.over, t.signs, backend="numpy")
        assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_kauffman_matches_bruteforce():
    for d in _diagrams(4, 40, 6):
        assert kauffman_f(d) == kauffman_f_bruteforce(d)


def test_kauffman_classical_values():
    assert kauffman_f(fixtures.load("unknot")) == lp_parse("1")
    assert kauffman_f(fixtures.load("kink")) == lp_parse("1")
    # right-handed trefoil: Jones V(t) = t + t^3 - t^4 with t = a^-4
    assert kauffman_f(fixtures.load("classical_trefoil")) == lp_parse("A^-4 + A^-12 - A^-16")
    assert kauffman_f(fixtures.load("figure_eight")) == lp_parse("A^8 - A^4 + 1 - A^-4 + A^-8")


def test_r1_scales_unnormalized_bracket():
    rng = random.Random(5)
    for d in _diagrams(5, 20, 4):
        c = rng.randrange(len(d.components))
        sign = rng.choice((1, -1))
        d2 = apply_move(d, MoveSpec("R1+", component=c, position=rng.randint(0, len(d.components[c])), sign=sign))
        scale = lp_monomial(1, 8 * sign)
        assert expand(d2).map_coefficients(lambda p: p) == expand(d).map_coefficients(lambda p: p * scale)


def test_mirror_inverts_A():
    for d in list(_diagrams(6, 15, 5)) + [fixtures.load(n) for n in fixtures.NAMES]:
        assert normalized_bracket(mirror(d)) == normalized_bracket(d).map_coefficients(lp_substitute_inverse)


def test_crossing_limit(monkeypatch):
    d = fixtures.load("figure_eight")
    monkeypatch.setenv("SPIDER_CROSSING_LIMIT", "3")
    assert crossing_limit() == 3
    assert crossing_limit(5) == 5
    with pytest.raises(CrossingLimitError):
        expand(d)
    with pytest.raises(CrossingLimitError):
        kauffman_f(d)
    assert expand(d, limit=4) == expand(d, limit=10)
    monkeypatch.delenv("SPIDER_CROSSING_LIMIT")
    assert crossing_limit() == inv.DEFAULT_CROSSING_LIMIT


def test_workers_deterministic(monkeypatch):
    monkeypatch.setattr(inv, "_BATCH", 16)
    d = fixtures.load("heawood7")
    assert expand(d, workers=2) == expand(d)


def test_certificates():
    assert minimality_certificate(fixtures.load("unknot")).summary() == "MINIMAL (n=0)"
    vt = minimality_certificate(fixtures.load("virtual_trefoil"))
    assert vt.verdict == "Inconclusive" and vt.summary().startswith("INCONCLUSIVE: bigon at ")
    hw = minimality_certificate(fixtures.load("heawood7"))
    assert hw.minimal and hw.summary() == "MINIMAL (n=7, K_us vertices=14)"
    assert hw.to_json()["witness"] is None
    with pytest.raises(DiagramError):
        minimality_certificate(fixtures.load("hopf"))


def test_distinguish():
    u, k = fixtures.load("unknot"), fixtures.load("kink")
    assert distinguish(u, k).equal
    rep = distinguish(u, fixtures.load("classical_trefoil"))
    assert not rep.equal and rep.first_difference[0] == "circles:0;"
    assert not distinguish(fixtures.load("virtual_trefoil"), mirror(fixtures.load("virtual_trefoil"))).equal


def test_leading_term_survives_moves():
    d = fixtures.load("heawood7")
    key = canonical_form(kus(d))
    assert normalized_bracket(d)[key] == lp_monomial(-1, -63)
    for seed in range(5):
        assert leading_term_check(d, random_equivalent(d, 8, seed))
    with pytest.raises(ValueError):
        leading_term_check(fixtures.load("virtual_trefoil"), fixtures.load("virtual_trefoil"))


def test_irreducible_kus_is_top_term():
    d = fixtures.load("heawood7")
    b = normalized_bracket(d)
    assert is_irreducible(kus(d))
    assert b.max_vertices() == 14
    assert list(b.terms)[0] == canonical_form(kus(d))
