from __future__ import annotations

import itertools
import random
from collections import Counter, deque

import pytest

from vkspider import fixtures
from vkspider.invariants import kus
from vkspider.webs import (
    Web,
    WebError,
    canonical_form,
    connected_components,
    contains_subgraph,
    disjoint_union,
    find_sites,
    find_squares,
    has_bigon,
    is_irreducible,
    parse_canonical,
    random_web,
    validate_web,
)

THETA = validate_web(1, 1, [(0, 0)] * 3)


def _relabel(w: Web, rng: random.Random) -> Web:
    ps = list(range(w.n_sources))
    pt = list(range(w.n_sinks))
    rng.shuffle(ps)
    rng.shuffle(pt)
    edges = [(ps[s], pt[t]) for s, t in w.edges]
    rng.shuffle(edges)
    return validate_web(w.n_sources, w.n_sinks, edges, w.circles)


def _brute_isomorphic(a: Web, b: Web) -> bool:
    if (a.n_sources, a.n_sinks, a.circles) != (b.n_sources, b.n_sinks, b.circles):
        return False
    target = Counter(b.edges)
    for ps in itertools.permutations(range(a.n_sources)):
        for pt in itertools.permutations(range(a.n_sinks)):
            if Counter((ps[s], pt[t]) for s, t in a.edges) == target:
                return True
    return False


def _girth(w: Web) -> float:
    """Shortest cycle length in the underlying multigraph (2 for a parallel pair)."""
    if has_bigon(w):
        return 2
    ns = w.n_sources
    adj = [[] for _ in range(w.n_vertices)]
    for i, (s, t) in enumerate(w.edges):
        adj[s].append((ns + t, i))
        adj[ns + t].append((s, i))
    best = float("inf")
    for root in range(w.n_vertices):
        dist = {root: 0}
        via = {root: -1}
        q = deque([root])
        while q:
            v = q.popleft()
            for u, e in adj[v]:
                if e == via[v]:
                    continue
                if u in dist:
                    best = min(best, dist[u] + dist[v] + 1)
                else:
                    dist[u] = dist[v] + 1
                    via[u] = e
                    q.append(u)
    return best


def test_validate_errors():
    with pytest.raises(WebError, match="out-degree"):
        validate_web(1, 1, [(0, 0)] * 2)
    with pytest.raises(WebError, match="dangling"):
        validate_web(1, 1, [(0, 0), (0, 0), (0, 1)])
    with pytest.raises(WebError):
        validate_web(1, 1, [(0, 0)] * 3, circles=-1)


def test_canonical_examples():
    assert canonical_form(Web(0, 0, (), 0)) == "circles:0;"
    assert canonical_form(THETA.with_circles(2)) == "circles:2; s1,t1;(0->0)(0->0)(0->0)"


def test_canonical_invariant_under_relabeling():
    rng = random.Random(0)
    for _ in range(300):
        w = random_web(rng.randint(1, 7), rng, rng.randint(0, 2))
        assert canonical_form(_relabel(w, rng)) == canonical_form(w)


def test_canonical_separates_exactly_like_brute_force():
    rng = random.Random(1)
    for _ in range(400):
        k = rng.randint(1, 4)
        a, b = random_web(k, rng), random_web(k, rng)
        assert (canonical_form(a) == canonical_form(b)) == _brute_isomorphic(a, b)


def test_parse_canonical_roundtrip():
    rng = random.Random(2)
    for _ in range(200):
        w = random_web(rng.randint(0, 6), rng, rng.randint(0, 3))
        key = canonical_form(w)
        assert canonical_form(parse_canonical(key)) == key


def test_parse_canonical_rejects_garbage():
    for bad in ["circles:x;", "circles:0; s1,t1;(0->0)", "nonsense"]:
        with pytest.raises(WebError):
            parse_canonical(bad)


def test_components_and_union():
    rng = random.Random(3)
    for _ in range(100):
        parts = [random_web(rng.randint(1, 4), rng) for _ in range(rng.randint(1, 3))]
        w = disjoint_union(*parts)
        comps = connected_components(w)
        assert sum(c.n_vertices for c in comps) == w.n_vertices
        assert canonical_form(disjoint_union(*comps)) == canonical_form(w)


def _brute_squares(w: Web) -> set:
    es = set(w.edges)
    out = set()
    for s1, s2 in itertools.permutations(range(w.n_sources), 2):
        for t1, t2 in itertools.permutations(range(w.n_sinks), 2):
            if {(s1, t1), (s2, t1), (s2, t2), (s1, t2)} <= es:
                out.add((frozenset((s1, s2)), frozenset((t1, t2))))
    return out


def test_find_sites_matches_exhaustive_search():
    rng = random.Random(4)
    for _ in range(300):
        w = random_web(rng.randint(1, 6), rng, rng.randint(0, 1))
        sites = find_sites(w)
        assert sum(s.kind == "circle" for s in sites) == w.circles
        bigons = [s for s in sites if s.kind == "bigon"]
        assert len(bigons) == sum(m * (m - 1) // 2 for m in Counter(w.edges).values())
        squares = {(frozenset(s.vertices[:2]), frozenset(s.vertices[2:])) for s in find_squares(w)}
        assert squares == _brute_squares(w)
        assert is_irreducible(w) == (w.circles == 0 and _girth(w) >= 6)


def test_small_webs_are_never_irreducible():
    # a trivalent bipartite graph of girth 6 needs at least 14 vertices
    rng = random.Random(5)
    for _ in range(3000):
        w = random_web(rng.randint(1, 6), rng)
        assert not is_irreducible(w)


def test_heawood_is_irreducible():
    w = kus(fixtures.load("heawood7"))
    assert w.n_vertices == 14
    assert is_irreducible(w) and _girth(w) == 6


def _brute_contains(host: Web, pat: Web) -> bool:
    hm, pm = Counter(host.edges), Counter(pat.edges)
    for ps in itertools.permutations(range(host.n_sources), pat.n_sources):
        for pt in itertools.permutations(range(host.n_sinks), pat.n_sinks):
            if all(hm[(ps[s], pt[t])] >= m for (s, t), m in pm.items()):
                return True
    return False


def test_contains_subgraph_vs_brute_force():
    rng = random.Random(6)
    for _ in range(300):
        host = random_web(rng.randint(1, 4), rng)
        ps, pt = rng.randint(1, 2), rng.randint(1, 2)
        pattern = Web(ps, pt, tuple(sorted((rng.randrange(ps), rng.randrange(pt)) for _ in range(rng.randint(1, 4)))))
        assert contains_subgraph(host, pattern) == _brute_contains(host, pattern)


def test_contains_itself():
    rng = random.Random(7)
    for _ in range(50):
        w = random_web(rng.randint(1, 7), rng)
        assert contains_subgraph(_relabel(w, rng), w)
