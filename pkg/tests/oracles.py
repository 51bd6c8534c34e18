"""Slow pure-Python reference implementations used by several test modules."""

from __future__ import annotations

from vkspider.diagrams import Diagram, writhe
from vkspider.laurent import ZERO, LaurentPoly, lp_monomial
from vkspider.spider import DEFAULT_RULES, WebCombination, combo_add, combo_scale, normal_form
from vkspider.webs import Web


def _passages(d: Diagram):
    flat, nxt = [], []
    free = 0
    for comp in d.components:
        if not comp:
            free += 1
            continue
        base = len(flat)
        flat.extend(comp)
        nxt.extend(base + (j + 1) % len(comp) for j in range(len(comp)))
    where = {(p.crossing, p.over): i for i, p in enumerate(flat)}
    return flat, nxt, where, free


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            x = self.p[x]
        return x

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)


def state_web(d: Diagram, webbed: set[int]) -> Web:
    """Arc ``i`` runs from passage ``i`` to passage ``nxt[i]``; arcs meeting at an oriented crossing are one strand."""
    flat, nxt, where, free = _passages(d)
    m = len(flat)
    ending_at = {nxt[i]: i for i in range(m)}
    dsu = _DSU(m)
    for k in d.crossings:
        if k in webbed:
            continue
        po, pu = where[(k, True)], where[(k, False)]
        dsu.union(ending_at[po], pu)
        dsu.union(ending_at[pu], po)
    src = {k: i for i, k in enumerate(sorted(webbed))}
    edges = [(src[k], src[k]) for k in webbed]
    heads, tails = {}, {}
    for i in range(m):
        if flat[i].crossing in webbed:
            tails[dsu.find(i)] = src[flat[i].crossing]
        if flat[nxt[i]].crossing in webbed:
            heads[dsu.find(i)] = src[flat[nxt[i]].crossing]
    roots = {dsu.find(i) for i in range(m)}
    circles = free
    for r in roots:
        if r in tails:
            edges.append((tails[r], heads[r]))
        else:
            circles += 1
    return Web(len(src), len(src), tuple(sorted(edges)), circles)


def state_coefficient(d: Diagram, webbed: set[int], rules=DEFAULT_RULES) -> LaurentPoly:
    c = lp_monomial(1, 0)
    for k in d.crossings:
        c = c * rules.crossing_coefficient(d.sign(k), k in webbed)
    return c


def _states(d: Diagram):
    ks = d.crossings
    for mask in range(1 << len(ks)):
        yield {k for i, k in enumerate(ks) if mask >> i & 1}


def expand_bruteforce(d: Diagram, rules=DEFAULT_RULES) -> WebCombination:
    total = WebCombination()
    for webbed in _states(d):
        total = combo_add(total, combo_scale(normal_form(state_web(d, webbed), rules), state_coefficient(d, webbed, rules)))
    return total


def kauffman_f_bruteforce(d: Diagram) -> LaurentPoly:
    """Kauffman bracket with A-smoothing chosen per crossing sign, loops counted by union-find."""
    flat, nxt, where, free = _passages(d)
    m = len(flat)
    ending_at = {nxt[i]: i for i in range(m)}
    loop = LaurentPoly({2: -1, -2: -1})
    n = d.crossing_count
    total = ZERO
    for unoriented in _states(d):
        dsu = _DSU(m)
        n_a = 0
        for k in d.crossings:
            po, pu = where[(k, True)], where[(k, False)]
            if k in unoriented:
                dsu.union(ending_at[po], ending_at[pu])
                dsu.union(po, pu)
            else:
                dsu.union(ending_at[po], pu)
                dsu.union(ending_at[pu], po)
            # the oriented smoothing is the A-smoothing at a positive crossing
            n_a += (k in unoriented) == (d.sign(k) < 0)
        loops = len({dsu.find(i) for i in range(m)}) + free
        total = total + lp_monomial(1, 2 * n_a - n) * loop ** (loops - 1)
    w = writhe(d)
    return lp_monomial(-1 if w % 2 else 1, -3 * w) * total
