"""Directed trivalent bipartite webs.

A web has ``n_sources`` all-out vertices, ``n_sinks`` all-in vertices, a
multiset of edges ``(source, sink)`` and a count of vertexless circles.
Sources and sinks are indexed separately from 0.

Canonical text encoding (the dictionary key used everywhere)::

    circles:<k>; s<S>,t<T>;(i->j)(i->j)...|s<S>,t<T>;...

Components are canonically labeled and sorted; a web without vertices
encodes as ``circles:<k>;``.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Literal, Sequence

__all__ = [
    "Web",
    "WebError",
    "ReductionSite",
    "validate_web",
    "canonical_form",
    "component_codes",
    "parse_canonical",
    "find_sites",
    "find_squares",
    "is_irreducible",
    "contains_subgraph",
    "connected_components",
    "disjoint_union",
    "splice",
    "EMPTY_WEB",
    "random_web",
]


class WebError(ValueError):
    pass


@dataclass(frozen=True)
class Web:
    n_sources: int
    n_sinks: int
    edges: tuple[tuple[int, int], ...]
    circles: int = 0

    @property
    def n_vertices(self) -> int:
        return self.n_sources + self.n_sinks

    def out_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_sources)]
        for i, (s, _) in enumerate(self.edges):
            out[s].append(i)
        return out

    def in_edges(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.n_sinks)]
        for i, (_, t) in enumerate(self.edges):
            inc[t].append(i)
        return inc

    def with_circles(self, circles: int) -> Web:
        return Web(self.n_sources, self.n_sinks, self.edges, circles)

    def canonical(self) -> str:
        return canonical_form(self)

    def __str__(self) -> str:
        return canonical_form(self)


EMPTY_WEB = Web(0, 0, (), 0)


def _make(n_src: int, n_snk: int, edges: Iterable[tuple[int, int]], circles: int) -> Web:
    return Web(n_src, n_snk, tuple(sorted(edges)), circles)


def validate_web(n_sources: int, n_sinks: int, edges: Sequence[tuple[int, int]], circles: int = 0) -> Web:
    """Check the trivalent bipartite orientation and return a ``Web``."""
    if n_sources < 0 or n_sinks < 0 or circles < 0:
        raise WebError("counts must be nonnegative")
    out_deg = [0] * n_sources
    in_deg = [0] * n_sinks
    for s, t in edges:
        if not 0 <= s < n_sources:
            raise WebError(f"edge ({s}->{t}): dangling source endpoint {s}")
        if not 0 <= t < n_sinks:
            raise WebError(f"edge ({s}->{t}): dangling sink endpoint {t}")
        out_deg[s] += 1
        in_deg[t] += 1
    for s, d in enumerate(out_deg):
        if d != 3:
            raise WebError(f"source s{s} has out-degree {d}, expected 3")
    for t, d in enumerate(in_deg):
        if d != 3:
            raise WebError(f"sink t{t} has in-degree {d}, expected 3")
    return _make(n_sources, n_sinks, [(int(s), int(t)) for s, t in edges], int(circles))


def random_web(k: int, rng: random.Random, circles: int = 0) -> Web:
    """``k`` sources and ``k`` sinks joined by a uniformly shuffled stub matching (multi-edges allowed)."""
    stubs = [t for t in range(k) for _ in range(3)]
    rng.shuffle(stubs)
    return _make(k, k, [(i // 3, t) for i, t in enumerate(stubs)], circles)


# ---------------------------------------------------------------------------
# components and canonical labeling


def connected_components(w: Web) -> list[Web]:
    """Split into connected pieces with vertices; circles are dropped."""
    parent = list(range(w.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ns = w.n_sources
    for s, t in w.edges:
        a, b = find(s), find(ns + t)
        if a != b:
            parent[a] = b
    groups: dict[int, list[tuple[int, int]]] = {}
    for s, t in w.edges:
        groups.setdefault(find(s), []).append((s, t))
    out = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        es = groups[root]
        srcs = sorted({s for s, _ in es})
        snks = sorted({t for _, t in es})
        si = {v: i for i, v in enumerate(srcs)}
        ti = {v: i for i, v in enumerate(snks)}
        out.append(_make(len(srcs), len(snks), [(si[s], ti[t]) for s, t in es], 0))
    return out


def disjoint_union(*webs: Web) -> Web:
    edges = []
    ns = nt = circles = 0
    for w in webs:
        edges.extend((s + ns, t + nt) for s, t in w.edges)
        ns += w.n_sources
        nt += w.n_sinks
        circles += w.circles
    return _make(ns, nt, edges, circles)


def _refine(cells: list[list[int]], nbrs: list[Counter]) -> list[list[int]]:
    """Equitable refinement; cells keep their relative order, splits are ordered by signature."""
    while True:
        where = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                where[v] = ci
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sigs = {v: tuple(sorted((where[u], m) for u, m in nbrs[v].items())) for v in cell}
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(sigs[v], []).append(v)
            if len(groups) > 1:
                changed = True
                for key in sorted(groups):
                    new_cells.append(groups[key])
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def _component_code(w: Web) -> str:
    ns, nt = w.n_sources, w.n_sinks
    nbrs: list[Counter] = [Counter() for _ in range(ns + nt)]
    for s, t in w.edges:
        nbrs[s][ns + t] += 1
        nbrs[ns + t][s] += 1
    init = [c for c in (list(range(ns)), list(range(ns, ns + nt))) if c]
    best: list = [None]

    def leaf(cells):
        pos = {cell[0]: i for i, cell in enumerate(cells)}
        return tuple(sorted((pos[s], pos[ns + t] - ns) for s, t in w.edges))

    def search(cells):
        cells = _refine(cells, nbrs)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = leaf(cells)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search(init)
    edges = "".join(f"({i}->{j})" for i, j in best[0])
    return f"s{ns},t{nt};{edges}"


_CODE_CACHE: dict[Web, str] = {}
_CACHE_LIMIT = 200_000


def _cached_component_code(w: Web) -> str:
    code = _CODE_CACHE.get(w)
    if code is None:
        code = _component_code(w)
        if len(_CODE_CACHE) >= _CACHE_LIMIT:
            _CODE_CACHE.clear()
        _CODE_CACHE[w] = code
    return code


def component_codes(w: Web) -> list[str]:
    return sorted(_cached_component_code(c) for c in connected_components(w))


def canonical_form(w: Web) -> str:
    """Isomorphism-invariant text key of ``w``."""
    return format_key(w.circles, component_codes(w))


def format_key(circles: int, codes: Iterable[str]) -> str:
    codes = sorted(codes)
    return f"circles:{circles};" + (" " + "|".join(codes) if codes else "")


_KEY = re.compile(r"^circles:(\d+);(?: (.*))?$")
_COMP = re.compile(r"^s(\d+),t(\d+);((?:\(\d+->\d+\))*)$")
_EDGE = re.compile(r"\((\d+)->(\d+)\)")


def parse_canonical(key: str) -> Web:
    """Rebuild a web from its canonical text."""
    m = _KEY.match(key.strip())
    if m is None:
        raise WebError(f"malformed canonical web {key!r}")
    circles = int(m.group(1))
    parts = []
    if m.group(2):
        for comp in m.group(2).split("|"):
            cm = _COMP.match(comp)
            if cm is None:
                raise WebError(f"malformed web component {comp!r}")
            es = [(int(a), int(b)) for a, b in _EDGE.findall(cm.group(3))]
            parts.append(validate_web(int(cm.group(1)), int(cm.group(2)), es))
    return disjoint_union(*parts, Web(0, 0, (), circles))


# ---------------------------------------------------------------------------
# reduction sites


@dataclass(frozen=True)
class ReductionSite:
    """``vertices`` are (source, sink) for a bigon and (s1, s2, t1, t2) for a
    square; ``edges`` are edge indices (the parallel pair for a bigon)."""

    kind: Literal["circle", "bigon", "square"]
    vertices: tuple[int, ...] = ()
    edges: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind == "circle":
            return "circle"
        if self.kind == "bigon":
            s, t = self.vertices
            return f"bigon at (s{s},t{t})"
        s1, s2, t1, t2 = self.vertices
        return f"square at (s{s1},t{t1},s{s2},t{t2})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "edges": list(self.edges)}


def _bigons(w: Web) -> list[ReductionSite]:
    by_pair: dict[tuple[int, int], list[int]] = {}
    for i, e in enumerate(w.edges):
        by_pair.setdefault(e, []).append(i)
    out = []
    for pair in sorted(by_pair):
        for e1, e2 in combinations(by_pair[pair], 2):
            out.append(ReductionSite("bigon", pair, (e1, e2)))
    return out


def find_squares(w: Web) -> list[ReductionSite]:
    nbr: list[set[int]] = [set() for _ in range(w.n_sources)]
    for s, t in w.edges:
        nbr[s].add(t)
    out = []
    for s1 in range(w.n_sources):
        for s2 in range(s1 + 1, w.n_sources):
            common = sorted(nbr[s1] & nbr[s2])
            for t1, t2 in combinations(common, 2):
                out.append(ReductionSite("square", (s1, s2, t1, t2)))
    return out


def find_sites(w: Web) -> list[ReductionSite]:
    """Circles first, then bigons by vertex pair, then squares by vertex tuple."""
    return [ReductionSite("circle")] * w.circles + _bigons(w) + find_squares(w)


def has_bigon(w: Web) -> bool:
    return len(set(w.edges)) < len(w.edges)


def is_irreducible(w: Web) -> bool:
    return w.circles == 0 and not has_bigon(w) and not find_squares(w)


# ---------------------------------------------------------------------------
# splicing


def splice(
    w: Web,
    removed_sources: Iterable[int],
    removed_sinks: Iterable[int],
    deleted_edges: Iterable[int],
    links: dict[int, int],
) -> Web:
    """Delete vertices and edges, then join dangling edges.

    ``links`` maps an edge entering a removed sink to the edge leaving a
    removed source that continues it. Chains that close without reaching a
    kept vertex become circles.
    """
    rs = set(removed_sources)
    rt = set(removed_sinks)
    dead = set(deleted_edges)
    edges = w.edges
    kept: list[tuple[int, int]] = []
    visited: set[int] = set()
    dangling = []
    for i, (s, t) in enumerate(edges):
        if i in dead:
            continue
        if s in rs or t in rt:
            dangling.append(i)
        else:
            kept.append((s, t))
    for i in dangling:
        s, t = edges[i]
        if s in rs:
            continue
        cur = i
        visited.add(cur)
        while edges[cur][1] in rt:
            cur = links[cur]
            visited.add(cur)
        kept.append((s, edges[cur][1]))
    circles = w.circles
    for i in dangling:
        if i in visited:
            continue
        cur = i
        while cur not in visited:
            visited.add(cur)
            cur = links[cur]
        circles += 1
    src_map = {}
    for v in range(w.n_sources):
        if v not in rs:
            src_map[v] = len(src_map)
    snk_map = {}
    for v in range(w.n_sinks):
        if v not in rt:
            snk_map[v] = len(snk_map)
    return _make(len(src_map), len(snk_map), [(src_map[s], snk_map[t]) for s, t in kept], circles)


# ---------------------------------------------------------------------------
# subgraph containment


def contains_subgraph(host: Web, pattern: Web) -> bool:
    """Injective role-preserving vertex map with host multiplicities >= pattern multiplicities."""
    if pattern.circles:
        raise WebError("pattern must not contain circles")
    if pattern.n_sources > host.n_sources or pattern.n_sinks > host.n_sinks:
        return False
    if not pattern.edges:
        return True
    hmult = Counter(host.edges)
    pmult = Counter(pattern.edges)
    hnbr_out: list[set[int]] = [set() for _ in range(host.n_sources)]
    hnbr_in: list[set[int]] = [set() for _ in range(host.n_sinks)]
    for s, t in hmult:
        hnbr_out[s].add(t)
        hnbr_in[t].add(s)
    pn = pattern.n_sources
    pnbr: list[list[tuple[int, int]]] = [[] for _ in range(pattern.n_vertices)]
    for (s, t), m in pmult.items():
        pnbr[s].append((pn + t, m))
        pnbr[pn + t].append((s, m))

    # BFS order so each vertex after the first of its component has a mapped neighbour
    order: list[int] = []
    seen = set()
    for start in range(pattern.n_vertices):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u, _ in sorted(pnbr[v]):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)

    img: dict[int, int] = {}
    used_src: set[int] = set()
    used_snk: set[int] = set()

    def fits(v: int, h: int) -> bool:
        for u, m in pnbr[v]:
            if u in img:
                if v < pn:
                    if hmult.get((h, img[u]), 0) < m:
                        return False
                elif hmult.get((img[u], h), 0) < m:
                    return False
        return True

    def candidates(v: int):
        is_src = v < pn
        for u, _ in pnbr[v]:
            if u in img:
                pool = hnbr_in[img[u]] if is_src else hnbr_out[img[u]]
                return sorted(pool)
        return range(host.n_sources if is_src else host.n_sinks)

    def go(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        is_src = v < pn
        used = used_src if is_src else used_snk
        for h in candidates(v):
            if h in used or not fits(v, h):
                continue
            img[v] = h
            used.add(h)
            if go(k + 1):
                return True
            del img[v]
            used.discard(h)
        return False

    return go(0)
