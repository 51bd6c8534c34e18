"""State expansion, the graph-valued bracket and what is built on it.

The unnormalized bracket sums, over all ``2**n`` states, the state's
coefficient times the normal form of its web. The normalized bracket scales by
``A**(-8 * writhe)``. Minimality certificates, diagram comparison and the
Kauffman ``f``-polynomial cross-check live here too.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import _kernels
from .diagrams import Diagram, DiagramError, writhe
from .laurent import ONE, ZERO, LaurentPoly, lp_format, lp_monomial
from .spider import (
    DEFAULT_RULES,
    Key,
    RuleSet,
    WebCombination,
    _accumulate,
    _normal_form_terms,
    combo_scale,
)
from .webs import ReductionSite, Web, _make, canonical_form, find_sites, is_irreducible

__all__ = [
    "Choice",
    "CrossingLimitError",
    "DEFAULT_CROSSING_LIMIT",
    "crossing_limit",
    "resolve_state",
    "expand",
    "normalized_bracket",
    "kus",
    "MinimalityCertificate",
    "minimality_certificate",
    "DistinguishReport",
    "distinguish",
    "kauffman_f",
    "kauffman_bracket",
    "leading_term_check",
]

DEFAULT_CROSSING_LIMIT = 16
_BATCH = 1 << 12


class Choice(str, Enum):
    ORIENTED = "oriented"
    WEBBED = "webbed"


class CrossingLimitError(RuntimeError):
    def __init__(self, n: int, limit: int):
        super().__init__(f"diagram has {n} crossings, above the crossing limit {limit}")
        self.n = n
        self.limit = limit


def crossing_limit(override: int | None = None) -> int:
    """Flag value if given, else ``SPIDER_CROSSING_LIMIT``, else 16."""
    if override is not None:
        return override
    env = os.environ.get("SPIDER_CROSSING_LIMIT")
    return int(env) if env else DEFAULT_CROSSING_LIMIT


def _check_limit(d: Diagram, limit: int | None) -> None:
    lim = crossing_limit(limit)
    if d.crossing_count > lim:
        raise CrossingLimitError(d.crossing_count, lim)


@dataclass(frozen=True)
class _Tables:
    succ: np.ndarray
    mate: np.ndarray
    cross: np.ndarray
    over: np.ndarray
    signs: np.ndarray  # per crossing index
    labels: tuple[int, ...]  # crossing index -> crossing id
    free_loops: int  # components without crossings


@lru_cache(maxsize=4096)
def _tables(d: Diagram) -> _Tables:
    labels = tuple(d.crossings)
    index = {k: i for i, k in enumerate(labels)}
    flat = []
    succ = []
    free = 0
    for comp in d.components:
        if not comp:
            free += 1
            continue
        base = len(flat)
        for j, p in enumerate(comp):
            flat.append(p)
            succ.append(base + (j + 1) % len(comp))
    where: dict[tuple[int, bool], int] = {(p.crossing, p.over): i for i, p in enumerate(flat)}
    mate = [where[(p.crossing, not p.over)] for p in flat]
    signs = np.zeros(len(labels), np.int64)
    for p in flat:
        signs[index[p.crossing]] = p.sign
    return _Tables(
        succ=np.asarray(succ, np.int64),
        mate=np.asarray(mate, np.int64),
        cross=np.asarray([index[p.crossing] for p in flat], np.int64),
        over=np.asarray([p.over for p in flat], np.bool_),
        signs=signs,
        labels=labels,
        free_loops=free,
    )


def _state_mask(d: Diagram, state) -> int:
    t = _tables(d)
    if isinstance(state, (int, np.integer)):
        mask = int(state)
        if mask < 0 or mask >> len(t.labels):
            raise DiagramError("state mask does not match the diagram's crossings")
        return mask
    if set(state) != set(t.labels):
        raise DiagramError("state does not cover exactly the diagram's crossings")
    mask = 0
    for i, k in enumerate(t.labels):
        choice = Choice(state[k])
        if choice is Choice.WEBBED:
            mask |= 1 << i
    return mask


def _web_from_row(ends_row: np.ndarray, mask: int, circles: int, t: _Tables) -> Web:
    rank = {}
    for c in range(len(t.labels)):
        if (mask >> c) & 1:
            rank[c] = len(rank)
    edges = [(r, r) for r in rank.values()]
    for i in np.flatnonzero(ends_row >= 0):
        edges.append((rank[int(t.cross[i])], rank[int(ends_row[i])]))
    return _make(len(rank), len(rank), edges, int(circles) + t.free_loops)


def _coefficient(rules: RuleSet, counts: tuple[int, int, int, int]) -> LaurentPoly:
    return _coeff_cached(rules, counts)


@lru_cache(maxsize=65536)
def _coeff_cached(rules: RuleSet, counts: tuple[int, int, int, int]) -> LaurentPoly:
    pos_or, pos_web, neg_or, neg_web = counts
    return (
        rules.pos_oriented ** pos_or
        * rules.pos_web ** pos_web
        * rules.neg_oriented ** neg_or
        * rules.neg_web ** neg_web
    )


def _state_counts(mask: int, signs: np.ndarray) -> tuple[int, int, int, int]:
    pw = nw = 0
    npos = int(np.count_nonzero(signs > 0))
    nneg = len(signs) - npos
    for c, s in enumerate(signs):
        if (mask >> c) & 1:
            if s > 0:
                pw += 1
            else:
                nw += 1
    return (npos - pw, pw, nneg - nw, nw)


def resolve_state(d: Diagram, state: Mapping[int, Choice | str] | int, rules: RuleSet = DEFAULT_RULES) -> tuple[Web, LaurentPoly]:
    """Web and coefficient of one state.

    ``state`` maps crossing id to a ``Choice`` or is a bit mask over crossings
    in increasing id order (bit set = webbed).
    """
    t = _tables(d)
    mask = _state_mask(d, state)
    ends, circles = _kernels.resolve_webs(np.array([mask]), t.succ, t.mate, t.cross)
    web = _web_from_row(ends[0], mask, circles[0], t)
    return web, _coefficient(rules, _state_counts(mask, t.signs))


def _expand_range(d: Diagram, rules: RuleSet, lo: int, hi: int) -> dict[Key, LaurentPoly]:
    t = _tables(d)
    n = len(t.labels)
    pos_bits = sum(1 << c for c in range(n) if t.signs[c] > 0)
    npos = int(np.count_nonzero(t.signs > 0))
    nneg = n - npos
    grouped: dict[Web, LaurentPoly] = {}
    for start in range(lo, hi, _BATCH):
        masks = np.arange(start, min(hi, start + _BATCH), dtype=np.int64)
        ends, circles = _kernels.resolve_webs(masks, t.succ, t.mate, t.cross)
        for row, mask in enumerate(masks.tolist()):
            web = _web_from_row(ends[row], mask, circles[row], t)
            pw = (mask & pos_bits).bit_count()
            nw = mask.bit_count() - pw
            coeff = _coeff_cached(rules, (npos - pw, pw, nneg - nw, nw))
            prev = grouped.get(web)
            grouped[web] = coeff if prev is None else prev + coeff
    out: dict[Key, LaurentPoly] = {}
    for web, coeff in grouped.items():
        if coeff:
            _accumulate(out, _normal_form_terms(web, rules), coeff)
    return out


def _expand_worker(args):
    d, rules, lo, hi = args
    return _expand_range(d, rules, lo, hi)


def expand(
    d: Diagram,
    rules: RuleSet = DEFAULT_RULES,
    limit: int | None = None,
    workers: int = 1,
) -> WebCombination:
    """Unnormalized bracket: sum over all states of coefficient times normal form."""
    _check_limit(d, limit)
    total = 1 << d.crossing_count
    if workers <= 1 or total < 2 * _BATCH:
        return WebCombination._from_keys(_expand_range(d, rules, 0, total))
    chunks = max(workers, total // (4 * _BATCH))
    bounds = [total * i // chunks for i in range(chunks + 1)]
    jobs = [(d, rules, bounds[i], bounds[i + 1]) for i in range(chunks)]
    out: dict[Key, LaurentPoly] = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_expand_worker, jobs):
            _accumulate(out, part)
    return WebCombination._from_keys(out)


def normalized_bracket(
    d: Diagram,
    rules: RuleSet = DEFAULT_RULES,
    limit: int | None = None,
    workers: int = 1,
) -> WebCombination:
    return combo_scale(expand(d, rules, limit, workers), lp_monomial(1, -8 * writhe(d)))


def kus(d: Diagram) -> Web:
    """The all-webbed state: ``2n`` vertices."""
    return resolve_state(d, (1 << d.crossing_count) - 1)[0]


# ---------------------------------------------------------------------------
# certificates and comparison


@dataclass(frozen=True)
class MinimalityCertificate:
    verdict: str  # "Minimal" | "Inconclusive"
    kus: str
    witness: ReductionSite | None
    crossing_count: int
    kus_vertex_count: int

    @property
    def minimal(self) -> bool:
        return self.verdict == "Minimal"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "n": self.crossing_count,
            "kus_vertices": self.kus_vertex_count,
            "kus": self.kus,
            "witness": self.witness.to_json() if self.witness else None,
        }

    def summary(self) -> str:
        if self.minimal:
            if self.crossing_count == 0:
                return "MINIMAL (n=0)"
            return f"MINIMAL (n={self.crossing_count}, K_us vertices={self.kus_vertex_count})"
        return (
            f"INCONCLUSIVE: {self.witness.describe()} "
            f"(n={self.crossing_count}, K_us vertices={self.kus_vertex_count})"
        )


def minimality_certificate(d: Diagram) -> MinimalityCertificate:
    """Minimal when the all-webbed state is irreducible; otherwise inconclusive with a witness."""
    if len(d.components) != 1:
        raise DiagramError("minimality certificates need a single-component diagram")
    w = kus(d)
    n = d.crossing_count
    key = canonical_form(w)
    if n == 0:
        return MinimalityCertificate("Minimal", key, None, 0, 0)
    sites = find_sites(w)
    if not sites:
        return MinimalityCertificate("Minimal", key, None, n, w.n_vertices)
    return MinimalityCertificate("Inconclusive", key, sites[0], n, w.n_vertices)


@dataclass(frozen=True)
class DistinguishReport:
    equal: bool
    bracket1: WebCombination
    bracket2: WebCombination
    first_difference: tuple[str, LaurentPoly, LaurentPoly] | None

    def to_json(self) -> dict:
        diff = None
        if self.first_difference is not None:
            key, c1, c2 = self.first_difference
            diff = {"web": key, "coeff1": lp_format(c1), "coeff2": lp_format(c2)}
        return {
            "equal": self.equal,
            "bracket1": self.bracket1.to_json(),
            "bracket2": self.bracket2.to_json(),
            "first_difference": diff,
        }


def distinguish(d1: Diagram, d2: Diagram, rules: RuleSet = DEFAULT_RULES, limit: int | None = None) -> DistinguishReport:
    b1 = normalized_bracket(d1, rules, limit)
    b2 = normalized_bracket(d2, rules, limit)
    t1, t2 = b1.terms, b2.terms
    diff = None
    for key in sorted(set(t1) | set(t2), key=lambda k: (-k.count("->"), k)):
        c1, c2 = t1.get(key, ZERO), t2.get(key, ZERO)
        if c1 != c2:
            diff = (key, c1, c2)
            break
    return DistinguishReport(b1 == b2, b1, b2, diff)


def leading_term_check(d: Diagram, d2: Diagram, rules: RuleSet = DEFAULT_RULES, limit: int | None = None) -> bool:
    """Does the irreducible K_us of ``d`` survive with the same coefficient in the bracket of ``d2``?"""
    w = kus(d)
    if not is_irreducible(w) and d.crossing_count:
        raise ValueError("leading_term_check needs an irreducible K_us")
    key = canonical_form(w)
    b1 = normalized_bracket(d, rules, limit)
    b2 = normalized_bracket(d2, rules, limit)
    return key in b2 and b2[key] == b1[key]


# ---------------------------------------------------------------------------
# Kauffman bracket


def kauffman_bracket(d: Diagram, limit: int | None = None) -> LaurentPoly:
    """Unnormalized state sum with one loop counted as 1: sum a^(#A - #B) d^(loops - 1)."""
    _check_limit(d, limit)
    t = _tables(d)
    n = len(t.labels)
    counts: dict[tuple[int, int], int] = {}
    total = 1 << n
    for start in range(0, total, _BATCH):
        masks = np.arange(start, min(total, start + _BATCH), dtype=np.int64)
        n_a, loops = _kernels.kauffman_counts(masks, t.succ, t.mate, t.cross, t.over, t.signs)
        pairs, mult = np.unique(np.stack([n_a, loops + t.free_loops], axis=1), axis=0, return_counts=True)
        for (a, l), k in zip(pairs.tolist(), mult.tolist()):
            counts[(a, l)] = counts.get((a, l), 0) + k
    loop = LaurentPoly({2: -1, -2: -1})
    result = ZERO
    for (a, l), k in sorted(counts.items()):
        result = result + lp_monomial(k, a - (n - a)) * loop ** (l - 1)
    return result


def kauffman_f(d: Diagram, limit: int | None = None) -> LaurentPoly:
    """``(-a^3)^(-w) <D>``; equals 1 on the unknot."""
    w = writhe(d)
    factor = lp_monomial(-1 if w % 2 else 1, -3 * w)
    return factor * kauffman_bracket(d, limit)
