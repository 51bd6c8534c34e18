"""Reidemeister moves on Gauss codes and a seeded random-move fuzzer.

Positions are gaps: inserting at gap ``g`` of a component puts the new
passages before its current entry ``g`` (``g == len`` appends). Every move
returns a relabeled diagram (crossings 1..n in first-appearance order).

R3 validity follows the arrangement of three oriented straight lines. Call the
strands top (over both), middle and bottom (under both) and the crossings
``tm``, ``tb``, ``mb``. A local picture is realizable iff

* the top and middle strands traverse their pair in the same relative order
  (``tm`` first, or not) exactly when ``sign(tb) == sign(mb)``, and
* the middle and bottom strands agree (``tm``/``tb`` first vs ``mb``) exactly
  when ``sign(tm) == sign(tb)``.

The move reverses the passage order on all three strands; the rule is
symmetric under that reversal, so the result is again realizable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from .diagrams import Diagram, DiagramError, Passage

__all__ = [
    "MoveSpec",
    "MoveError",
    "apply_move",
    "random_equivalent",
    "r3_pattern_ok",
    "r1_sites",
    "r2_sites",
    "r3_sites",
    "KINDS",
]

KINDS = ("R1+", "R1-", "R2+", "R2-", "R3")


class MoveError(DiagramError):
    pass


@dataclass(frozen=True)
class MoveSpec:
    """One Reidemeister move.

    R1+: ``component``, ``position``, ``sign``, ``over_first``.
    R1-: ``crossings=(k,)``.
    R2+: ``component``/``position`` for the over strand, ``component2``/``position2``
    for the under strand, ``sign`` of the first crossing along the over strand,
    ``reverse`` for antiparallel strands (under passages in reversed order).
    R2-: ``crossings=(a, b)``.
    R3: ``crossings`` = the three crossings; ``site`` picks among several
    applicable strand pairings.
    """

    kind: str
    component: int = 0
    position: int = 0
    sign: int = 1
    over_first: bool = True
    component2: int = 0
    position2: int = 0
    reverse: bool = True
    crossings: tuple[int, ...] = field(default_factory=tuple)
    site: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MoveError(f"unknown move kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise MoveError("sign must be +1 or -1")

    def to_json(self) -> dict:
        base = {"kind": self.kind}
        if self.kind == "R1+":
            base.update(component=self.component, position=self.position, sign=self.sign, over_first=self.over_first)
        elif self.kind == "R2+":
            base.update(
                component=self.component, position=self.position, component2=self.component2,
                position2=self.position2, sign=self.sign, reverse=self.reverse,
            )
        else:
            base.update(crossings=list(self.crossings))
            if self.kind == "R3":
                base["site"] = self.site
        return base

    @classmethod
    def from_json(cls, data: dict) -> MoveSpec:
        data = dict(data)
        if "crossings" in data:
            data["crossings"] = tuple(data["crossings"])
        return cls(**data)


def _mutable(d: Diagram) -> list[list[Passage]]:
    return [list(c) for c in d.components]


def _finish(comps: list[list[Passage]]) -> Diagram:
    return Diagram(tuple(tuple(c) for c in comps)).relabeled()


def _adjacent(comps, a: tuple[int, int], b: tuple[int, int]) -> int:
    """+1 if ``b`` directly follows ``a`` on their component, -1 if it precedes, 0 otherwise."""
    if a[0] != b[0]:
        return 0
    n = len(comps[a[0]])
    if n < 2 or a[1] == b[1]:
        return 0
    if (a[1] + 1) % n == b[1]:
        return 1
    if (b[1] + 1) % n == a[1]:
        return -1
    return 0


def _check_gap(d: Diagram, comp: int, pos: int) -> None:
    if not 0 <= comp < len(d.components):
        raise MoveError(f"component {comp} out of range")
    if not 0 <= pos <= len(d.components[comp]):
        raise MoveError(f"position {pos} out of range for component {comp}")


def _r1_plus(d: Diagram, m: MoveSpec) -> Diagram:
    _check_gap(d, m.component, m.position)
    k = max(d.crossings, default=0) + 1
    pair = [Passage(k, True, m.sign), Passage(k, False, m.sign)]
    if not m.over_first:
        pair.reverse()
    comps = _mutable(d)
    comps[m.component][m.position:m.position] = pair
    return _finish(comps)


def _r1_minus(d: Diagram, m: MoveSpec) -> Diagram:
    if len(m.crossings) != 1:
        raise MoveError("R1- needs exactly one crossing")
    (k,) = m.crossings
    pos = d.positions().get(k)
    if pos is None:
        raise MoveError(f"R1-: unknown crossing {k}")
    comps = _mutable(d)
    if not _adjacent(comps, pos[True], pos[False]):
        raise MoveError(f"R1-: passages of crossing {k} are not adjacent")
    comps[pos[True][0]] = [p for p in comps[pos[True][0]] if p.crossing != k]
    return _finish(comps)


def _r2_plus(d: Diagram, m: MoveSpec) -> Diagram:
    _check_gap(d, m.component, m.position)
    _check_gap(d, m.component2, m.position2)
    a = max(d.crossings, default=0) + 1
    b = a + 1
    over = [Passage(a, True, m.sign), Passage(b, True, -m.sign)]
    under = [Passage(a, False, m.sign), Passage(b, False, -m.sign)]
    if m.reverse:
        under.reverse()
    comps = _mutable(d)
    inserts = [(m.component, m.position, 0, over), (m.component2, m.position2, 1, under)]
    # insert at later gaps first so earlier gap indices stay valid; over strand first on a shared gap
    for comp, pos, _, block in sorted(inserts, key=lambda t: (t[0], -t[1], -t[2])):
        comps[comp][pos:pos] = block
    return _finish(comps)


def _r2_minus(d: Diagram, m: MoveSpec) -> Diagram:
    if len(m.crossings) != 2 or m.crossings[0] == m.crossings[1]:
        raise MoveError("R2- needs two distinct crossings")
    a, b = m.crossings
    pos = d.positions()
    if a not in pos or b not in pos:
        raise MoveError(f"R2-: unknown crossing in {m.crossings}")
    comps = _mutable(d)
    if d.sign(a) == d.sign(b):
        raise MoveError("R2-: crossings must have opposite signs")
    if not _adjacent(comps, pos[a][True], pos[b][True]):
        raise MoveError("R2-: over passages are not adjacent")
    if not _adjacent(comps, pos[a][False], pos[b][False]):
        raise MoveError("R2-: under passages are not adjacent")
    comps = [[p for p in c if p.crossing not in (a, b)] for c in comps]
    return _finish(comps)


def r3_pattern_ok(signs: tuple[int, int, int], top_tm_first: bool, mid_tm_first: bool, bot_tb_first: bool) -> bool:
    """Realizability of an oriented R3 picture; ``signs`` = (tm, tb, mb)."""
    s_tm, s_tb, s_mb = signs
    return (top_tm_first == mid_tm_first) == (s_tb == s_mb) and (mid_tm_first == bot_tb_first) == (s_tm == s_tb)


@dataclass(frozen=True)
class _R3Site:
    tm: int
    tb: int
    mb: int
    strands: tuple[tuple[tuple[int, int], tuple[int, int]], ...]  # (first, second) gap-free positions per strand

    @property
    def crossings(self) -> tuple[int, int, int]:
        return (self.tm, self.tb, self.mb)


def _r3_candidates(d: Diagram, triple: tuple[int, int, int]) -> list[_R3Site]:
    pos = d.positions()
    comps = d.components
    out = []
    for tm, tb, mb in _orderings(triple):
        top = (pos[tm][True], pos[tb][True])
        mid = (pos[tm][False], pos[mb][True])
        bot = (pos[tb][False], pos[mb][False])
        dirs = [_adjacent(comps, x, y) for x, y in (top, mid, bot)]
        if 0 in dirs:
            continue
        top_first, mid_first, bot_first = (s > 0 for s in dirs)
        signs = (d.sign(tm), d.sign(tb), d.sign(mb))
        if not r3_pattern_ok(signs, top_first, mid_first, bot_first):
            continue
        strands = tuple((x, y) if s > 0 else (y, x) for (x, y), s in zip((top, mid, bot), dirs))
        out.append(_R3Site(tm, tb, mb, strands))
    return out


def _orderings(triple):
    a, b, c = triple
    return [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]


def _r3(d: Diagram, m: MoveSpec) -> Diagram:
    if len(set(m.crossings)) != 3:
        raise MoveError("R3 needs three distinct crossings")
    known = set(d.crossings)
    if not set(m.crossings) <= known:
        raise MoveError(f"R3: unknown crossing in {m.crossings}")
    sites = _r3_candidates(d, tuple(m.crossings))
    if not sites:
        raise MoveError(f"R3: crossings {m.crossings} do not form an applicable triangle")
    site = sites[m.site % len(sites)]
    comps = _mutable(d)
    for (c1, i1), (c2, i2) in site.strands:
        comps[c1][i1], comps[c2][i2] = comps[c2][i2], comps[c1][i1]
    return _finish(comps)


_DISPATCH = {"R1+": _r1_plus, "R1-": _r1_minus, "R2+": _r2_plus, "R2-": _r2_minus, "R3": _r3}


def apply_move(d: Diagram, m: MoveSpec) -> Diagram:
    return _DISPATCH[m.kind](d, m)


def r1_sites(d: Diagram) -> list[int]:
    """Crossings removable by R1-."""
    comps = d.components
    return [k for k, p in sorted(d.positions().items()) if _adjacent(comps, p[True], p[False])]


def r2_sites(d: Diagram) -> list[tuple[int, int]]:
    """Crossing pairs removable by R2-."""
    comps = d.components
    pos = d.positions()
    out = []
    for comp_i, comp in enumerate(comps):
        n = len(comp)
        for i in range(n if n > 1 else 0):
            p, q = comp[i], comp[(i + 1) % n]
            if not (p.over and q.over) or p.crossing == q.crossing or p.sign == q.sign:
                continue
            if n == 2 and i == 1:
                continue
            if _adjacent(comps, pos[p.crossing][False], pos[q.crossing][False]):
                out.append((p.crossing, q.crossing))
    return out


def r3_sites(d: Diagram) -> list[tuple[tuple[int, int, int], int]]:
    """``(crossings, site index)`` for every applicable R3."""
    comps = d.components
    pos = d.positions()
    # top strand: two adjacent over passages; enumerate triangles from there
    seen = set()
    out = []
    for comp in comps:
        n = len(comp)
        for i in range(n if n > 1 else 0):
            p, q = comp[i], comp[(i + 1) % n]
            if not (p.over and q.over) or p.crossing == q.crossing:
                continue
            for a, b in ((p.crossing, q.crossing), (q.crossing, p.crossing)):
                # a = tm: its under passage is on the middle strand next to an over passage of mb
                ci, ui = pos[a][False]
                m = len(comps[ci])
                for j in ((ui + 1) % m, (ui - 1) % m):
                    r = comps[ci][j]
                    if r.over and r.crossing not in (a, b):
                        key = frozenset((a, b, r.crossing))
                        if key not in seen:
                            seen.add(key)
                            triple = tuple(sorted(key))
                            for s in range(len(_r3_candidates(d, triple))):
                                out.append((triple, s))
    return out


def _random_move(d: Diagram, rng: random.Random, room: int) -> MoveSpec | None:
    kinds = ["R1-", "R2-", "R3"] + (["R1+"] if room >= 1 else []) + (["R2+"] if room >= 2 else [])
    kind = rng.choice(kinds)
    if kind == "R1+":
        c = rng.randrange(len(d.components))
        return MoveSpec("R1+", component=c, position=rng.randint(0, len(d.components[c])),
                        sign=rng.choice((1, -1)), over_first=rng.random() < 0.5)
    if kind == "R2+":
        c1 = rng.randrange(len(d.components))
        c2 = rng.randrange(len(d.components))
        return MoveSpec("R2+", component=c1, position=rng.randint(0, len(d.components[c1])),
                        component2=c2, position2=rng.randint(0, len(d.components[c2])),
                        sign=rng.choice((1, -1)), reverse=rng.random() < 0.5)
    if kind == "R1-":
        sites = r1_sites(d)
        return MoveSpec("R1-", crossings=(rng.choice(sites),)) if sites else None
    if kind == "R2-":
        sites = r2_sites(d)
        return MoveSpec("R2-", crossings=rng.choice(sites)) if sites else None
    sites = r3_sites(d)
    if not sites:
        return None
    triple, s = rng.choice(sites)
    return MoveSpec("R3", crossings=triple, site=s)


def random_moves(d: Diagram, moves: int, seed, max_crossings: int | None = None) -> Iterator[tuple[MoveSpec, Diagram]]:
    """Yield ``(move, diagram after move)`` for ``moves`` applicable random moves."""
    rng = random.Random(seed)
    cap = d.crossing_count + 4 if max_crossings is None else max_crossings
    done = 0
    misses = 0
    while done < moves:
        m = _random_move(d, rng, cap - d.crossing_count)
        if m is None:
            misses += 1
            if misses > 10000:
                raise RuntimeError("fuzzer could not find an applicable move")
            continue
        d = apply_move(d, m)
        done += 1
        yield m, d


def random_equivalent(d: Diagram, moves: int, seed, max_crossings: int | None = None) -> Diagram:
    """Apply ``moves`` random applicable Reidemeister moves.

    Increasing moves are only drawn while the result stays within
    ``max_crossings`` (default: the starting crossing count plus 4), which keeps
    the exponential bracket computation bounded.
    """
    for _, d in random_moves(d, moves, seed, max_crossings):
        pass
    return d
