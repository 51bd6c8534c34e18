"""Oriented virtual link diagrams as signed Gauss codes.

Only classical crossings are recorded. Each component is a cyclic sequence of
passages ``O<k><sign>`` / ``U<k><sign>``; virtual crossings leave no trace.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Passage",
    "Diagram",
    "DiagramError",
    "DiagramParseError",
    "Parity",
    "parse_diagram",
    "diagram_from_json",
    "load_diagram",
    "writhe",
    "linking_number",
    "chord_parity",
    "is_odd_diagram",
    "mirror",
    "random_diagram",
]


class DiagramError(ValueError):
    pass


class DiagramParseError(DiagramError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Passage(NamedTuple):
    crossing: int
    over: bool
    sign: int

    def __str__(self) -> str:
        return f"{'O' if self.over else 'U'}{self.crossing}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class Diagram:
    components: tuple[tuple[Passage, ...], ...]

    def __post_init__(self):
        comps = tuple(tuple(Passage(int(p[0]), bool(p[1]), int(p[2])) for p in c) for c in self.components)
        object.__setattr__(self, "components", comps)
        _validate(comps)

    @classmethod
    def from_codes(cls, codes: Iterable[Sequence[Passage | tuple]]) -> Diagram:
        return cls(tuple(tuple(Passage(*p) for p in code) for code in codes))

    @property
    def crossing_count(self) -> int:
        return sum(len(c) for c in self.components) // 2

    def __len__(self) -> int:
        return self.crossing_count

    @property
    def crossings(self) -> list[int]:
        return sorted({p.crossing for c in self.components for p in c})

    def sign(self, crossing: int) -> int:
        for comp in self.components:
            for p in comp:
                if p.crossing == crossing:
                    return p.sign
        raise DiagramError(f"unknown crossing {crossing}")

    def positions(self) -> dict[int, dict[bool, tuple[int, int]]]:
        """``crossing -> {over: (component, index)}``."""
        out: dict[int, dict[bool, tuple[int, int]]] = {}
        for ci, comp in enumerate(self.components):
            for i, p in enumerate(comp):
                out.setdefault(p.crossing, {})[p.over] = (ci, i)
        return out

    def relabeled(self) -> Diagram:
        """Renumber crossings 1..n in order of first appearance."""
        mapping: dict[int, int] = {}
        for comp in self.components:
            for p in comp:
                if p.crossing not in mapping:
                    mapping[p.crossing] = len(mapping) + 1
        return Diagram(tuple(tuple(Passage(mapping[p.crossing], p.over, p.sign) for p in c) for c in self.components))

    def normalized(self) -> Diagram:
        """Dense first-appearance labels under the lexicographically least rotation of each component."""
        # candidates: (partial components, label map); ties kept so later components can break them
        candidates: list[tuple[tuple, dict[int, int]]] = [((), {})]
        for comp in self.components:
            best_key = None
            nxt = []
            rotations = [comp[i:] + comp[:i] for i in range(len(comp))] or [comp]
            for done, labels in candidates:
                for rot in rotations:
                    lab = dict(labels)
                    key = []
                    for p in rot:
                        if p.crossing not in lab:
                            lab[p.crossing] = len(lab) + 1
                        key.append((lab[p.crossing], 0 if p.over else 1, -p.sign))
                    key = tuple(key)
                    if best_key is None or key < best_key:
                        best_key, nxt = key, [(done, rot, lab)]
                    elif key == best_key:
                        nxt.append((done, rot, lab))
            candidates = []
            seen = set()
            for done, rot, lab in nxt:
                new_done = done + (tuple(Passage(lab[p.crossing], p.over, p.sign) for p in rot),)
                if new_done not in seen:
                    seen.add(new_done)
                    candidates.append((new_done, lab))
        return Diagram(candidates[0][0])

    def same_as(self, other: Diagram) -> bool:
        return self.normalized() == other.normalized()

    def to_text(self) -> str:
        return ", ".join("".join(str(p) for p in c) for c in self.components)

    def to_json(self) -> dict:
        return {"components": [[["O" if p.over else "U", p.crossing, p.sign] for p in c] for c in self.components]}

    def __str__(self) -> str:
        return self.to_text()


def _validate(components: tuple[tuple[Passage, ...], ...]) -> None:
    seen: dict[int, list[Passage]] = {}
    for comp in components:
        for p in comp:
            if p.crossing < 1:
                raise DiagramError(f"crossing {p.crossing}: ids must be positive")
            if p.sign not in (1, -1):
                raise DiagramError(f"crossing {p.crossing}: sign must be +1 or -1")
            seen.setdefault(p.crossing, []).append(p)
    for k in sorted(seen):
        ps = seen[k]
        if len(ps) != 2:
            raise DiagramError(f"crossing {k} occurs {len(ps)} times (expected 2)")
        if ps[0].over == ps[1].over:
            what = "Under" if ps[0].over else "Over"
            raise DiagramError(f"crossing {k} lacks an {what} passage")
        if ps[0].sign != ps[1].sign:
            raise DiagramError(f"crossing {k} has inconsistent signs")


_PASSAGE = re.compile(r"([OUou])\s*(\d+)\s*([+-])")


def parse_diagram(text: str) -> Diagram:
    """Parse comma-separated Gauss codes, e.g. ``"O1+O2+U1+U2+"``.

    ``#`` starts a comment running to end of line. Crossing ids are
    renumbered densely in first-appearance order.
    """
    stripped = _strip_comments(text)
    components: list[list[Passage]] = []
    current: list[Passage] = []
    pos = 0
    while pos < len(stripped):
        ch = stripped[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == ",":
            components.append(current)
            current = []
            pos += 1
            continue
        m = _PASSAGE.match(stripped, pos)
        if m is None:
            raise DiagramParseError(f"unexpected character {ch!r}", text, pos)
        current.append(Passage(int(m.group(2)), m.group(1) in "Oo", 1 if m.group(3) == "+" else -1))
        pos = m.end()
    components.append(current)
    return Diagram(tuple(tuple(c) for c in components)).relabeled()


def _strip_comments(text: str) -> str:
    # keeps offsets stable so reported positions index the original text
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def diagram_from_json(data: dict | str) -> Diagram:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        comps = []
        for comp in data["components"]:
            code = []
            for role, k, sign in comp:
                if role not in ("O", "U"):
                    raise DiagramError(f"bad role {role!r}")
                code.append(Passage(int(k), role == "O", int(sign)))
            comps.append(tuple(code))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise DiagramError(f"malformed diagram JSON: {exc}") from exc
    return Diagram(tuple(comps)).relabeled()


def load_diagram(path) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return diagram_from_json(text)
    return parse_diagram(text)


def writhe(d: Diagram) -> int:
    return sum(p.sign for c in d.components for p in c if p.over)


def linking_number(d: Diagram) -> int | Fraction:
    """Half the signed count of crossings between the two components.

    Virtual links can have a half-integral linking number; that case returns a
    ``Fraction``.
    """
    if len(d.components) != 2:
        raise DiagramError(f"linking number needs exactly 2 components, got {len(d.components)}")
    first = {p.crossing for p in d.components[0]}
    second = {p.crossing for p in d.components[1]}
    mixed = first & second
    total = sum(p.sign for p in d.components[0] if p.crossing in mixed)
    return total // 2 if total % 2 == 0 else Fraction(total, 2)


def _interlaced(code: Sequence[Passage], a: int, b: int) -> bool:
    marks = [p.crossing for p in code if p.crossing in (a, b)]
    return marks[0] != marks[1] and marks[1] != marks[2]


def chord_parity(d: Diagram, crossing: int) -> Parity:
    if len(d.components) != 1:
        raise DiagramError("chord parity needs a single-component diagram")
    code = d.components[0]
    if crossing not in {p.crossing for p in code}:
        raise DiagramError(f"unknown crossing {crossing}")
    linked = sum(1 for k in d.crossings if k != crossing and _interlaced(code, crossing, k))
    return Parity.ODD if linked % 2 else Parity.EVEN


def is_odd_diagram(d: Diagram) -> bool:
    return all(chord_parity(d, k) is Parity.ODD for k in d.crossings)


def mirror(d: Diagram) -> Diagram:
    return Diagram(tuple(tuple(Passage(p.crossing, not p.over, -p.sign) for p in c) for c in d.components))


def random_diagram(n: int, rng: random.Random, components: int = 1) -> Diagram:
    """Uniformly shuffled Gauss code with ``n`` crossings; every such code is a virtual diagram."""
    passages = [Passage(k, over, 0) for k in range(1, n + 1) for over in (True, False)]
    signs = {k: rng.choice((1, -1)) for k in range(1, n + 1)}
    passages = [p._replace(sign=signs[p.crossing]) for p in passages]
    rng.shuffle(passages)
    components = max(1, min(components, max(1, 2 * n)))
    cuts = sorted(rng.sample(range(1, 2 * n), components - 1)) if components > 1 else []
    bounds = [0, *cuts, 2 * n]
    codes = [tuple(passages[a:b]) for a, b in zip(bounds, bounds[1:])]
    if not codes:
        codes = [()]
    return Diagram(tuple(codes)).relabeled()
