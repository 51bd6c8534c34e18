"""Reidemeister fuzzing: random move sequences must leave every invariant unchanged."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagrams import Diagram
from .invariants import kauffman_f, kus, leading_term_check, normalized_bracket
from .laurent import lp_format
from .moves import MoveSpec, random_moves
from .spider import DEFAULT_RULES, RuleSet
from .webs import is_irreducible

__all__ = ["Violation", "FuzzReport", "fuzz", "trial_seed"]


@dataclass(frozen=True)
class Violation:
    trial: int
    seed: int
    check: str  # "bracket" | "kauffman_f" | "leading_term"
    trace: tuple[MoveSpec, ...]
    before: str
    after: str

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "seed": self.seed,
            "check": self.check,
            "trace": [m.to_json() for m in self.trace],
            "before": self.before,
            "after": self.after,
        }


@dataclass
class FuzzReport:
    trials: int
    moves: int
    seed: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "moves": self.moves,
            "seed": self.seed,
            "passed": self.trials - len({v.trial for v in self.violations}),
            "violations": [v.to_json() for v in self.violations],
        }


def trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


def _bracket_text(b) -> str:
    return "; ".join(f"{k} {lp_format(c)}" for k, c in b.items())


def fuzz(
    d: Diagram,
    moves: int,
    trials: int,
    seed: int = 0,
    rules: RuleSet = DEFAULT_RULES,
    limit: int | None = None,
    max_crossings: int | None = None,
) -> FuzzReport:
    """Run ``trials`` independent random move sequences from ``d``.

    A failing trial is shortened to the first move after which the bracket
    changes, so the reported trace replays the violation directly.
    """
    report = FuzzReport(trials, moves, seed)
    if trials <= 0:
        return report
    b0 = normalized_bracket(d, rules, limit)
    f0 = kauffman_f(d, limit)
    irreducible = d.crossing_count > 0 and is_irreducible(kus(d))
    for t in range(trials):
        s = trial_seed(seed, t)
        steps = list(random_moves(d, moves, s, max_crossings))
        d2 = steps[-1][1] if steps else d
        trace = tuple(m for m, _ in steps)
        b2 = normalized_bracket(d2, rules, limit)
        if b2 != b0:
            cut = next(i for i, (_, di) in enumerate(steps) if normalized_bracket(di, rules, limit) != b0)
            bad = normalized_bracket(steps[cut][1], rules, limit)
            report.violations.append(
                Violation(t, s, "bracket", trace[: cut + 1], _bracket_text(b0), _bracket_text(bad))
            )
            continue
        f2 = kauffman_f(d2, limit)
        if f2 != f0:
            report.violations.append(Violation(t, s, "kauffman_f", trace, lp_format(f0, "a"), lp_format(f2, "a")))
            continue
        if irreducible and not leading_term_check(d, d2, rules, limit):
            report.violations.append(Violation(t, s, "leading_term", trace, _bracket_text(b0), _bracket_text(b2)))
    return report
