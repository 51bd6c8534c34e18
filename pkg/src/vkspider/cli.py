"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 invariance violation, 3 crossing limit.
Every human-readable report carries the same fields as its ``--json`` form.
"""

from __future__ import annotations

import argparse
import json
import sys

from .diagrams import DiagramError, chord_parity, is_odd_diagram, load_diagram, writhe
from .fuzz import fuzz
from .invariants import (
    CrossingLimitError,
    crossing_limit,
    distinguish,
    expand,
    kauffman_f,
    kus,
    minimality_certificate,
    normalized_bracket,
)
from .laurent import LaurentParseError, lp_format, lp_span
from .spider import DEFAULT_RULES, RuleSetError, load_ruleset
from .webs import canonical_form, is_irreducible

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_LIMIT = 3


def _emit(args, data, lines) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        for line in lines:
            print(line)


def _rules(args):
    if getattr(args, "ruleset", None):
        return load_ruleset(args.ruleset, check=not args.no_rules_check)
    return DEFAULT_RULES


def _limit(args) -> int:
    return crossing_limit(args.limit)


def cmd_bracket(args) -> int:
    d = load_diagram(args.file)
    rules = _rules(args)
    if args.normalized:
        b = normalized_bracket(d, rules, _limit(args), args.workers)
    else:
        b = expand(d, rules, _limit(args), args.workers)
    _emit(args, b.to_json(), [f"{key}\t{lp_format(c)}" for key, c in b.items()])
    return EXIT_OK


def cmd_kus(args) -> int:
    w = kus(load_diagram(args.file))
    irr = is_irreducible(w)
    data = {"kus": canonical_form(w), "vertices": w.n_vertices, "irreducible": irr}
    _emit(args, data, [data["kus"], f"vertices: {w.n_vertices}", f"irreducible: {str(irr).lower()}"])
    return EXIT_OK


def cmd_certify(args) -> int:
    cert = minimality_certificate(load_diagram(args.file))
    _emit(args, cert.to_json(), [cert.summary(), f"kus: {cert.kus}"])
    return EXIT_OK


def cmd_kauffman(args) -> int:
    d = load_diagram(args.file)
    f = kauffman_f(d, _limit(args))
    span = None if f.is_zero() else lp_span(f)
    data = {"f": lp_format(f, "a"), "span": span, "writhe": writhe(d)}
    _emit(args, data, [f"f = {data['f']}", f"span: {span}", f"writhe: {data['writhe']}"])
    return EXIT_OK


def cmd_parity(args) -> int:
    d = load_diagram(args.file)
    chords = {k: chord_parity(d, k) for k in d.crossings}
    odd = is_odd_diagram(d)
    data = {"odd_diagram": odd, "chords": {str(k): p.value for k, p in chords.items()}}
    text = " ".join(f"{k}:{p.value}" for k, p in chords.items())
    _emit(args, data, [f"odd diagram: {str(odd).lower()}; chords: {text}".rstrip()])
    return EXIT_OK


def cmd_distinguish(args) -> int:
    d1, d2 = load_diagram(args.file1), load_diagram(args.file2)
    rep = distinguish(d1, d2, _rules(args), _limit(args))
    if rep.equal:
        lines = ["EQUAL"]
    else:
        key, c1, c2 = rep.first_difference
        lines = ["NOT EQUAL", f"first difference at {key}: {lp_format(c1)} vs {lp_format(c2)}"]
    _emit(args, rep.to_json(), lines)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    d = load_diagram(args.file)
    rep = fuzz(d, args.moves, args.trials, args.seed, _rules(args), _limit(args), args.max_crossings)
    data = rep.to_json()
    lines = [f"trials: {rep.trials}; moves: {rep.moves}; seed: {rep.seed}; passed: {data['passed']}"]
    for v in rep.violations:
        lines.append(f"VIOLATION trial {v.trial} (seed {v.seed}) {v.check}: {v.before} -> {v.after}")
        lines.append("  trace: " + json.dumps([m.to_json() for m in v.trace]))
    lines.append("all pass" if rep.ok else f"FAIL: {len(rep.violations)} violation(s)")
    _emit(args, data, lines)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vkspider", description="Graph-valued sl3 bracket for virtual knot diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, files=("file",)):
        sp = sub.add_parser(name, help=help_text)
        for f in files:
            sp.add_argument(f, help="Gauss code file")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--limit", type=int, default=None, help="crossing limit (overrides SPIDER_CROSSING_LIMIT)")
        sp.set_defaults(func=fn)
        return sp

    def rules_opts(sp):
        sp.add_argument("--ruleset", help="file of 'name = polynomial' lines or JSON")
        sp.add_argument("--no-rules-check", action="store_true", help="accept an inconsistent ruleset")

    sp = add("bracket", cmd_bracket, "graph-valued bracket as a term list")
    sp.add_argument("--normalized", action="store_true", help="multiply by A^(-8 writhe)")
    sp.add_argument("--workers", type=int, default=1)
    rules_opts(sp)
    add("kus", cmd_kus, "all-webbed state web")
    add("certify", cmd_certify, "minimality certificate")
    add("kauffman", cmd_kauffman, "normalized Kauffman f-polynomial")
    add("parity", cmd_parity, "chord parities")
    sp = add("distinguish", cmd_distinguish, "compare normalized brackets", files=("file1", "file2"))
    rules_opts(sp)
    sp = add("fuzz", cmd_fuzz, "check invariance under random Reidemeister moves")
    sp.add_argument("--moves", type=int, default=20)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-crossings", type=int, default=None, help="cap on crossings during a move sequence")
    rules_opts(sp)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CrossingLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (DiagramError, LaurentParseError, RuleSetError, OSError, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
