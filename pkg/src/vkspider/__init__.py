"""Graph-valued bracket for virtual knots, built on the sl3 web spider.

Diagrams are signed Gauss codes; each crossing is resolved into an oriented
smoothing or a trivalent web piece and every state web is reduced to a
combination of irreducible webs with Laurent polynomial coefficients.
"""

from __future__ import annotations

from .diagrams import (
    Diagram,
    DiagramError,
    DiagramParseError,
    Parity,
    Passage,
    chord_parity,
    diagram_from_json,
    is_odd_diagram,
    linking_number,
    load_diagram,
    mirror,
    parse_diagram,
    random_diagram,
    writhe,
)
from .invariants import (
    Choice,
    CrossingLimitError,
    DistinguishReport,
    MinimalityCertificate,
    distinguish,
    expand,
    kauffman_bracket,
    kauffman_f,
    kus,
    leading_term_check,
    minimality_certificate,
    normalized_bracket,
    resolve_state,
)
from .laurent import LaurentParseError, LaurentPoly, lp_format, lp_parse, lp_span, lp_substitute_inverse
from .moves import MoveError, MoveSpec, apply_move, random_equivalent, random_moves
from .spider import DEFAULT_RULES, RuleSet, RuleSetError, WebCombination, load_ruleset, normal_form
from .webs import Web, WebError, canonical_form, find_sites, is_irreducible, parse_canonical, validate_web

__version__ = "0.1.0"
