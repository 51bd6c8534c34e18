"""Exact Laurent polynomials in one variable with integer coefficients.

Values are immutable and hashable; all arithmetic uses Python integers, so
there is no overflow and no floating point anywhere.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = [
    "LaurentPoly",
    "LaurentParseError",
    "lp_add",
    "lp_mul",
    "lp_monomial",
    "lp_span",
    "lp_substitute_inverse",
    "lp_parse",
    "lp_format",
    "ZERO",
    "ONE",
]


class LaurentParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offending offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class LaurentPoly:
    """Sparse map ``exponent -> nonzero integer coefficient``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for exp, coeff in items:
            exp = int(exp)
            acc[exp] = acc.get(exp, 0) + int(coeff)
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> LaurentPoly:
        # caller guarantees: int keys, nonzero int values
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return min(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        return lp_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        return lp_add(self, -_coerce(other))

    def __rsub__(self, other: LaurentPoly | int) -> LaurentPoly:
        return lp_add(_coerce(other), -self)

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        return lp_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly._raw({e * k: c ** (-k)})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``A**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def format(self, var: str = "A") -> str:
        return lp_format(self, var)

    def __str__(self) -> str:
        return lp_format(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({lp_format(self)!r})"


def _coerce(x: LaurentPoly | int) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


def lp_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if len(p._terms) < len(q._terms):
        p, q = q, p
    out = dict(p._terms)
    for e, c in q._terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return LaurentPoly._raw(out)


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    out: dict[int, int] = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly._raw({e: c for e, c in out.items() if c})


def lp_monomial(coeff: int, exp: int) -> LaurentPoly:
    return LaurentPoly._raw({int(exp): int(coeff)} if coeff else {})


def lp_span(p: LaurentPoly) -> int:
    if not p._terms:
        raise ValueError("undefined span: zero polynomial")
    return max(p._terms) - min(p._terms)


def lp_substitute_inverse(p: LaurentPoly) -> LaurentPoly:
    """Apply ``A -> A**-1``."""
    return LaurentPoly._raw({-e: c for e, c in p._terms.items()})


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})


_TOKEN = re.compile(
    r"""
    \s*(?P<sign>[+-])?\s*
    (?:
        (?P<coeff>\d+)\s*(?:(?P<star>\*)\s*)?(?P<var1>[Aa])?
      | (?P<var2>[Aa])
    )
    (?:\s*\^\s*(?P<exp>[+-]?\s*\d+))?
    \s*""",
    re.VERBOSE,
)


def lp_parse(text: str) -> LaurentPoly:
    """Parse ``term (('+'|'-') term)*`` where a term is ``[int]['*'][A|a]['^' int]``.

    >>> lp_format(lp_parse("A^6 + 1 + A^-6"))
    'A^6 + 1 + A^-6'
    """
    pos = 0
    n = len(text)
    terms: dict[int, int] = {}
    first = True
    if not text.strip():
        raise LaurentParseError("empty polynomial", text, 0)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos or (m.group("coeff") is None and m.group("var2") is None):
            raise LaurentParseError("expected a term", text, _skip_ws(text, pos))
        if not first and m.group("sign") is None:
            raise LaurentParseError("expected '+' or '-'", text, _skip_ws(text, pos))
        if m.group("star") and not m.group("var1"):
            raise LaurentParseError("expected variable after '*'", text, m.end("star"))
        var = m.group("var1") or m.group("var2")
        if m.group("exp") is not None and var is None:
            raise LaurentParseError("exponent without variable", text, m.start("exp"))
        coeff = int(m.group("coeff")) if m.group("coeff") is not None else 1
        if m.group("sign") == "-":
            coeff = -coeff
        exp = 0
        if var is not None:
            exp = int(m.group("exp").replace(" ", "")) if m.group("exp") is not None else 1
        terms[exp] = terms.get(exp, 0) + coeff
        pos = m.end()
        first = False
    return LaurentPoly(terms)


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def lp_format(p: LaurentPoly, var: str = "A") -> str:
    """Descending exponents, explicit signs, ``A^-6`` style; zero is ``"0"``."""
    if not p._terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(p.items()):
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
