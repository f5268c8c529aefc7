"""Text formats: expressions, series, curvettes.

One tokenizer and one recursive-descent grammar serve every text form in
the package; evaluation happens in one of two algebras (series/z-polynomials
with exact scalars, or multivariate rational polynomials).  Round-trips are
exact: everything printed by the library parses back to an equal value.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ParseError
from .scalars import Scalar
from .series import INF, Series
from .xpoly import XPoly
from .zpoly import ZPoly

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),=])|$)")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", column=pos)
            if m.group(1):
                self.items.append(("num", m.group(1), pos))
            elif m.group(2):
                self.items.append(("ident", m.group(2), pos))
            elif m.group(3):
                op = "^" if m.group(3) == "**" else m.group(3)
                self.items.append(("op", op, pos))
            pos = m.end()
        self.k = 0

    def peek(self):
        return self.items[self.k] if self.k < len(self.items) else ("end", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect(self, kind: str, value: Optional[str] = None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}", column=tok[2])
        return tok


# -- algebras ---------------------------------------------------------------


class _SeriesAlgebra:
    """Values are z-polynomials over series; constants are degree zero."""

    def number(self, text: str):
        return ZPoly.from_scalars([Fraction(int(text))])

    def ident(self, name: str, toks: _Tokens):
        if name == "t":
            return ZPoly.make([Series.t_power(Fraction(1))])
        if name == "z":
            return ZPoly.variable()
        if name == "i":
            return ZPoly.from_scalars([Scalar.imaginary(1)])
        if name == "sqrt":
            toks.expect("op", "(")
            num = toks.expect("num")
            toks.expect("op", ")")
            return ZPoly.make([Series.constant(Scalar.root_term(1, int(num[1])))])
        if name == "O":
            toks.expect("op", "(")
            inner = _parse_expr(toks, self)
            toks.expect("op", ")")
            s = _as_series(inner)
            if not s.terms:
                raise ParseError("O(...) needs a monomial argument")
            e, c = s.leading()
            if len(s.terms) != 1 or c != Scalar.rational(1):
                raise ParseError("O(...) takes a bare power of t")
            return ZPoly.make([Series((), e, s.arity)])
        raise ParseError(f"unknown symbol {name!r} in a series expression")

    def t_monomial(self, e):
        return ZPoly.make([Series.t_power(e)])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b.degree() != 0:
            raise ParseError("division only by constants")
        s = b.coeffs[0]
        if len(s.terms) != 1:
            raise ParseError("division only by constant scalars")
        e, c = s.terms[0]
        if e != Fraction(0) and not (isinstance(e, tuple) and not any(e)):
            raise ParseError("division only by constant scalars")
        return a.scale(c.inverse())

    def neg(self, a):
        return -a

    def pow(self, a, e, toks):
        if isinstance(e, int):
            if e < 0:
                raise ParseError("negative powers are not supported")
            return a ** e
        # fractional or tuple exponents are only allowed on the bare t
        base_t = ZPoly.make([Series.t_power(Fraction(1))])
        if not (a.degree() == 0 and a.coeffs and a.coeffs[0].terms == base_t.coeffs[0].terms):
            raise ParseError("fractional exponents are only allowed on t")
        return ZPoly.make([Series.t_power(e)])


class _XPolyAlgebra:
    """Values are multivariate rational polynomials."""

    def __init__(self, allowed: Optional[Sequence[str]] = None):
        self.allowed = set(allowed) if allowed is not None else None

    def number(self, text: str):
        return XPoly.constant(int(text))

    def ident(self, name: str, toks: _Tokens):
        if self.allowed is not None and name not in self.allowed:
            raise ParseError(f"unknown variable {name!r}")
        return XPoly.variable(name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b.total_degree() != 0:
            raise ParseError("division only by constants")
        c = b.terms[0][1] if b.terms else Fraction(0)
        return a.scale(Fraction(1) / c)

    def neg(self, a):
        return -a

    def pow(self, a, e, toks):
        if not isinstance(e, int) or e < 0:
            raise ParseError("polynomial exponents must be nonnegative integers")
        return a ** e


# -- grammar ------------------------------------------------------------------


def _parse_exponent(toks: _Tokens):
    """Integer, (p/q), or (a,b,...) after a '^'."""
    tok = toks.peek()
    if tok[0] == "num":
        toks.next()
        return int(tok[1])
    if tok == ("op", "-", tok[2]):
        toks.next()
        inner = _parse_exponent(toks)
        if isinstance(inner, tuple):
            raise ParseError("cannot negate a tuple exponent")
        return -inner
    if tok[0] == "op" and tok[1] == "(":
        toks.next()
        entries = []
        while True:
            neg = False
            nxt = toks.peek()
            if nxt[0] == "op" and nxt[1] == "-":
                toks.next()
                neg = True
            num = toks.expect("num")
            val = Fraction(int(num[1]))
            nxt = toks.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                toks.next()
                den = toks.expect("num")
                val = Fraction(int(num[1]), int(den[1]))
            entries.append(-val if neg else val)
            nxt = toks.next()
            if nxt[0] == "op" and nxt[1] == ")":
                break
            if not (nxt[0] == "op" and nxt[1] == ","):
                raise ParseError("malformed exponent", column=nxt[2])
        if len(entries) == 1:
            return entries[0]
        if any(e.denominator != 1 for e in entries):
            raise ParseError("tuple exponents must be integers")
        return tuple(int(e) for e in entries)
    raise ParseError(f"malformed exponent near {tok[1]!r}", column=tok[2])


def _parse_primary(toks: _Tokens, alg):
    tok = toks.next()
    if tok[0] == "num":
        value = alg.number(tok[1])
    elif tok[0] == "ident":
        value = alg.ident(tok[1], toks)
    elif tok[0] == "op" and tok[1] == "(":
        value = _parse_expr(toks, alg)
        toks.expect("op", ")")
    else:
        raise ParseError(f"unexpected token {tok[1]!r}", column=tok[2])
    nxt = toks.peek()
    if nxt[0] == "op" and nxt[1] == "^":
        toks.next()
        e = _parse_exponent(toks)
        value = alg.pow(value, e, toks)
    return value


def _parse_factor(toks: _Tokens, alg):
    tok = toks.peek()
    if tok[0] == "op" and tok[1] in "+-":
        toks.next()
        inner = _parse_factor(toks, alg)
        return alg.neg(inner) if tok[1] == "-" else inner
    return _parse_primary(toks, alg)


def _parse_term(toks: _Tokens, alg):
    value = _parse_factor(toks, alg)
    while True:
        tok = toks.peek()
        if tok[0] == "op" and tok[1] == "*":
            toks.next()
            value = alg.mul(value, _parse_factor(toks, alg))
        elif tok[0] == "op" and tok[1] == "/":
            toks.next()
            value = alg.div(value, _parse_factor(toks, alg))
        else:
            return value


def _parse_expr(toks: _Tokens, alg):
    value = _parse_term(toks, alg)
    while True:
        tok = toks.peek()
        if tok[0] == "op" and tok[1] in "+-":
            toks.next()
            rhs = _parse_term(toks, alg)
            value = alg.add(value, rhs) if tok[1] == "+" else alg.sub(value, rhs)
        else:
            return value


def _as_series(p: ZPoly) -> Series:
    if p.is_zero():
        return Series.zero()
    if p.degree() != 0:
        raise ParseError("expected a series, found a polynomial in z")
    return p.coeffs[0]


def parse_zpoly(text: str) -> ZPoly:
    """Expression in z and t with exact scalar coefficients."""
    toks = _Tokens(text)
    value = _parse_expr(toks, _SeriesAlgebra())
    toks.expect("end")
    return value


def parse_series(text: str) -> Series:
    """Series text: sum of c*t^e terms with an optional O(t^e) tail."""
    return _as_series(parse_zpoly(text))


def parse_xpoly(text: str, allowed: Optional[Sequence[str]] = None) -> XPoly:
    toks = _Tokens(text)
    value = _parse_expr(toks, _XPolyAlgebra(allowed))
    toks.expect("end")
    return value


def parse_curvette(text: str, z_name: str = "z"):
    """Curvette block: one 'name = series' line per variable,
    optional 'sign <k> = +|-' lines for generator signs."""
    from .valuation import Curvette

    comps = []
    signs: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'name = series'", line=lineno)
        lhs, rhs = [part.strip() for part in line.split("=", 1)]
        if lhs.startswith("sign"):
            idx = lhs[4:].strip()
            pos = int(idx) if idx.isdigit() else 0
            if rhs not in ("+", "-"):
                raise ParseError("sign lines take + or -", line=lineno)
            signs[pos] = 1 if rhs == "+" else -1
        else:
            try:
                comps.append((lhs, parse_series(rhs)))
            except ParseError as exc:
                raise ParseError(f"in component {lhs!r}: {exc}", line=lineno) from exc
    if not any(name == z_name for name, _ in comps):
        raise ParseError(f"curvette needs a {z_name!r} component")
    sign_tuple = ()
    if signs:
        top = max(signs) + 1
        sign_tuple = tuple(signs.get(i, 1) for i in range(top))
    return Curvette.make(comps, z_name, sign_tuple)
