"""Multivariate polynomials with rational coefficients over named variables.

The separation pipeline works with f in R[x_1..x_n, z]; an XPoly stores such
an element exactly and knows how to specialize variables to rationals or to
exact series (curvette components).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .series import Series


@dataclass(frozen=True)
class XPoly:
    vars: tuple            # variable names, sorted
    terms: tuple           # sorted pairs (exponent tuple, Fraction)

    @staticmethod
    def make(vars: Sequence[str], terms: Mapping[tuple, Fraction]) -> "XPoly":
        vs = tuple(vars)
        clean = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = clean.get(tuple(mono), Fraction(0)) + c
        kept = tuple(sorted((m, c) for m, c in clean.items() if c))
        return XPoly(vs, kept)

    @staticmethod
    def constant(c, vars: Sequence[str] = ()) -> "XPoly":
        vs = tuple(vars)
        return XPoly.make(vs, {tuple([0] * len(vs)): Fraction(c)})

    @staticmethod
    def variable(name: str, vars: Optional[Sequence[str]] = None) -> "XPoly":
        vs = tuple(vars) if vars is not None else (name,)
        mono = tuple(1 if v == name else 0 for v in vs)
        if name not in vs:
            raise ValueError(f"variable {name!r} not among {vs}")
        return XPoly.make(vs, {mono: Fraction(1)})

    # -- variable alignment -------------------------------------------------

    def with_vars(self, vars: Sequence[str]) -> "XPoly":
        vs = tuple(vars)
        pos = {v: i for i, v in enumerate(vs)}
        out = {}
        for mono, c in self.terms:
            new = [0] * len(vs)
            for v, e in zip(self.vars, mono):
                if e:
                    if v not in pos:
                        raise ValueError(f"cannot drop variable {v!r}")
                    new[pos[v]] = e
            out[tuple(new)] = out.get(tuple(new), Fraction(0)) + c
        return XPoly.make(vs, out)

    @staticmethod
    def _align(a: "XPoly", b: "XPoly"):
        if a.vars == b.vars:
            return a, b
        vs = tuple(sorted(set(a.vars) | set(b.vars)))
        return a.with_vars(vs), b.with_vars(vs)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = XPoly.constant(other, self.vars)
        a, b = XPoly._align(self, other)
        out = dict(a.terms)
        for m, c in b.terms:
            out[m] = out.get(m, Fraction(0)) + c
        return XPoly.make(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return XPoly(self.vars, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = XPoly.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = XPoly._align(self, other)
        out = {}
        for m1, c1 in a.terms:
            for m2, c2 in b.terms:
                key = tuple(x + y for x, y in zip(m1, m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return XPoly.make(a.vars, out)

    __rmul__ = __mul__

    def scale(self, c) -> "XPoly":
        c = Fraction(c)
        return XPoly(self.vars, tuple((m, cc * c) for m, cc in self.terms)) if c else \
            XPoly.make(self.vars, {})

    def __pow__(self, n: int):
        result = XPoly.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def degree_in(self, var: str) -> int:
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max((m[i] for m, _ in self.terms), default=0)

    # -- specialization ----------------------------------------------------------

    def eval_rational(self, point: Mapping[str, Fraction]) -> Fraction:
        acc = Fraction(0)
        for mono, c in self.terms:
            v = c
            for var, e in zip(self.vars, mono):
                if e:
                    v *= Fraction(point[var]) ** e
            acc += v
        return acc

    def eval_series(self, point: Mapping[str, Series]) -> Series:
        arity = None
        for s in point.values():
            if s.arity is not None:
                arity = s.arity
        acc = Series.zero(arity)
        pows: dict = {}
        for mono, c in self.terms:
            term = Series.constant(c, arity)
            for var, e in zip(self.vars, mono):
                if e:
                    key = (var, e)
                    if key not in pows:
                        pows[key] = point[var] ** e
                    term = term * pows[key]
            acc = acc + term
        return acc

    def z_coefficients(self, z_name: str = "z") -> list["XPoly"]:
        """Coefficients of powers of z, as polynomials in the other variables."""
        rest = tuple(v for v in self.vars if v != z_name)
        if z_name not in self.vars:
            return [self]
        zi = self.vars.index(z_name)
        buckets: dict[int, dict] = {}
        for mono, c in self.terms:
            k = mono[zi]
            reduced = tuple(e for j, e in enumerate(mono) if j != zi)
            buckets.setdefault(k, {})[reduced] = c
        top = max(buckets, default=0)
        return [XPoly.make(rest, buckets.get(k, {})) for k in range(top + 1)]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms, key=lambda t: (-sum(t[0]), t[0])):
            syms = [f"{v}^{e}" if e > 1 else v
                    for v, e in zip(self.vars, mono) if e]
            body = "*".join(syms)
            if not body:
                chunk = str(c)
            elif c == 1:
                chunk = body
            elif c == -1:
                chunk = f"-{body}"
            else:
                chunk = f"{c}*{body}"
            if parts and not chunk.startswith("-"):
                parts.append("+")
            parts.append(chunk)
        return " ".join(parts)

    def __repr__(self):
        return f"XPoly({self})"
