"""Truncated generalized power series with exact coefficients.

Exponents live either in the rationals (Puiseux mode, denominators bounded
per series) or in Z^n under the lexicographic order (evaluation-only mode).
Every series carries a truncation order ``trunc``: terms with exponent >=
``trunc`` are unknown, and INF marks an exact series.  All values are
immutable; operations propagate truncation pessimistically and never round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import ExponentGroupMismatch, Indeterminate, UnknownOrder
from .scalars import Scalar


class _Infinity:
    """The distinguished value +infinity; absorbing and maximal."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("branchsep-INF")


INF = _Infinity()

ExpT = Union[Fraction, tuple]
ValT = Union[Fraction, tuple, _Infinity]


def exp_add(a: ExpT, b: ExpT) -> ExpT:
    if isinstance(a, tuple) != isinstance(b, tuple):
        raise ExponentGroupMismatch("cannot add exponents from different groups")
    if isinstance(a, tuple):
        if len(a) != len(b):
            raise ExponentGroupMismatch("lexicographic exponents of different arity")
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def exp_neg(a: ExpT) -> ExpT:
    return tuple(-x for x in a) if isinstance(a, tuple) else -a


def exp_sub(a: ExpT, b: ExpT) -> ExpT:
    return exp_add(a, exp_neg(b))


def exp_scale(a: ExpT, n: int) -> ExpT:
    return tuple(x * n for x in a) if isinstance(a, tuple) else a * n


def exp_div(a: ExpT, n: int):
    """Image of a in the divisible hull; tuples acquire Fraction entries."""
    if isinstance(a, tuple):
        return tuple(Fraction(x, n) for x in a)
    return Fraction(a, n) if not isinstance(a, Fraction) else a / n

def exp_cmp(a: ExpT, b: ExpT) -> int:
    if isinstance(a, tuple) != isinstance(b, tuple):
        raise ExponentGroupMismatch("cannot compare exponents from different groups")
    if a == b:
        return 0
    return -1 if a < b else 1


def val_cmp(a: ValT, b: ValT) -> int:
    if a is INF and b is INF:
        return 0
    if a is INF:
        return 1
    if b is INF:
        return -1
    return exp_cmp(a, b)


def val_add(a: ValT, b: ValT) -> ValT:
    if a is INF or b is INF:
        return INF
    return exp_add(a, b)


def val_min(*vals: ValT) -> ValT:
    best = vals[0]
    for v in vals[1:]:
        if val_cmp(v, best) < 0:
            best = v
    return best


def val_max(*vals: ValT) -> ValT:
    best = vals[0]
    for v in vals[1:]:
        if val_cmp(v, best) > 0:
            best = v
    return best


def _exp_denominator(e: ExpT) -> int:
    return e.denominator if isinstance(e, Fraction) else 1


@dataclass(frozen=True)
class Series:
    """Finite sum of c*t^e terms, ordered by exponent, plus a truncation."""

    terms: tuple = ()
    trunc: ValT = INF
    arity: Optional[int] = None  # None: rational exponents; n: Z^n lex

    # -- construction ---------------------------------------------------

    @staticmethod
    def make(terms: Iterable, trunc: ValT = INF, arity: Optional[int] = None) -> "Series":
        """Normalize: merge equal exponents, drop zeros and terms >= trunc."""
        merged: dict = {}
        for e, c in terms:
            if not isinstance(c, Scalar):
                c = Scalar.rational(c)
            if isinstance(e, int):
                e = Fraction(e)
            if isinstance(e, tuple):
                if arity is None:
                    arity = len(e)
                elif arity != len(e):
                    raise ExponentGroupMismatch("mixed exponent arities in one series")
            elif arity is not None:
                raise ExponentGroupMismatch("rational exponent in a lex-exponent series")
            merged[e] = merged.get(e, Scalar()) + c
        kept = []
        for e in sorted(merged):
            if trunc is not INF and exp_cmp(e, trunc) >= 0:
                continue
            if not merged[e].is_zero():
                kept.append((e, merged[e]))
        return Series(tuple(kept), trunc, arity)

    @staticmethod
    def zero(arity: Optional[int] = None) -> "Series":
        return Series((), INF, arity)

    @staticmethod
    def constant(c, arity: Optional[int] = None) -> "Series":
        if not isinstance(c, Scalar):
            c = Scalar.rational(c)
        zero_exp: ExpT = (0,) * arity if arity is not None else Fraction(0)
        return Series.make([(zero_exp, c)], INF, arity)

    @staticmethod
    def t_power(e, c=1, arity: Optional[int] = None) -> "Series":
        if isinstance(e, tuple) and arity is None:
            arity = len(e)
        if isinstance(e, int):
            e = Fraction(e)
        return Series.make([(e, c)], INF, arity)

    # -- basic structure --------------------------------------------------

    def _is_groupless(self) -> bool:
        """Exact constants are compatible with every exponent group."""
        return (self.arity is None and self.trunc is INF
                and all(e == 0 for e, _ in self.terms))

    def _with_arity(self, n: Optional[int]) -> "Series":
        if n is None or n == self.arity:
            return self
        zero = (0,) * n
        return Series(tuple((zero, c) for _, c in self.terms), INF, n)

    def _coerce_group(self, other: "Series") -> tuple["Series", "Series"]:
        if self.arity == other.arity:
            return self, other
        if self._is_groupless():
            return self._with_arity(other.arity), other
        if other._is_groupless():
            return self, other._with_arity(self.arity)
        raise ExponentGroupMismatch(
            f"series over different exponent groups: {self.arity} vs {other.arity}"
        )

    def is_exact(self) -> bool:
        return self.trunc is INF

    def is_zero_exact(self) -> bool:
        return not self.terms and self.trunc is INF

    def known_nonzero(self) -> bool:
        return bool(self.terms)

    def order(self) -> ValT:
        """Least exponent with nonzero coefficient; INF for the exact zero."""
        if self.terms:
            return self.terms[0][0]
        if self.trunc is INF:
            return INF
        raise UnknownOrder(f"series vanishes up to its truncation order {self.trunc}")

    def order_lower_bound(self) -> ValT:
        """Known order, or the truncation bound when all stored terms vanish."""
        return self.terms[0][0] if self.terms else self.trunc

    def leading(self) -> tuple[ExpT, Scalar]:
        if not self.terms:
            raise UnknownOrder("zero series has no leading term")
        return self.terms[0]

    def leading_monomial(self) -> "Series":
        e, c = self.leading()
        return Series.t_power(e, c, self.arity)

    def coefficient(self, e: ExpT) -> Scalar:
        for ee, c in self.terms:
            if ee == e:
                return c
        return Scalar()

    def denominator(self) -> int:
        from math import lcm

        return lcm(*[_exp_denominator(e) for e, _ in self.terms]) if self.terms else 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        a, b = self._coerce_group(other)
        trunc = a.trunc if b.trunc is INF else (
            b.trunc if a.trunc is INF else val_min(a.trunc, b.trunc)
        )
        return Series.make(list(a.terms) + list(b.terms), trunc, a.arity)

    def __neg__(self):
        return Series(tuple((e, -c) for e, c in self.terms), self.trunc, self.arity)

    def __sub__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        a, b = self._coerce_group(other)
        arity = a.arity
        if a.is_zero_exact() or b.is_zero_exact():
            return Series.zero(arity)
        if arity is not None and not (a.is_exact() and b.is_exact()):
            raise ExponentGroupMismatch("lex-exponent series must be exact to multiply")
        trunc: ValT = INF
        bounds = []
        if a.trunc is not INF:
            bounds.append(val_add(a.trunc, b.order_lower_bound()))
        if b.trunc is not INF:
            bounds.append(val_add(b.trunc, a.order_lower_bound()))
        if bounds:
            trunc = val_min(*bounds)
        prods = []
        for e1, c1 in a.terms:
            for e2, c2 in b.terms:
                prods.append((exp_add(e1, e2), c1 * c2))
        return Series.make(prods, trunc, arity)

    def scale(self, c) -> "Series":
        if not isinstance(c, Scalar):
            c = Scalar.rational(c)
        if c.is_zero():
            return Series.zero(self.arity)
        return Series(tuple((e, cc * c) for e, cc in self.terms), self.trunc, self.arity)

    def shift_exp(self, e: ExpT) -> "Series":
        """Multiply by the monomial t^e."""
        if isinstance(e, int):
            e = Fraction(e)
        trunc = self.trunc if self.trunc is INF else exp_add(self.trunc, e)
        return Series(tuple((exp_add(ee, e), c) for ee, c in self.terms), trunc, self.arity)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative series powers are not supported")
        result = Series.constant(1, self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- reparametrization and truncation -----------------------------------

    def reparam(self, a: int) -> "Series":
        """Replace t by t^a (rational exponent group only)."""
        if self.arity is not None:
            raise ExponentGroupMismatch("reparametrization needs rational exponents")
        if a <= 0:
            raise ValueError("reparametrization factor must be a positive integer")
        trunc = self.trunc if self.trunc is INF else self.trunc * a
        return Series(tuple((e * a, c) for e, c in self.terms), trunc, self.arity)

    def truncate_at(self, bound: ValT) -> "Series":
        if bound is INF:
            return self
        trunc = bound if self.trunc is INF else val_min(self.trunc, bound)
        return Series(tuple((e, c) for e, c in self.terms if exp_cmp(e, trunc) < 0),
                      trunc, self.arity)

    # -- complex structure ----------------------------------------------------

    def conj(self) -> "Series":
        return Series(tuple((e, c.conj()) for e, c in self.terms), self.trunc, self.arity)

    def re(self) -> "Series":
        return Series(tuple((e, c.re()) for e, c in self.terms if not c.re().is_zero()),
                      self.trunc, self.arity)

    def im(self) -> "Series":
        return Series(tuple((e, c.im()) for e, c in self.terms if not c.im().is_zero()),
                      self.trunc, self.arity)

    def is_real(self) -> bool:
        return all(c.is_real() for _, c in self.terms)

    # -- order structure ---------------------------------------------------------

    def sign(self) -> int:
        """Sign for t -> 0+ (all group generators positive)."""
        if not self.terms:
            if self.trunc is INF:
                return 0
            raise Indeterminate(f"sign unknown below truncation {self.trunc}")
        return self.leading()[1].sign()

    def compare(self, other: "Series") -> int:
        """Total order induced by t positive infinitesimal; exact or raises."""
        diff = self - other
        return diff.sign()

    def eq_known(self, other: "Series") -> bool:
        """True when the two series agree on all stored terms."""
        return self.terms == other.terms

    # -- text -----------------------------------------------------------------

    def __str__(self):
        return series_to_text(self)

    def __repr__(self):
        return f"Series({series_to_text(self)})"


def _exp_to_text(e: ExpT) -> str:
    if isinstance(e, tuple):
        return "(" + ",".join(str(x) for x in e) + ")"
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e})"


def _coeff_to_text(c: Scalar) -> str:
    s = str(c)
    if any(op in s[1:] for op in "+-") or "/" in s and not c.is_rational():
        return f"({s})"
    return s


def series_to_text(s: Series) -> str:
    parts = []
    for e, c in s.terms:
        zero_exp = e == Fraction(0) or (isinstance(e, tuple) and all(x == 0 for x in e))
        if zero_exp:
            body = _coeff_to_text(c)
        else:
            t = f"t^{_exp_to_text(e)}" if str(_exp_to_text(e)) != "1" else "t"
            if c == Scalar.rational(1):
                body = t
            elif c == Scalar.rational(-1):
                body = f"-{t}"
            else:
                body = f"{_coeff_to_text(c)}*{t}"
        if parts and not body.startswith("-"):
            parts.append("+")
        parts.append(body)
    text = " ".join(parts) if parts else "0"
    if s.trunc is not INF:
        tail = f"O(t^{_exp_to_text(s.trunc)})"
        text = tail if text == "0" else f"{text} + {tail}"
    return text
