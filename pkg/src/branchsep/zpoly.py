"""Polynomials in z with truncated-series coefficients.

Carries the weighted-minimum calculus (nu_z, support sets, initial forms),
divided derivatives, Horner evaluation, and exact gcd/squarefree structure
for polynomials whose coefficients are exact finite series.  Also re-exports
Sturm counting for rational specializations, used by good-position checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Callable, Optional, Sequence

from .errors import UnknownOrder, ZeroPolynomial
from .qpoly import count_real_roots
from .scalars import Scalar
from .series import INF, Series, ValT, exp_scale, val_add, val_cmp


@dataclass(frozen=True)
class ZPoly:
    """a_0 + a_1 z + ... + a_d z^d with Series coefficients, a_d nonzero."""

    coeffs: tuple = ()

    @staticmethod
    def make(coeffs: Sequence[Series]) -> "ZPoly":
        cs = list(coeffs)
        while cs and cs[-1].is_zero_exact():
            cs.pop()
        return ZPoly(tuple(cs))

    @staticmethod
    def from_scalars(scalars, arity=None) -> "ZPoly":
        return ZPoly.make([Series.constant(c, arity) for c in scalars])

    @staticmethod
    def variable(arity=None) -> "ZPoly":
        return ZPoly.make([Series.zero(arity), Series.constant(1, arity)])

    # -- structure -------------------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        if self.is_zero():
            return False
        lead = self.coeffs[-1]
        one = Series.constant(1, lead.arity)
        return lead.is_exact() and lead.terms == one.terms

    def is_exact(self) -> bool:
        return all(c.is_exact() for c in self.coeffs)

    def arity(self):
        for c in self.coeffs:
            if c.arity is not None or c.terms:
                return c.arity
        return None

    def coeff(self, i: int) -> Series:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Series.zero(self.arity())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ZPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return ZPoly.make([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return ZPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Series):
            return ZPoly.make([c * other for c in self.coeffs])
        if not isinstance(other, ZPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZPoly()
        out = [Series.zero(self.arity()) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ZPoly.make(out)

    def scale(self, c) -> "ZPoly":
        return ZPoly.make([s.scale(c) for s in self.coeffs])

    def __pow__(self, n: int):
        result = ZPoly.from_scalars([1], self.arity())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def divided_derivative(self, k: int) -> "ZPoly":
        """Coefficient i of the result is binomial(i+k, k) * a_{i+k}."""
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        if k == 0:
            return self
        if k > self.degree():
            return ZPoly()
        out = [self.coeffs[i + k].scale(comb(i + k, k))
               for i in range(len(self.coeffs) - k)]
        return ZPoly.make(out)

    def derivative(self) -> "ZPoly":
        return self.divided_derivative(1)

    def eval(self, s: Series) -> Series:
        acc = Series.zero(s.arity if s.arity is not None else self.arity())
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def compose_shift(self, s: Series) -> "ZPoly":
        """g(z + s); coefficient i of the result is g^(i) evaluated at s."""
        return ZPoly.make([self.divided_derivative(i).eval(s)
                           for i in range(len(self.coeffs))])

    def reparam(self, a: int) -> "ZPoly":
        return ZPoly.make([c.reparam(a) for c in self.coeffs])

    def map_coeffs(self, f: Callable[[Series], Series]) -> "ZPoly":
        return ZPoly.make([f(c) for c in self.coeffs])

    def conj(self) -> "ZPoly":
        return ZPoly.make([c.conj() for c in self.coeffs])

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs)

    def denominator(self) -> int:
        return lcm(*[c.denominator() for c in self.coeffs]) if self.coeffs else 1

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c.is_zero_exact():
                continue
            z = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            ctext = str(c)
            if ("+" in ctext[1:] or "-" in ctext[1:] or " " in ctext) and z:
                ctext = f"({ctext})"
            body = ctext if not z else (z if ctext == "1" else f"{ctext}*{z}")
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"ZPoly({self})"


# -- the nu_z calculus ---------------------------------------------------------


@dataclass(frozen=True)
class InitialFormZ:
    """Support indices attaining the weighted minimum, with leading data."""

    value: ValT
    support: tuple  # sorted indices
    leading: tuple  # pairs (index, (exponent, scalar)) for indices in support

    @property
    def delta(self) -> int:
        """Degree of the initial form."""
        return max(self.support)

    def as_scalar_poly(self) -> list[Scalar]:
        """Dense scalar coefficients of the residual polynomial."""
        out = [Scalar() for _ in range(self.delta + 1)]
        for i, (_, c) in self.leading:
            out[i] = c
        return out


def nu_z(g: ZPoly, nu_of_z: ValT, nu: Optional[Callable[[Series], ValT]] = None) -> InitialFormZ:
    """Weighted minimum min_i nu(a_i z^i) with nu(z) given, plus its support.

    ``nu`` defaults to the series order; coefficient orders that are unknown
    at the stored truncation raise UnknownOrder.
    """
    if g.is_zero():
        raise ZeroPolynomial("nu_z of the zero polynomial")
    if nu_of_z is not INF and val_cmp(nu_of_z, exp_scale(nu_of_z, 0)) < 0:
        raise ValueError("nu(z) must be nonnegative")
    nu = nu or (lambda s: s.order())
    best: ValT = INF
    weights = {}
    for i, a in enumerate(g.coeffs):
        if a.is_zero_exact():
            continue
        na = nu(a)
        if i == 0:
            w = na
        elif nu_of_z is INF:
            w = INF
        else:
            w = val_add(na, exp_scale(nu_of_z, i))
        weights[i] = w
        if val_cmp(w, best) < 0:
            best = w
    support = tuple(sorted(i for i, w in weights.items() if val_cmp(w, best) == 0))
    leading = []
    for i in support:
        a = g.coeffs[i]
        if a.terms:
            leading.append((i, a.leading()))
        else:  # exact zero contributes nothing; can only happen for best == INF
            continue
    return InitialFormZ(best, support, tuple(leading))


def delta_of(g: ZPoly, nu_of_z: ValT, nu=None) -> int:
    return nu_z(g, nu_of_z, nu).delta


# -- Sturm counting on rational specializations --------------------------------


def sturm_count(p: Sequence[Fraction], lo=None, hi=INF, multiplicity: bool = False) -> int:
    """Exact real-root count of a rational polynomial on an open interval.

    ``p`` is dense little-endian.  ``lo=None`` is -infinity, ``hi=INF`` is
    +infinity.  The companion multiplicity mode counts with multiplicity by
    iterating over squarefree factors.
    """
    return count_real_roots(p, lo, hi, multiplicity)


# -- exact structure over finite series ----------------------------------------
#
# Exact series with a common exponent denominator N are polynomials in
# s = t^(1/N).  That turns gcd and squarefree questions about ZPoly into
# classical polynomial algebra over the scalar field.


def _series_to_dense(a: Series, N: int) -> list[Scalar]:
    if not a.is_exact():
        raise UnknownOrder("exact structure needs exact coefficients")
    out: list[Scalar] = []
    for e, c in a.terms:
        k = int(e * N)
        if Fraction(k, N) != e:
            raise ValueError("denominator does not clear the exponents")
        while len(out) <= k:
            out.append(Scalar())
        out[k] = c
    return _sstrip(out)


def _dense_to_series(p: list[Scalar], N: int) -> Series:
    return Series.make([(Fraction(k, N), c) for k, c in enumerate(p)], INF, None)


def _sstrip(p: list[Scalar]) -> list[Scalar]:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _sdivmod(a: list[Scalar], b: list[Scalar]):
    if not b:
        raise ZeroDivisionError("series-polynomial division by zero")
    r = list(a)
    quo = [Scalar() for _ in range(max(0, len(a) - len(b) + 1))]
    while r and len(r) >= len(b):
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        quo[k] = c
        for i, bc in enumerate(b):
            r[i + k] = r[i + k] - c * bc
        _sstrip(r)
    return _sstrip(quo), r


def _sgcd(a: list[Scalar], b: list[Scalar]) -> list[Scalar]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _sdivmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


class _SZPoly:
    """Polynomial in z with dense scalar-polynomial (K[s]) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [list(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs

    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs


def _sadd(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Scalar()
        y = b[i] if i < len(b) else Scalar()
        out.append(x + y)
    return _sstrip(out)


def _smul(a, b):
    if not a or not b:
        return []
    out = [Scalar() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _sstrip(out)


def _sz_content(p: _SZPoly) -> list[Scalar]:
    """gcd in K[s] of the coefficients, monic in s."""
    g: list[Scalar] = []
    for c in p.coeffs:
        if not c:
            continue
        g = _sgcd(g, c) if g else ([x / c[-1] for x in c])
        if len(g) == 1:
            break
    return g or [Scalar.rational(1)]


def _sz_scale_div(p: _SZPoly, d: list[Scalar]) -> _SZPoly:
    out = []
    for c in p.coeffs:
        if not c:
            out.append([])
            continue
        quo, rem = _sdivmod(c, d)
        assert not rem, "content division must be exact"
        out.append(quo)
    return _SZPoly(out)


def _sz_primitive(p: _SZPoly) -> _SZPoly:
    if p.is_zero():
        return p
    return _sz_scale_div(p, _sz_content(p))


def _sz_prem(a: _SZPoly, b: _SZPoly) -> _SZPoly:
    """Pseudo-remainder: lc(b)^k * a mod b, fraction-free."""
    r = [list(c) for c in a.coeffs]
    db = b.deg()
    lb = b.coeffs[-1]
    while r and len(r) - 1 >= db:
        top = r[-1]
        r = [_smul(c, lb) for c in r]
        k = len(r) - 1 - db
        for i, bc in enumerate(b.coeffs):
            r[i + k] = _sadd(r[i + k], [-x for x in _smul(top, bc)])
        while r and not r[-1]:
            r.pop()
    return _SZPoly(r)


def _sz_gcd_primitive(a: _SZPoly, b: _SZPoly) -> _SZPoly:
    """Primitive PRS gcd; the result is primitive in K[s][z]."""
    a, b = _sz_primitive(a), _sz_primitive(b)
    while not b.is_zero():
        r = _sz_primitive(_sz_prem(a, b))
        a, b = b, r
    return a


def _sz_exact_div(a: _SZPoly, b: _SZPoly) -> _SZPoly:
    """Exact division in K[s][z]; stepwise coefficient divisions stay exact."""
    r = [list(c) for c in a.coeffs]
    db = b.deg()
    lb = b.coeffs[-1]
    quo = [[] for _ in range(max(0, len(r) - db))]
    while r and len(r) - 1 >= db:
        q, rem = _sdivmod(r[-1], lb)
        assert not rem, "exact z-division hit a non-divisible leading coefficient"
        k = len(r) - 1 - db
        quo[k] = q
        for i, bc in enumerate(b.coeffs):
            r[i + k] = _sadd(r[i + k], [-x for x in _smul(q, bc)])
        while r and not r[-1]:
            r.pop()
    assert not r, "exact z-division left a remainder"
    return _SZPoly(quo)


def _sz_monicize(p: _SZPoly) -> _SZPoly:
    """Divide by the leading K[s] coefficient (exact for factors of monics)."""
    if p.is_zero():
        return p
    lead = p.coeffs[-1]
    if len(lead) == 1:
        inv = lead[0].inverse()
        return _SZPoly([[x * inv for x in c] for c in p.coeffs])
    out = []
    for c in p.coeffs:
        if not c:
            out.append([])
            continue
        quo, rem = _sdivmod(c, lead)
        assert not rem, "monic normalization must be exact for factors of monics"
        out.append(quo)
    return _SZPoly(out)


def _sz_deriv(p: _SZPoly) -> _SZPoly:
    return _SZPoly([[x * Scalar.rational(i) for x in c]
                    for i, c in enumerate(p.coeffs)][1:])


def _sz_sub(a: _SZPoly, b: _SZPoly) -> _SZPoly:
    n = max(len(a.coeffs), len(b.coeffs))
    out = []
    for i in range(n):
        x = a.coeffs[i] if i < len(a.coeffs) else []
        y = b.coeffs[i] if i < len(b.coeffs) else []
        out.append(_sadd(x, [-v for v in y]))
    return _SZPoly(out)


def _zpoly_to_sz(g: ZPoly, N: int) -> _SZPoly:
    return _SZPoly([_series_to_dense(c, N) for c in g.coeffs])


def _sz_to_zpoly(p: _SZPoly, N: int) -> ZPoly:
    return ZPoly.make([_dense_to_series(c, N) for c in p.coeffs])


def zpoly_gcd(g: ZPoly, h: ZPoly) -> ZPoly:
    """Monic gcd of two exact-coefficient polynomials over the series field.

    Monic factors of monic polynomials over the valuation ring stay in the
    ring, so the normalization is exact whenever either input is monic.
    """
    N = lcm(g.denominator(), h.denominator())
    d = _sz_gcd_primitive(_zpoly_to_sz(g, N), _zpoly_to_sz(h, N))
    if d.is_zero():
        return ZPoly()
    return _sz_to_zpoly(_sz_monicize(d), N)


def squarefree_factors(g: ZPoly) -> list[tuple[ZPoly, int]]:
    """Yun decomposition g = lc * prod F_i^i over the series fraction field.

    Requires exact coefficients; the F_i come out monic with exact series
    coefficients.
    """
    if g.is_zero():
        raise ZeroPolynomial("squarefree decomposition of the zero polynomial")
    N = g.denominator()
    p = _zpoly_to_sz(g, N)
    if p.deg() == 0:
        return []
    dp = _sz_deriv(p)
    a = _sz_monicize(_sz_gcd_primitive(p, dp))
    if a.deg() == 0:
        return [(_sz_to_zpoly(_sz_monicize(p), N), 1)]
    b = _sz_exact_div(p, a)
    c = _sz_exact_div(dp, a)
    d = _sz_sub(c, _sz_deriv(b))
    out = []
    i = 1
    while b.deg() > 0:
        pi = _sz_monicize(_sz_gcd_primitive(b, d))
        if pi.deg() > 0:
            out.append((_sz_to_zpoly(pi, N), i))
        b = _sz_exact_div(b, pi) if pi.deg() > 0 else b
        c = _sz_exact_div(d, pi) if pi.deg() > 0 else d
        d = _sz_sub(c, _sz_deriv(b))
        i += 1
    return out


def radical(g: ZPoly) -> ZPoly:
    """Product of the distinct monic factors (g with multiplicities dropped)."""
    out = ZPoly.from_scalars([1], g.arity())
    for f, _ in squarefree_factors(g):
        out = out * f
    return out
