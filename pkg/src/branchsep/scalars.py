"""Exact scalar arithmetic in subfields of the algebraic numbers.

A :class:`Scalar` is an element of Q(sqrt(d), i) for a squarefree radicand
d > 1 (or of Q(i) when no radicand is in play), stored as exact rational
coordinates over the basis (1, sqrt(d), i, i*sqrt(d)).  Equality is exact,
real elements have a decidable sign, and square roots stay inside the field
or fail loudly; nothing is ever rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DegreeTooHigh

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Caps keeping integer factoring inside root finders from running away.
_FACTOR_CAP = 10**12
_TRIAL_LIMIT = 10**6


def _merge_d(x: Optional[int], y: Optional[int]) -> Optional[int]:
    if x is None:
        return y
    if y is None or x == y:
        return x
    raise DegreeTooHigh(f"cannot mix quadratic extensions sqrt({x}) and sqrt({y})")


def _square_split(n: int) -> tuple[int, int]:
    """Write |n| = u^2 * m with m squarefree; return (u, m)."""
    if n == 0:
        return 0, 1
    n = abs(n)
    if n > _FACTOR_CAP:
        raise DegreeTooHigh(f"radicand {n} too large to factor")
    u, m, p = 1, 1, 2
    while p * p <= n and p <= _TRIAL_LIMIT:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            u *= p ** (k // 2)
            if k % 2:
                m *= p
        p += 1 if p == 2 else 2
    m *= n  # leftover prime factor
    return u, m


@dataclass(frozen=True, slots=True)
class Scalar:
    """(ra + rb*sqrt(d)) + (ia + ib*sqrt(d))*i with rational coordinates."""

    ra: Fraction = _ZERO
    rb: Fraction = _ZERO
    ia: Fraction = _ZERO
    ib: Fraction = _ZERO
    d: Optional[int] = None

    def __post_init__(self):
        if self.rb == 0 and self.ib == 0 and self.d is not None:
            object.__setattr__(self, "d", None)
        if self.d is not None and self.d <= 1:
            raise ValueError("radicand must be a squarefree integer > 1")

    # -- constructors -------------------------------------------------

    @staticmethod
    def rational(q) -> "Scalar":
        return Scalar(Fraction(q))

    @staticmethod
    def imaginary(q) -> "Scalar":
        return Scalar(ia=Fraction(q))

    @staticmethod
    def root_term(q, d: int) -> "Scalar":
        """q * sqrt(d)."""
        u, m = _square_split(d)
        if m == 1:
            return Scalar(Fraction(q) * u)
        return Scalar(rb=Fraction(q) * u, d=m)

    # -- coercion helpers ---------------------------------------------

    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(Fraction(x))
        return NotImplemented

    # -- predicates and parts -----------------------------------------

    def is_zero(self) -> bool:
        return not (self.ra or self.rb or self.ia or self.ib)

    def is_rational(self) -> bool:
        return not (self.rb or self.ia or self.ib)

    def is_real(self) -> bool:
        return not (self.ia or self.ib)

    def as_fraction(self) -> Optional[Fraction]:
        return self.ra if self.is_rational() else None

    def re(self) -> "Scalar":
        return Scalar(self.ra, self.rb, d=self.d)

    def im(self) -> "Scalar":
        return Scalar(self.ia, self.ib, d=self.d)

    def conj(self) -> "Scalar":
        return Scalar(self.ra, self.rb, -self.ia, -self.ib, self.d)

    def abs2(self) -> "Scalar":
        """|x|^2, a real element of the field."""
        return self.re() * self.re() + self.im() * self.im()

    # -- ring operations ----------------------------------------------

    def _is_plain(self) -> bool:
        return not (self.rb or self.ia or self.ib)

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._is_plain() and other._is_plain():
            return Scalar(self.ra + other.ra)
        d = _merge_d(self.d, other.d)
        return Scalar(self.ra + other.ra, self.rb + other.rb,
                      self.ia + other.ia, self.ib + other.ib, d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.ra, -self.rb, -self.ia, -self.ib, self.d)

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar._coerce(other) - self

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._is_plain() and other._is_plain():
            return Scalar(self.ra * other.ra)
        d = _merge_d(self.d, other.d)
        dd = d if d is not None else 0
        # complex product over the real quadratic subfield
        a1, b1, a2, b2 = self.ra, self.rb, self.ia, self.ib
        c1, e1, c2, e2 = other.ra, other.rb, other.ia, other.ib

        def qmul(p, q, r, s):  # (p+q*sqrt(d))*(r+s*sqrt(d))
            return p * r + q * s * dd, p * s + q * r

        rr_a, rr_b = qmul(a1, b1, c1, e1)
        ii_a, ii_b = qmul(a2, b2, c2, e2)
        ri_a, ri_b = qmul(a1, b1, c2, e2)
        ir_a, ir_b = qmul(a2, b2, c1, e1)
        return Scalar(rr_a - ii_a, rr_b - ii_b, ri_a + ir_a, ri_b + ir_b, d)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        if self._is_plain():
            return Scalar(1 / self.ra)
        c = self.conj()
        n = (self * c)  # real: p + q*sqrt(d)
        p, q, dd = n.ra, n.rb, (n.d or 0)
        denom = p * p - q * q * dd
        inv_n = Scalar(p / denom, -q / denom, d=n.d)
        return c * inv_n

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar(_ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return not self.is_zero()

    # -- order structure ----------------------------------------------

    def sign(self) -> int:
        """Exact sign of a real element; raises on complex input."""
        if not self.is_real():
            raise ValueError("sign of a non-real scalar")
        a, b = self.ra, self.rb
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sa == sb:
            return sa
        # a + b*sqrt(d) with opposite signs: compare a^2 against b^2*d
        t = a * a - b * b * self.d
        return sa if t > 0 else sb  # t == 0 impossible for squarefree d > 1

    def __lt__(self, other):
        return (self - Scalar._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Scalar._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Scalar._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Scalar._coerce(other)).sign() >= 0

    # -- square roots --------------------------------------------------

    def sqrt(self) -> Optional["Scalar"]:
        """A square root inside Q(sqrt(d), i), or None when there is none.

        May introduce the radicand on a previously rational value; d is
        never changed once set.
        """
        if self.is_zero():
            return Scalar(_ZERO)
        if self.is_rational():
            return _sqrt_of_fraction(self.ra, self.d)
        if self.is_real():
            return _sqrt_of_quadratic(self)
        return _sqrt_of_complex(self)

    # -- text -----------------------------------------------------------

    def __str__(self):
        parts = []

        def emit(coef: Fraction, sym: str):
            if coef == 0:
                return
            sign = "-" if coef < 0 else ("+" if parts else "")
            mag = abs(coef)
            if sym and mag == 1:
                body = sym
            elif sym:
                body = f"{mag}*{sym}"
            else:
                body = str(mag)
            parts.append(sign + body)

        emit(self.ra, "")
        emit(self.rb, f"sqrt({self.d})" if self.d else "sqrt(?)")
        emit(self.ia, "i")
        emit(self.ib, f"i*sqrt({self.d})" if self.d else "i*sqrt(?)")
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Scalar({self})"


ZERO = Scalar()
ONE = Scalar(_ONE)
I = Scalar(ia=_ONE)


def _sqrt_of_fraction(q: Fraction, d: Optional[int]) -> Optional[Scalar]:
    if q == 0:
        return Scalar(_ZERO)
    neg = q < 0
    q = abs(q)
    un, mn = _square_split(q.numerator)
    ud, md = _square_split(q.denominator)
    # sqrt(q) = (un/(ud*md)) * sqrt(mn*md)
    rat = Fraction(un, ud * md)
    u2, m = _square_split(mn * md)
    rat *= u2
    if m == 1:
        root = Scalar(rat)
    else:
        if d is not None and d != m:
            return None
        root = Scalar(rb=rat, d=m)
    return root * I if neg else root


def _sqrt_of_quadratic(x: Scalar) -> Optional[Scalar]:
    # x = a + b*sqrt(d) real, b != 0; try y = u + v*sqrt(d) with rational u, v
    if x.sign() < 0:
        inner = (-x).sqrt()
        return None if inner is None else inner * I
    a, b, d = x.ra, x.rb, x.d
    disc = a * a - b * b * d
    r = _rational_sqrt(disc)
    if r is None:
        return None
    for s in (r, -r):
        u2 = (a + s) / 2
        u = _rational_sqrt(u2)
        if u is None or u == 0:
            continue
        v = b / (2 * u)
        if (Scalar(u, v, d=d) ** 2) == x:
            return Scalar(u, v, d=d)
    return None


def _sqrt_of_complex(x: Scalar) -> Optional[Scalar]:
    # y = u + v*i with u, v in the real subfield; u^2 = (Re + |x|)/2
    n = x.abs2().sqrt()
    if n is None or not n.is_real():
        return None
    p = x.re()
    u2 = (p + n) / Scalar(Fraction(2))
    u = u2.sqrt()
    if u is None or not u.is_real() or u.is_zero():
        # Re(x) = -|x| means x is a negative real (handled earlier) -- give up
        return None
    v = x.im() / (Scalar(Fraction(2)) * u)
    y = u + v * I
    return y if (y * y) == x else None


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    if q == 0:
        return _ZERO
    un, mn = _square_split(q.numerator)
    ud, md = _square_split(q.denominator)
    if mn != 1 or md != 1:
        return None
    return Fraction(un, ud)


# -- polynomial roots inside the field ---------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n > _FACTOR_CAP:
        raise DegreeTooHigh(f"coefficient {n} too large for rational root search")
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            out.append(n // k)
        k += 1
        if k > _TRIAL_LIMIT:
            raise DegreeTooHigh("rational root search exceeded trial limit")
    return sorted(set(out))


def _rational_roots(coeffs: list[Fraction]) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicity of a rational polynomial."""
    from math import lcm

    den = lcm(*[c.denominator for c in coeffs]) if coeffs else 1
    ints = [int(c * den) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if len(ints) <= 1:
        return []
    from math import gcd

    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    lo_nz = next(i for i, c in enumerate(ints) if c != 0)
    roots: list[tuple[Fraction, int]] = []
    if lo_nz > 0:
        roots.append((_ZERO, lo_nz))
        ints = ints[lo_nz:]
    if len(ints) <= 1:
        return roots
    cands = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    work = [Fraction(c) for c in ints]
    for r in sorted(cands):
        mult = 0
        while len(work) > 1:
            quo, rem = _deflate(work, r)
            if rem != 0:
                break
            work = quo
            mult += 1
        if mult:
            roots.append((r, mult))
    return roots


def _deflate(coeffs: list[Fraction], r: Fraction) -> tuple[list[Fraction], Fraction]:
    """Synthetic division by (X - r); returns (quotient, remainder)."""
    acc = coeffs[-1]
    quo = [acc]
    for c in reversed(coeffs[:-1]):
        acc = c + acc * r
        quo.append(acc)
    rem = quo.pop()
    quo.reverse()
    return quo, rem


def polynomial_roots(coeffs: Sequence[Scalar]) -> list[tuple[Scalar, int]]:
    """All roots, with multiplicity, of a polynomial over the scalar field.

    Supported shapes: any degree if the nonzero part is reachable through
    rational-root deflation, plus a final factor of degree <= 2 solved by
    the quadratic formula (possibly introducing the radicand or i).  Raises
    DegreeTooHigh otherwise -- this is the contract boundary of the scalar
    field, not a numerical failure.
    """
    cs = [Scalar._coerce(c) for c in coeffs]
    while cs and cs[-1].is_zero():
        cs.pop()
    if len(cs) <= 1:
        raise ValueError("constant polynomial has no well-defined root set")
    roots: list[tuple[Scalar, int]] = []
    lo = next(i for i, c in enumerate(cs) if not c.is_zero())
    if lo:
        roots.append((ZERO, lo))
        cs = cs[lo:]
    if all(c.is_rational() for c in cs):
        rr = _rational_roots([c.as_fraction() for c in cs])
        work = list(cs)
        for r, m in rr:
            if r == 0:
                continue
            for _ in range(m):
                quo, rem = _scalar_deflate(work, Scalar(r))
                assert rem.is_zero()
                work = quo
            roots.append((Scalar(r), m))
        cs = work
    if len(cs) - 1 == 0:
        return roots
    if len(cs) - 1 == 1:
        roots.append((-cs[0] / cs[1], 1))
        return roots
    if len(cs) - 1 == 2:
        c0, c1, c2 = cs
        disc = c1 * c1 - Scalar(Fraction(4)) * c0 * c2
        s = disc.sqrt()
        if s is None:
            raise DegreeTooHigh(f"quadratic discriminant {disc} has no root in the field")
        two_a = Scalar(Fraction(2)) * c2
        r1 = (-c1 + s) / two_a
        r2 = (-c1 - s) / two_a
        if r1 == r2:
            roots.append((r1, 2))
        else:
            roots.append((r1, 1))
            roots.append((r2, 1))
        return roots
    raise DegreeTooHigh(
        f"irreducible factor of degree {len(cs) - 1} exceeds the supported scalar fields"
    )


def _scalar_deflate(coeffs: list[Scalar], r: Scalar) -> tuple[list[Scalar], Scalar]:
    acc = coeffs[-1]
    quo = [acc]
    for c in reversed(coeffs[:-1]):
        acc = c + acc * r
        quo.append(acc)
    rem = quo.pop()
    quo.reverse()
    return quo, rem
