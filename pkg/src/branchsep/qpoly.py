"""Univariate polynomials with rational coefficients.

Dense little-endian coefficient lists.  Provides exact Sturm counting (the
workhorse behind good-position checks), Yun squarefree decomposition, a
Descartes-bisection root counter used as an independent oracle against
Sturm, resultants and discriminants via Bareiss elimination, and
Newton-identity helpers for symmetric-function manipulations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

from .errors import ZeroPolynomial
from .series import INF, _Infinity

Endpoint = Union[Fraction, int, _Infinity, None]  # None stands for -infinity

Q0 = Fraction(0)
Q1 = Fraction(1)


def qstrip(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def qdeg(p: Sequence) -> int:
    return len(p) - 1


def qadd(p, q):
    n = max(len(p), len(q))
    return qstrip([(p[i] if i < len(p) else Q0) + (q[i] if i < len(q) else Q0)
                   for i in range(n)])


def qneg(p):
    return [-c for c in p]


def qsub(p, q):
    return qadd(p, qneg(q))


def qmul(p, q):
    if not p or not q:
        return []
    out = [Q0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return qstrip(out)


def qdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    quo = [Q0] * max(0, len(p) - len(q) + 1)
    while r and len(r) >= len(q):
        c = r[-1] / q[-1]
        k = len(r) - len(q)
        quo[k] = c
        for i, b in enumerate(q):
            r[i + k] -= c * b
        qstrip(r)
    return qstrip(quo), r


def qeval(p, x: Fraction) -> Fraction:
    acc = Q0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def qderiv(p):
    return qstrip([c * i for i, c in enumerate(p)][1:])


def qgcd(p, q):
    a, b = qstrip(list(p)), qstrip(list(q))
    while b:
        a, b = b, qdivmod(a, b)[1]
    if a:
        a = [c / a[-1] for c in a]  # monic normalization
    return a


def qprimitive(p: Sequence[Fraction]) -> list[int]:
    """Integer primitive part, preserving signs."""
    if not p:
        return []
    den = lcm(*[Fraction(c).denominator for c in p])
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


def taylor_shift(p: Sequence[Fraction], a: Fraction) -> list[Fraction]:
    """Coefficients of p(x + a)."""
    res: list[Fraction] = []
    for c in reversed(p):
        new = [Q0] * (len(res) + 1)
        for i, rc in enumerate(res):  # new = res * (x + a)
            new[i + 1] += rc
            new[i] += rc * a
        new[0] += c
        res = new
    return qstrip(res)


def dilate(p: Sequence[Fraction], c: Fraction) -> list[Fraction]:
    """Coefficients of p(c * x)."""
    out, acc = [], Q1
    for coef in p:
        out.append(coef * acc)
        acc *= c
    return qstrip(out)


def squarefree_part(p):
    return qdivmod(p, qgcd(p, qderiv(p)))[0]


def squarefree_decomposition(p) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: p = lc * prod P_i^i with the P_i squarefree and monic."""
    p = qstrip(list(p))
    if not p:
        raise ZeroPolynomial("squarefree decomposition of the zero polynomial")
    p = [c / p[-1] for c in p]
    if qdeg(p) == 0:
        return []
    dp = qderiv(p)
    a = qgcd(p, dp)
    b = qdivmod(p, a)[0]
    c = qdivmod(dp, a)[0]
    d = qsub(c, qderiv(b))
    out = []
    i = 1
    while qdeg(b) > 0:
        pi = qgcd(b, d)
        if qdeg(pi) > 0:
            out.append((pi, i))
        b = qdivmod(b, pi)[0]
        c = qdivmod(d, pi)[0]
        d = qsub(c, qderiv(b))
        i += 1
    return out


# -- Sturm sequences ----------------------------------------------------------


def _int_primitive(p: list[int]) -> list[int]:
    g = 0
    for c in p:
        g = gcd(g, c)
    return [c // g for c in p] if g else p


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder r with s*a = q*b + r for some positive integer s."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    scalings = 0
    while r and len(r) - 1 >= db:
        top = r[-1]
        r = [lb * c for c in r]
        k = len(r) - 1 - db
        for i, bc in enumerate(b):
            r[i + k] -= top * bc
        while r and r[-1] == 0:
            r.pop()
        scalings += 1
    if lb < 0 and scalings % 2 == 1:
        r = [-c for c in r]
    return r


def sturm_chain(p: Sequence[Fraction]) -> list[list[int]]:
    """Signed remainder chain over the integers; only positive rescalings."""
    p0 = qprimitive(p)
    chain = [p0]
    p1 = _int_primitive([c * i for i, c in enumerate(p0)][1:])
    if p1:
        chain.append(p1)
    while len(chain[-1]) > 1:
        r = _int_prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_int_primitive([-c for c in r]))
    return chain


def _sign_at(p: Sequence[int], x: Endpoint) -> int:
    if not p:
        return 0
    if x is None:  # -infinity
        s = 1 if p[-1] > 0 else -1
        return s if (len(p) - 1) % 2 == 0 else -s
    if x is INF:
        return 1 if p[-1] > 0 else -1
    v = qeval([Fraction(c) for c in p], Fraction(x))
    return (v > 0) - (v < 0)


def _variations(chain, x: Endpoint) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Sequence[Fraction], lo: Endpoint = None, hi: Endpoint = INF,
                     multiplicity: bool = False) -> int:
    """Real roots of p in the open interval (lo, hi), exactly.

    ``lo=None`` means -infinity and ``hi=INF`` means +infinity.  The default
    counts distinct roots via Sturm's theorem on the squarefree part; the
    multiplicity mode sums over the squarefree decomposition.
    """
    p = qstrip([Fraction(c) for c in p])
    if not p:
        raise ZeroPolynomial("root counting needs a nonzero polynomial")
    if qdeg(p) == 0:
        return 0
    if lo is not None and hi is not INF and Fraction(lo) >= Fraction(hi):
        return 0
    if multiplicity:
        return sum(i * count_real_roots(pi, lo, hi)
                   for pi, i in squarefree_decomposition(p))
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    n = _variations(chain, lo) - _variations(chain, hi)
    # the variation difference counts roots in (lo, hi]; drop a root at hi
    if hi is not INF and qeval(sf, Fraction(hi)) == 0:
        n -= 1
    return n


# -- Descartes-bisection oracle ----------------------------------------------


def _descartes_variations(p: Sequence[Fraction]) -> int:
    signs = [(c > 0) - (c < 0) for c in p if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _deflate_at(p: list[Fraction], r: Fraction) -> list[Fraction]:
    acc = p[-1]
    quo = [acc]
    for c in reversed(p[:-1]):
        acc = c + acc * r
        quo.append(acc)
    assert quo.pop() == 0
    quo.reverse()
    return quo


def descartes_count(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in the open interval (lo, hi) by Descartes bisection.

    Deliberately independent of the Sturm machinery: uses only coefficient
    sign variations under Moebius transforms plus interval splitting.
    """
    p = squarefree_part(qstrip([Fraction(c) for c in p]))
    if not p or qdeg(p) == 0:
        return 0
    lo, hi = Fraction(lo), Fraction(hi)
    for e in (lo, hi):
        while qeval(p, e) == 0:
            p = _deflate_at(p, e)
    if qdeg(p) == 0:
        return 0

    def var_01(q: list[Fraction]) -> int:
        # variations of (1+x)^n q(1/(1+x)) bound the roots of q in (0, 1)
        return _descartes_variations(taylor_shift(list(reversed(q)), Q1))

    def vca(q: list[Fraction], a: Fraction, b: Fraction) -> int:
        mapped = dilate(taylor_shift(q, a), b - a)
        v = var_01(mapped)
        if v <= 1:
            return v
        m = (a + b) / 2
        extra = 0
        if qeval(q, m) == 0:
            q = _deflate_at(q, m)
            extra = 1
        return vca(q, a, m) + extra + vca(q, m, b)

    return vca(p, lo, hi)


def cauchy_root_bound(p: Sequence[Fraction]) -> Fraction:
    """All real roots lie in (-bound, bound)."""
    p = qstrip([Fraction(c) for c in p])
    if qdeg(p) < 1:
        return Q1
    return Q1 + max(abs(c) for c in p[:-1]) / abs(p[-1])


# -- resultants ---------------------------------------------------------------


def _bareiss_det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 0:
        return Q1
    m = [row[:] for row in m]
    sign = 1
    prev = Q1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Q0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = Q0
        prev = m[k][k]
    return sign * m[-1][-1]


def resultant(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    p = qstrip([Fraction(c) for c in p])
    q = qstrip([Fraction(c) for c in q])
    n, m = qdeg(p), qdeg(q)
    if n < 0 or m < 0:
        return Q0
    if n == 0:
        return p[0] ** m
    if m == 0:
        return q[0] ** n
    rows = []
    for i in range(m):
        rows.append([Q0] * i + list(reversed(p)) + [Q0] * (m - 1 - i))
    for i in range(n):
        rows.append([Q0] * i + list(reversed(q)) + [Q0] * (n - 1 - i))
    return _bareiss_det(rows)


def discriminant(p: Sequence[Fraction]) -> Fraction:
    p = qstrip([Fraction(c) for c in p])
    n = qdeg(p)
    if n < 1:
        raise ZeroPolynomial("discriminant needs degree >= 1")
    r = resultant(p, qderiv(p))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * r / p[-1]


# -- Newton identities --------------------------------------------------------


def power_sums_from_coeffs(p: Sequence[Fraction], upto: int) -> list[Fraction]:
    """Power sums s_1..s_upto of the roots of a polynomial (made monic)."""
    p = [Fraction(c) for c in p]
    n = qdeg(p)
    if p[-1] != 1:
        p = [c / p[-1] for c in p]
    e = [Q0] * (upto + 1)
    for k in range(1, upto + 1):
        e[k] = ((-1) ** k) * p[n - k] if k <= n else Q0
    s = [Q0] * (upto + 1)
    for k in range(1, upto + 1):
        acc = ((-1) ** (k - 1)) * k * e[k]
        for i in range(1, k):
            acc += ((-1) ** (k - 1 + i)) * e[k - i] * s[i]
        s[k] = acc
    return s[1:]


def coeffs_from_power_sums(s: Sequence[Fraction], n: int) -> list[Fraction]:
    """Monic degree-n polynomial whose roots have the given power sums."""
    e = [Q1] + [Q0] * n
    for k in range(1, n + 1):
        acc = Q0
        for i in range(1, k + 1):
            acc += ((-1) ** (i - 1)) * e[k - i] * s[i - 1]
        e[k] = acc / k
    coeffs = [Q0] * (n + 1)
    coeffs[n] = Q1
    for k in range(1, n + 1):
        coeffs[n - k] = ((-1) ** k) * e[k]
    return coeffs
