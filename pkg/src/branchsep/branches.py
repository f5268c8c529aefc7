"""Branch expansion of monic z-polynomials into truncated Puiseux series.

The expansion is polygon-driven: each lower-hull edge of slope -mu
contributes branches of order mu whose leading coefficients are the roots of
the edge's collapsed one-variable polynomial; recentering by the found term
and recursing refines them.  Multiplicities are exact because expansion runs
on the squarefree factors, and truncation orders are certified: a reported
branch's next unknown exponent is read off the polygon of its final
recentered polynomial, and the default precision exceeds the pairwise
contact bound obtained from the discriminant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator, Optional, Sequence

from .errors import DenominatorBound, Indeterminate, NonConvergence, UnknownOrder
from .qpoly import Q1, coeffs_from_power_sums, power_sums_from_coeffs, qeval
from .scalars import Scalar, polynomial_roots
from .series import INF, Series, ValT, val_min
from .polygon import build as build_polygon
from .zpoly import ZPoly, squarefree_factors, sturm_count

DEFAULT_DENOM_BOUND = 64
_STEP_GUARD = 10_000


@dataclass(frozen=True)
class Branch:
    """A linear factor z - phi of the parent polynomial, phi truncated."""

    phi: Series
    multiplicity: int = 1
    parent: Optional[ZPoly] = None
    residual_order: ValT = INF

    @property
    def is_real(self) -> bool:
        return self.phi.is_real()

    def conjugate(self) -> "Branch":
        return Branch(self.phi.conj(), self.multiplicity, self.parent, self.residual_order)

    def re_im(self) -> "ReImPair":
        return ReImPair(self.phi.re(), self.phi.im())

    def __str__(self):
        tag = "real" if self.is_real else "complex"
        return f"z - ({self.phi})  [{tag}, mult {self.multiplicity}]"


@dataclass(frozen=True)
class ReImPair:
    """Real and imaginary parts of a (possibly complex) branch series."""

    re: Series
    im: Series

    def recombine(self) -> Series:
        return self.re + self.im.scale(Scalar.imaginary(1))


def default_target_order(g: ZPoly) -> Fraction:
    """Twice the largest slope numerator plus four; refinable on demand."""
    try:
        poly = build_polygon(g)
    except Exception:
        return Fraction(4)
    best = 1
    for e in poly.edges:
        s = e.slope
        if isinstance(s, Fraction):
            best = max(best, abs(s.numerator))
    return Fraction(2 * best + 4)


def newton_puiseux(g: ZPoly, target_order=None,
                   denom_bound: int = DEFAULT_DENOM_BOUND) -> tuple[Branch, ...]:
    """All branches of a monic polynomial, truncated past their separation.

    Returns deg(g) branches counted with multiplicity; the product of the
    corresponding linear factors reproduces g modulo the certified orders.
    Raises DegreeTooHigh when an edge root leaves the supported scalar
    fields and DenominatorBound when exponents get too fine.
    """
    if g.is_zero() or g.degree() < 1:
        raise ValueError("branch expansion needs positive degree")
    if not g.is_monic():
        g = monic_normalize(g)
    if not g.is_exact():
        raise UnknownOrder("branch expansion needs exact coefficients")
    if g.arity() is not None:
        raise DenominatorBound("branch expansion is defined for rational exponents only")

    factors = squarefree_factors(g)
    target = Fraction(target_order) if target_order is not None else default_target_order(g)

    # distinct branches within a squarefree factor split at their contact
    # exponent during the recursion, so any positive target yields pairwise
    # distinct truncations; the target only controls extra precision.
    out: list[Branch] = []
    for f, mult in factors:
        if f.degree() == 1:
            phi = -f.coeffs[0]
            out.append(Branch(phi, mult, g, _residual_order(g, phi)))
            continue
        for phi in _expand(f, None, Series.zero(), target, denom_bound, [0]):
            out.append(Branch(phi, mult, g, _residual_order(g, phi)))
    out.sort(key=_branch_sort_key)
    return tuple(out)


def monic_normalize(g: ZPoly) -> ZPoly:
    """Divide out a constant leading coefficient; roots are unchanged."""
    lead = g.coeffs[-1]
    if len(lead.terms) == 1 and lead.is_exact():
        e, c = lead.terms[0]
        if e == Fraction(0) or (isinstance(e, tuple) and all(x == 0 for x in e)):
            return g.scale(c.inverse())
    raise ValueError(
        "cannot normalize: leading coefficient is not a nonzero constant")


def _residual_order(g: ZPoly, phi: Series) -> ValT:
    val = g.eval(phi)
    if val.terms:
        return val.order()
    return val.trunc  # vanished to truncation: certified lower bound


def _branch_sort_key(b: Branch):
    o = b.phi.order_lower_bound()
    lead = (Fraction(0),) if o is INF else (o if isinstance(o, tuple) else (o,))
    return (lead, str(b.phi))


def _lattice_den(prefix: Series, mu: Fraction) -> int:
    return math.lcm(prefix.denominator(), mu.denominator)


def _expand(gz: ZPoly, lo: Optional[Fraction], prefix: Series, target: Fraction,
            denom_bound: int, steps: list[int]) -> Iterator[Series]:
    steps[0] += 1
    if steps[0] > _STEP_GUARD:
        raise NonConvergence("branch expansion exceeded its step guard")

    nzero = 0
    while nzero < len(gz.coeffs) and gz.coeffs[nzero].is_zero_exact():
        nzero += 1
    for _ in range(nzero):
        yield prefix  # exact root equal to the accumulated prefix
    if nzero == gz.degree():
        return

    poly = build_polygon(gz)
    for edge in poly.edges:
        mu = -edge.slope
        if not isinstance(mu, Fraction):
            raise DenominatorBound("lex exponents do not support expansion")
        if mu < 0 or (lo is not None and mu <= lo):
            continue
        if _lattice_den(prefix, mu) > denom_bound:
            raise DenominatorBound(
                f"exponent denominator exceeds the bound {denom_bound}")
        residual = _edge_residual(gz, edge)
        for psi, mpsi in polynomial_roots(residual):
            if psi.is_zero():
                continue  # zero roots belong to steeper edges
            step = Series.t_power(mu, psi)
            new_prefix = prefix + step
            shifted = gz.compose_shift(step)
            if mpsi == 1 and mu >= target:
                yield _finalize(shifted, mu, new_prefix)
            else:
                yield from _expand(shifted, mu, new_prefix, target, denom_bound, steps)


def _edge_residual(gz: ZPoly, edge) -> list[Scalar]:
    out = [Scalar() for _ in range(edge.j - edge.i + 1)]
    for i in range(edge.i, edge.j + 1):
        a = gz.coeffs[i]
        if a.is_zero_exact():
            continue
        v = a.order()
        if edge.contains(i, v):
            out[i - edge.i] = a.leading()[1]
    return out


def _finalize(shifted: ZPoly, mu: Fraction, prefix: Series) -> Series:
    """Certified truncation: the next unknown exponent, read off the polygon."""
    if shifted.coeffs[0].is_zero_exact():
        return prefix  # exact root
    poly = build_polygon(shifted)
    nxt: ValT = INF
    for edge in poly.edges:
        m = -edge.slope
        if isinstance(m, Fraction) and m > mu:
            nxt = val_min(nxt, m)
    if nxt is INF:
        # no continuing edge: the root has no further terms on this lattice,
        # yet is not exact -- happens only at degenerate truncation requests
        raise NonConvergence("no continuing edge past the final reported term")
    return prefix.truncate_at(nxt)


# -- ordering and betweenness ---------------------------------------------------


def _cmp_series(a: Series, b: Series) -> int:
    c = a.compare(b)
    if c == 0:
        raise Indeterminate("branches agree as series; ordering needs distinct inputs")
    return c


def order_real_branches(bs: Sequence[Branch]) -> tuple[Branch, ...]:
    """Sort real branches increasingly for t -> 0+; total and stable."""
    for b in bs:
        if not b.is_real:
            raise ValueError(f"non-real branch in ordering: {b}")
    return tuple(sorted(bs, key=cmp_to_key(lambda x, y: _cmp_series(x.phi, y.phi))))


def branch_sign_at(h, z_value: Series) -> int:
    """Sign of z - phi at a curvette with the given z-component."""
    phi = h.phi if isinstance(h, Branch) else h
    s = (z_value - phi).sign()
    if s == 0:
        raise Indeterminate("curvette lies on the branch")
    return s


def between(h, z_alpha: Series, z_beta: Series) -> bool:
    """Whether the branch evaluates with opposite signs at the two points."""
    return branch_sign_at(h, z_alpha) != branch_sign_at(h, z_beta)


def between_series(phi1: Series, psi: Series, phi2_re: Series) -> bool:
    """Three-series betweenness: phi1 <= psi <= phi2_re or the reverse."""
    a = (psi - phi1).sign()
    b = (phi2_re - psi).sign()
    return a * b >= 0


# -- perturbation bound ----------------------------------------------------------


@dataclass(frozen=True)
class PerturbationReport:
    degree: int
    epsilon: Fraction
    delta: Fraction
    trials: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def perturbation_delta(d: int, eps: Fraction) -> Fraction:
    return min((Fraction(eps) / math.factorial(d)) ** math.factorial(d), Fraction(1, 2))


def perturbation_bound_check(d: int, eps, trials: int, rng) -> PerturbationReport:
    """Sample coefficient vectors inside the delta-polydisk and certify that
    every root of the corresponding monic polynomial has modulus below eps.

    Exact arithmetic throughout: degrees one and two additionally go through
    explicit root formulas, all degrees through Sturm isolation applied to
    the polynomial whose roots are the pairwise products of roots.
    """
    eps = Fraction(eps)
    delta = perturbation_delta(d, eps)
    violations = []
    K = 997
    for trial in range(trials):
        coeffs = [delta * Fraction(rng.randint(-(K - 1), K - 1), K) for _ in range(d)]
        # monic z^d + a_1 z^(d-1) + ... + a_d, little-endian for qpoly
        p = list(reversed([Q1] + coeffs))
        certified = _roots_inside(p, eps)
        if d <= 2:
            explicit = _roots_inside_explicit(coeffs, eps)
            assert explicit == certified, "explicit and certified routes disagree"
        if not certified:
            violations.append((trial, tuple(coeffs)))
    return PerturbationReport(d, eps, delta, trials, tuple(violations))


def _roots_inside(p: list[Fraction], eps: Fraction) -> bool:
    """All complex roots of p have |root| < eps, via the product polynomial.

    The monic polynomial q whose d^2 roots are all pairwise products of the
    roots of p is assembled from Newton power sums.  Real coefficients make
    the root multiset conjugation-closed, so some root has modulus >= eps
    exactly when q has a real root >= eps^2.
    """
    d = len(p) - 1
    s = power_sums_from_coeffs(p, d * d)
    q = coeffs_from_power_sums([x * x for x in s], d * d)
    e2 = eps * eps
    if qeval(q, e2) == 0:
        return False
    # Descartes certificate on the shifted polynomial: zero sign variations
    # proves there is no root past eps^2; otherwise decide by Sturm.
    from .qpoly import _descartes_variations, taylor_shift

    if _descartes_variations(taylor_shift(q, e2)) == 0:
        return True
    return sturm_count(q, e2, INF) == 0


def _roots_inside_explicit(coeffs: list[Fraction], eps: Fraction) -> bool:
    if len(coeffs) == 1:
        return abs(coeffs[0]) < eps
    a1, a2 = coeffs
    disc = a1 * a1 - 4 * a2
    if disc < 0:
        return a2 < eps * eps  # conjugate pair of modulus sqrt(a2)
    # both real: contained in (-eps, eps) iff values at the ends are positive
    # and the vertex lies inside
    def val(x):
        return x * x + a1 * x + a2
    return val(eps) > 0 and val(-eps) > 0 and -eps < -a1 / 2 < eps


def conjugation_closed(bs: Sequence[Branch]) -> bool:
    """The branch multiset is invariant under complex conjugation."""
    pool = [(b.phi.terms, b.multiplicity) for b in bs]
    for b in bs:
        key = (b.phi.conj().terms, b.multiplicity)
        if key not in pool:
            return False
    return True


def reconstruct(branches: Sequence[Branch]) -> ZPoly:
    """Product of (z - phi_j)^mult; comparable to the parent modulo truncation."""
    acc = ZPoly.from_scalars([1])
    for b in branches:
        lin = ZPoly.make([-b.phi, Series.constant(1)])
        for _ in range(b.multiplicity):
            acc = acc * lin
    return acc
