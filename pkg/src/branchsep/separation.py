"""Separation pipeline: good position, derivative chains, verdicts.

Decides whether two curvette points lie in the same connected component of
the nonvanishing set of a monic polynomial over a cylinder, by counting real
branches between them, and independently runs the value-theoretic pipeline
(first dropping derivative index, sign checks, derivative chain, bounded
sign-changer search).  Every verdict ships with a machine-checkable
certificate whose comparisons replay through the valuation alone.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .branches import (Branch, between_series, monic_normalize, newton_puiseux,
                       order_real_branches)
from .errors import (BranchSepError, ChainBroken, EmptyDomain, Indeterminate,
                     NoRealRoot, ParseError, SoundnessViolation, UnknownOrder)
from .parser import parse_series, parse_xpoly
from .qpoly import discriminant, qstrip
from .scalars import Scalar
from .series import INF, Series, ValT, val_cmp
from .valuation import Curvette, branch_value, nu_gamma, privileged
from .xpoly import XPoly
from .zpoly import ZPoly, sturm_count


# -- instance -------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A monic polynomial in z over x-polynomials, two curvettes, a box."""

    f: XPoly
    alpha: Curvette
    beta: Curvette
    box: tuple = ()                  # pairs (var, (lo, hi)) with rational ends
    grid: int = 5
    degree_bound: int = 2
    target_order: Optional[Fraction] = None
    z_name: str = "z"
    seed: Optional[int] = None

    def x_vars(self) -> tuple:
        return tuple(v for v in self.f.vars if v != self.z_name)

    def z_degree(self) -> int:
        return self.f.degree_in(self.z_name)

    def z_coeffs(self) -> list[XPoly]:
        return self.f.z_coefficients(self.z_name)

    def validate(self):
        coeffs = self.z_coeffs()
        lead = coeffs[-1]
        if lead.total_degree() != 0 or (lead.terms and lead.terms[0][1] != 1):
            raise ValueError("instance polynomial must be monic in z")
        for cv, name in ((self.alpha, "alpha"), (self.beta, "beta")):
            for v in self.f.vars:
                cv.component(v)  # raises KeyError when missing

    def fiber(self, gamma: Curvette) -> ZPoly:
        """Substitute the x-components of the curvette, leaving z."""
        env = {n: s for n, s in gamma.x_items}
        return ZPoly.make([c.eval_series(env) for c in self.z_coeffs()])

    def value_of(self, p: XPoly, gamma: Curvette) -> ValT:
        env = {n: s for n, s in gamma.components}
        return p.eval_series(env).order()

    def sign_of(self, p: XPoly, gamma: Curvette) -> int:
        env = {n: s for n, s in gamma.components}
        return gamma.sign_of_series(p.eval_series(env))


def divided_z_derivative(coeffs: Sequence[XPoly], k: int) -> list[XPoly]:
    """binomial(i+k, k) * a_{i+k} on z-coefficient lists."""
    if k == 0:
        return list(coeffs)
    return [coeffs[i + k] * Fraction(math.comb(i + k, k))
            for i in range(len(coeffs) - k)]


def zcoeffs_to_xpoly(coeffs: Sequence[XPoly], z_name: str) -> XPoly:
    z = None
    acc = None
    for i, c in enumerate(coeffs):
        vars_all = tuple(sorted(set(c.vars) | {z_name}))
        term = c.with_vars(vars_all)
        if i:
            if z is None or z.vars != vars_all:
                z = XPoly.variable(z_name, vars_all)
            term = term * z ** i
        acc = term if acc is None else acc + term
    return acc if acc is not None else XPoly.constant(0, (z_name,))


# -- good position ------------------------------------------------------------------


@dataclass(frozen=True)
class DerivativeCounts:
    k: int
    distinct: tuple
    with_mult: tuple
    disc_signs: tuple

    @property
    def constant(self) -> bool:
        return len(set(self.distinct)) <= 1 and len(set(self.with_mult)) <= 1


@dataclass(frozen=True)
class GoodPositionReport:
    samples: tuple
    per_derivative: tuple

    @property
    def verified_on_samples(self) -> bool:
        return all(entry.constant for entry in self.per_derivative)

    def first_violation(self):
        for entry in self.per_derivative:
            if not entry.constant:
                return entry
        return None


def good_position_check(inst: Instance) -> GoodPositionReport:
    """Sample the box on a grid and count real roots of every divided
    derivative at each sample, in both counting modes.

    The verdict is 'verified on samples', never a proof.
    """
    inst.validate()
    if not inst.box:
        raise EmptyDomain("instance has no sample box")
    if inst.grid < 1:
        raise EmptyDomain("grid resolution must be at least 1")
    axes = []
    for var, (lo, hi) in inst.box:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise EmptyDomain(f"box for {var!r} is empty")
        if inst.grid == 1:
            axes.append((var, [(lo + hi) / 2]))
        else:
            step = (hi - lo) / (inst.grid - 1)
            axes.append((var, [lo + step * j for j in range(inst.grid)]))
    samples = [{}]
    for var, pts in axes:
        samples = [dict(s, **{var: p}) for s in samples for p in pts]
    coeffs = inst.z_coeffs()
    d = len(coeffs) - 1
    per = []
    for k in range(d):
        ck = divided_z_derivative(coeffs, k)
        distinct, with_mult, signs = [], [], []
        for pt in samples:
            p = qstrip([c.eval_rational(pt) for c in ck])
            distinct.append(sturm_count(p))
            with_mult.append(sturm_count(p, multiplicity=True))
            if len(p) >= 3:
                ds = discriminant(p)
                signs.append((ds > 0) - (ds < 0))
            else:
                signs.append(1)
        per.append(DerivativeCounts(k, tuple(distinct), tuple(with_mult), tuple(signs)))
    return GoodPositionReport(tuple(tuple(sorted(s.items())) for s in samples), tuple(per))


# -- theta ---------------------------------------------------------------------------


def theta(g: ZPoly, gamma: Curvette) -> int:
    """Smallest positive k whose divided derivative drops below the value of g."""
    base = nu_gamma(g, gamma)
    if base is INF:
        raise UnknownOrder("polynomial vanishes identically along the curvette")
    for k in range(1, g.degree() + 1):
        if val_cmp(nu_gamma(g.divided_derivative(k), gamma), base) < 0:
            return k
    raise UnknownOrder("no derivative drops below the value; is the value zero?")


# -- Rolle / equidistance --------------------------------------------------------------


@dataclass(frozen=True)
class RolleResult:
    mode: str                 # "equidistance" or "generalized"
    branch: Branch            # real branch of the derivative, between the inputs
    value_h1: ValT
    value_h2: ValT
    value_v: ValT
    contact: int              # s: length of the shared prefix
    lead_bound: Scalar        # the coefficient the new leading term must not exceed
    lead_found: Scalar

    def no_unique_minimum(self) -> bool:
        vals = [self.value_h1, self.value_h2, self.value_v]
        m = vals[0]
        for v in vals[1:]:
            if val_cmp(v, m) < 0:
                m = v
        return sum(1 for v in vals if val_cmp(v, m) == 0) >= 2


def _prefix_through(s: Series, e: Fraction) -> Series:
    """Exact sum of the terms with exponent <= e."""
    return Series(tuple((ee, c) for ee, c in s.terms if ee <= e), INF, s.arity)


def rolle_between(g: ZPoly, h1: Branch, h2: Branch, gamma: Curvette,
                  target_order=None) -> RolleResult:
    """A real branch of the derivative of g pinned between two branches of g.

    Equal values along the curvette take the equidistance route (the three
    values admit no unique minimum); distinct values take the generalized
    route (the new branch value equals the smaller input value).  Exponents
    must be integers; reparametrize first.
    """
    if g.denominator() != 1 or h1.phi.denominator() != 1 or h2.phi.denominator() != 1:
        raise ValueError("integer exponents required; reparametrize first")
    if not h1.is_real:
        h1, h2 = h2, h1
    if not h1.is_real:
        raise ValueError("at least one input branch must be real")
    v1 = branch_value(h1, gamma)
    v2 = branch_value(h2, gamma)
    if val_cmp(v1, v2) == 0:
        return _rolle_equidistance(g, h1, h2, gamma, v1, target_order)
    if val_cmp(v1, v2) > 0:
        if not h2.is_real:
            raise ValueError("the branch of smaller value must be real")
        h1, h2, v1, v2 = h2, h1, v2, v1
    return _rolle_generalized(g, h1, h2, gamma, v1, v2, target_order)


def _contact_exponent(phi1: Series, phi2: Series) -> Fraction:
    diff = phi1 - phi2
    o = diff.order()
    if o is INF:
        raise ValueError("branches coincide; no Rolle interval")
    return o


def _find_derivative_branch(g: ZPoly, prefix: Series, m: Fraction, bound: Scalar,
                            target_order) -> tuple[Branch, Scalar]:
    """Real branch of g' of the form prefix + c*t^m + ..., 0 < c < bound or
    bound < c < 0."""
    dg = g.divided_derivative(1)
    shifted = dg.compose_shift(prefix)
    for b in newton_puiseux(shifted, target_order):
        if not b.is_real or not b.phi.terms:
            continue
        e, c = b.phi.leading()
        if e != m:
            continue
        if (c.sign() == bound.sign()) and (abs_lt(c, bound)):
            return Branch(prefix + b.phi, b.multiplicity, dg, b.residual_order), c
    raise NoRealRoot(
        f"no real derivative branch with leading exponent {m} strictly inside the bound")


def abs_lt(a: Scalar, b: Scalar) -> bool:
    fa = a if a.sign() >= 0 else -a
    fb = b if b.sign() >= 0 else -b
    return fa < fb


def _rolle_equidistance(g, h1, h2, gamma, val, target_order) -> RolleResult:
    m = _contact_exponent(h1.phi, h2.phi)
    s = int(m) - 1
    prefix = _prefix_through(h2.phi, m)
    lead = (h1.phi - prefix).leading()
    if lead[0] != m:
        raise ChainBroken("equidistance", "contact normalization failed")
    b_coeff = lead[1]
    branch, found = _find_derivative_branch(g, prefix, m, b_coeff, target_order)
    res = RolleResult("equidistance", branch, branch_value(h1, gamma),
                      branch_value(h2, gamma), branch_value(branch, gamma),
                      s, b_coeff, found)
    if not res.no_unique_minimum():
        raise ChainBroken("equidistance", "three-value minimum came out unique")
    return res


def _rolle_generalized(g, h1, h2, gamma, v1, v2, target_order) -> RolleResult:
    # contact of the two branches equals the smaller value v1
    m = Fraction(v1)
    s = int(m) - 1
    prefix = _prefix_through(h2.phi, m)
    if not prefix.is_real():
        raise ChainBroken("generalized-rolle",
                          "shared prefix has imaginary terms below the contact")
    lead = (h1.phi - prefix).leading()
    if lead[0] != m:
        raise ChainBroken("generalized-rolle", "contact does not match the value gap")
    c_coeff = lead[1]
    branch, found = _find_derivative_branch(g, prefix, m, c_coeff, target_order)
    vv = branch_value(branch, gamma)
    if val_cmp(vv, v1) != 0:
        raise ChainBroken("generalized-rolle",
                          f"derivative branch value {vv} differs from {v1}")
    if not between_series(h1.phi, branch.phi, h2.phi.re()):
        raise ChainBroken("generalized-rolle", "found branch is not between the inputs")
    return RolleResult("generalized", branch, v1, v2, vv, s, c_coeff, found)


# -- bounded sign-changer search --------------------------------------------------------


@dataclass(frozen=True)
class SignChanger:
    poly: XPoly
    value_alpha: ValT
    value_beta: ValT


@dataclass(frozen=True)
class HypothesisReport:
    status: str                      # "violated" | "plausible" | "degenerate"
    sign_alpha: int
    sign_beta: int
    f_changes_sign: bool
    nu_f_alpha: ValT
    nu_f_beta: ValT
    mu_hat_alpha: Optional[ValT]
    mu_hat_beta: Optional[ValT]
    witness: Optional[SignChanger]
    degree_bound: int


class _Element:
    """Search-pool element: a polynomial with its two evaluations."""

    __slots__ = ("poly", "ser_a", "ser_b")

    def __init__(self, poly: XPoly, ser_a: Series, ser_b: Series):
        self.poly = poly
        self.ser_a = ser_a
        self.ser_b = ser_b

    def key(self):
        return self.poly.terms


def _lead_fraction(s: Series) -> Optional[tuple]:
    if not s.terms:
        return None
    e, c = s.leading()
    q = c.as_fraction()
    return None if q is None else (e, q)


def search_sign_changers(vars: Sequence[str], alpha: Curvette, beta: Curvette,
                         degree_bound: int, rounds: int = 2,
                         pool_cap: int = 400, grow_cap: int = 150) -> list[SignChanger]:
    """Bounded-degree search for elements changing sign between the points.

    The pool starts from the monomials and is closed under (a) cancelling a
    pair with equal leading data at one point, which raises that value, and
    (b) multiplying by monomials within the degree bound; pairs with equal
    values at both points whose cancellation thresholds differ yield
    explicit sign changers.  Returned changers are exact; the minimum of
    their values is an upper bound for the least value in the separating
    ideal, one-sided only.
    """
    env_a = {n: s for n, s in alpha.components}
    env_b = {n: s for n, s in beta.components}

    def make(poly: XPoly) -> _Element:
        return _Element(poly, poly.eval_series(env_a), poly.eval_series(env_b))

    def combine(p: _Element, q: _Element, lam: Fraction) -> _Element:
        return _Element(p.poly + q.poly.scale(lam),
                        p.ser_a + q.ser_a.scale(lam),
                        p.ser_b + q.ser_b.scale(lam))

    def times(p: _Element, m: _Element) -> _Element:
        return _Element(p.poly * m.poly, p.ser_a * m.ser_a, p.ser_b * m.ser_b)

    monos: list[XPoly] = []
    def gen_monos(prefix, rem, idx):
        if idx == len(vars):
            if any(prefix):
                monos.append(XPoly.make(tuple(vars), {tuple(prefix): Fraction(1)}))
            return
        for e in range(rem + 1):
            gen_monos(prefix + [e], rem - e, idx + 1)
    gen_monos([], degree_bound, 0)

    mono_elements = [make(m) for m in monos]
    pool = list(mono_elements)
    seen = {el.key() for el in pool}
    changers: dict = {}

    def consider_changer(el: _Element):
        try:
            sa = alpha.sign_of_series(el.ser_a)
            sb = beta.sign_of_series(el.ser_b)
        except Indeterminate:
            return
        if sa == 0 or sb == 0 or sa == sb:
            return
        key = el.key()
        if key not in changers:
            changers[key] = SignChanger(el.poly, el.ser_a.order(), el.ser_b.order())

    for el in pool:
        consider_changer(el)

    def profile(el: _Element):
        """Per-side summary (order key, sign, rational lead) or None."""
        out = []
        for ser, cv in ((el.ser_a, alpha), (el.ser_b, beta)):
            if not ser.terms:
                return None  # vanishing or undecidable side: exclude from pairs
            e, c = ser.leading()
            try:
                sgn = cv.sign_of_series(ser)
            except Indeterminate:
                return None
            out.append((e, sgn, c.as_fraction()))
        return tuple(out)

    def pick_lambda(p_prof, q_prof):
        """A rational lambda making p + lambda*q change sign, if the pair's
        order/sign profiles admit one; pure interval logic, no series work."""
        (ea_p, sa_p, la_p), (eb_p, sb_p, lb_p) = p_prof
        (ea_q, sa_q, la_q), (eb_q, sb_q, lb_q) = q_prof

        def side(ep, sp, lp, eq, sq, lq):
            # returns ('fixed', s) | ('ctrl', s_q) | ('thr', lambda*, s_q) | None
            c = exp_cmp_safe(ep, eq)
            if c < 0:
                return ("fixed", sp)
            if c > 0:
                return ("ctrl", sq)
            if lp is None or lq is None:
                return None
            return ("thr", -lp / lq, sq)

        A = side(ea_p, sa_p, la_p, ea_q, sa_q, la_q)
        B = side(eb_p, sb_p, lb_p, eb_q, sb_q, lb_q)
        if A is None or B is None:
            return None
        kinds = (A[0], B[0])
        if kinds == ("fixed", "fixed") or kinds == ("ctrl", "ctrl"):
            return None  # decided by p or q alone; both are tested directly
        if kinds == ("fixed", "ctrl"):
            return Fraction(-A[1] * B[1])
        if kinds == ("ctrl", "fixed"):
            return Fraction(-A[1] * B[1])
        if kinds == ("fixed", "thr"):
            return B[1] - A[1] * B[2]
        if kinds == ("thr", "fixed"):
            return A[1] - B[1] * A[2]
        if kinds == ("ctrl", "thr") or kinds == ("thr", "ctrl"):
            ctrl, thr = (A, B) if kinds[0] == "ctrl" else (B, A)
            sigma = -ctrl[1] * thr[2]
            lam_star = thr[1]
            if sigma < 0:  # need lambda strictly between 0 and the threshold
                return lam_star / 2 if lam_star != 0 else None
            if lam_star == 0:
                return Fraction(1)
            return lam_star + (1 if lam_star > 0 else -1)
        # threshold on both sides
        la_star, sa_q2 = A[1], A[2]
        lb_star, sb_q2 = B[1], B[2]
        if sa_q2 * sb_q2 > 0:
            if la_star == lb_star:
                return None  # cancellation point; handled by the grow rule
            return (la_star + lb_star) / 2
        return max(la_star, lb_star) + 1

    for _ in range(rounds):
        fresh: list[_Element] = []
        # closure under monomial multiplication
        for el in pool:
            base_deg = el.poly.total_degree()
            for m in mono_elements:
                if base_deg + m.poly.total_degree() > degree_bound:
                    continue
                x = times(el, m)
                if x.key() in seen:
                    continue
                seen.add(x.key())
                fresh.append(x)
                consider_changer(x)
        pool.extend(fresh)
        profs = [profile(el) for el in pool]
        combined: list[_Element] = []
        n = len(pool)
        for i in range(n):
            if profs[i] is None:
                continue
            for j in range(i + 1, n):
                if profs[j] is None:
                    continue
                p, q = pool[i], pool[j]
                lam = pick_lambda(profs[i], profs[j])
                if lam is not None and lam != 0:
                    x = combine(p, q, lam)
                    if not x.poly.is_zero() and x.key() not in seen:
                        seen.add(x.key())
                        consider_changer(x)
                # cancellations feed the pool: they strictly raise a value
                if len(combined) < grow_cap:
                    for lam_c in _cancel_lambdas(profs[i], profs[j]):
                        x = combine(p, q, lam_c)
                        if x.poly.is_zero() or x.key() in seen:
                            continue
                        seen.add(x.key())
                        consider_changer(x)
                        combined.append(x)
        pool.extend(combined)
        if len(pool) > pool_cap:
            pool.sort(key=lambda e: (_order_key(e.ser_a), str(e.poly)))
            del pool[pool_cap:]
    return sorted(changers.values(), key=lambda c: (_val_key(c.value_alpha), str(c.poly)))


def exp_cmp_safe(a, b) -> int:
    if a == b:
        return 0
    return -1 if a < b else 1


def _cancel_lambdas(p_prof, q_prof):
    out = set()
    for (ep, _, lp), (eq, _, lq) in zip(p_prof, q_prof):
        if ep == eq and lp is not None and lq is not None and lq != 0:
            out.add(-lp / lq)
    return out


def _order_key(s: Series):
    o = s.order_lower_bound()
    return _val_key(o)


def _val_key(v: ValT):
    if v is INF:
        return (1, ())
    return (0, v if isinstance(v, tuple) else (v,))


def hypothesis_check(inst: Instance) -> HypothesisReport:
    """Exact sign decision for f plus the bounded sign-changer search.

    A 'violated' outcome is exact; 'plausible' is conditional on the degree
    bound (the search bounds the separating value from above only).
    """
    inst.validate()
    env_a = {n: s for n, s in inst.alpha.components}
    env_b = {n: s for n, s in inst.beta.components}
    fa = inst.f.eval_series(env_a)
    fb = inst.f.eval_series(env_b)
    nu_a, nu_b = fa.order(), fb.order()
    if nu_a is INF or nu_b is INF:
        return HypothesisReport("degenerate", 0, 0, False, nu_a, nu_b,
                                None, None, None, inst.degree_bound)
    sa = inst.alpha.sign_of_series(fa)
    sb = inst.beta.sign_of_series(fb)
    changes = sa != sb
    changers = search_sign_changers(inst.f.vars, inst.alpha, inst.beta,
                                    inst.degree_bound)
    mu_a = changers[0].value_alpha if changers else None
    mu_b = min((c.value_beta for c in changers), key=_val_key) if changers else None
    witness = changers[0] if changers else None
    violated = changes
    if mu_a is not None and val_cmp(nu_a, mu_a) > 0:
        violated = True
    if mu_b is not None and val_cmp(nu_b, mu_b) > 0:
        violated = True
    status = "violated" if violated else "plausible"
    return HypothesisReport(status, sa, sb, changes, nu_a, nu_b, mu_a, mu_b,
                            witness, inst.degree_bound)


# -- derivative chain ----------------------------------------------------------------


@dataclass(frozen=True)
class ValueCheck:
    """A replayable comparison: expression values along the two curvettes."""

    label: str
    expr: str          # expression in the instance variables (original units)
    curvette: str      # "alpha" | "beta"
    op: str            # "==", "<", "<=", ">", ">=", "sign==" (value is +/-)
    value: str         # formatted value


@dataclass(frozen=True)
class ChainStep:
    index: int
    g1: str
    g2: str
    h_tilde: str
    h_priv_alpha: str
    h_priv_beta: str
    checks: tuple


@dataclass(frozen=True)
class Certificate:
    verdict: str       # same-component | hypothesis-violated | not-good-position | undecided
    instance: Instance
    theta_value: Optional[int] = None
    checks: tuple = ()
    chain: tuple = ()
    witness: Optional[str] = None
    notes: tuple = ()
    seed: Optional[int] = None


def format_val(v: ValT) -> str:
    if v is INF:
        return "INF"
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def parse_val(text: str) -> ValT:
    text = text.strip()
    if text == "INF":
        return INF
    if text.startswith("("):
        return tuple(Fraction(x) for x in text[1:-1].split(","))
    return Fraction(text)


def _series_expr(phi: Series, z_name: str) -> str:
    """Expression text for the linear factor z - phi (real phi)."""
    from .series import series_to_text
    return f"{z_name} - ({series_to_text(phi)})"


def _unreparam(s: Series, n: int) -> Series:
    if n == 1:
        return s
    trunc = s.trunc if s.trunc is INF else s.trunc / n
    return Series(tuple((e / n, c) for e, c in s.terms), trunc, s.arity)


class _Fiber:
    """Shared-x fiber data in integer-exponent units."""

    def __init__(self, inst: Instance):
        ax = dict(inst.alpha.x_items)
        bx = dict(inst.beta.x_items)
        if set(ax) != set(bx) or any(not ax[k].eq_known(bx[k]) or ax[k].trunc != bx[k].trunc
                                     for k in ax):
            raise ChainBroken("setup", "chain construction needs shared x-components")
        F = inst.fiber(inst.alpha)
        za = inst.alpha.z_series
        zb = inst.beta.z_series
        n = math.lcm(F.denominator(), za.denominator(), zb.denominator())
        self.n = n
        self.F = F.reparam(n) if n > 1 else F
        self.za = za.reparam(n) if n > 1 else za
        self.zb = zb.reparam(n) if n > 1 else zb
        self.alpha = Curvette.make([("z", self.za)], "z")
        self.beta = Curvette.make([("z", self.zb)], "z")
        self.z_name = inst.z_name
        self.target = inst.target_order

    def expr(self, phi: Series) -> str:
        return _series_expr(_unreparam(phi, self.n), self.z_name)

    def val(self, v: ValT) -> ValT:
        return v if v is INF else v / self.n


def build_claim_chain(inst: Instance) -> Certificate:
    """Construct the branch chain driving the separation argument.

    Preconditions: good position verified on samples, f of equal sign at the
    two points, both first-derivative values at least the values of f (the
    index-one shortcut is the caller's business otherwise).  Produces real
    branches of successive divided derivatives separating the two points,
    with every claimed value comparison recorded and verified; a failed
    guarantee raises ChainBroken, which is a test-surface signal.
    """
    fib = _Fiber(inst)
    F, za, zb = fib.F, fib.za, fib.zb
    alpha, beta = fib.alpha, fib.beta
    checks: list[ValueCheck] = []
    chain: list[ChainStep] = []

    nu_fa = nu_gamma(F, alpha)
    nu_fb = nu_gamma(F, beta)
    dF = F.divided_derivative(1)
    if val_cmp(nu_gamma(dF, alpha), nu_fa) < 0 or val_cmp(nu_gamma(dF, beta), nu_fb) < 0:
        raise ChainBroken("setup", "first derivative drops; use the index-one shortcut")
    th = theta(F, alpha)

    branches = newton_puiseux(F, fib.target)
    reals = [b for b in branches if b.is_real]
    between_bs = [b for b in order_real_branches(_dedupe(reals))
                  if _strictly_between(b.phi, za, zb)]
    if not between_bs:
        raise ChainBroken("base", "no real branch lies between the points")
    low_first = (za - between_bs[0].phi).sign() > 0
    f1 = between_bs[0] if low_first else between_bs[-1]
    f2 = between_bs[-1] if low_first else between_bs[0]

    d_branches = newton_puiseux(dF, fib.target)
    h_tilde = _pick_between(d_branches, f1.phi, f2.phi)
    if h_tilde is None:
        raise ChainBroken("base", "no real derivative branch between the base branches")
    h_pa = _pick_privileged(d_branches, alpha)
    h_pb = _pick_privileged(d_branches, beta)

    step_checks = _item4_checks(fib, 0, f1, h_tilde, f2, alpha, beta)
    checks.extend(step_checks)
    chain.append(ChainStep(0, fib.expr(f1.phi), fib.expr(f2.phi),
                           fib.expr(h_tilde.phi), fib.expr(h_pa.phi),
                           fib.expr(h_pb.phi), tuple(step_checks)))

    g1, g2 = f1, f2
    for i in range(1, th // 2 + 1):
        Gk = F.divided_derivative(2 * i - 1)
        v_ht_a = branch_value(h_tilde, alpha)
        v_pa = branch_value(h_pa, alpha)
        if val_cmp(v_ht_a, v_pa) >= 0:
            raise ChainBroken(f"step-{i}",
                              "privileged value does not dominate on the alpha side")
        r1 = rolle_between(Gk, h_tilde, h_pa, alpha, fib.target)
        g1_new = r1.branch
        v_ht_b = branch_value(h_tilde, beta)
        v_pb = branch_value(h_pb, beta)
        if val_cmp(v_ht_b, v_pb) >= 0:
            raise ChainBroken(f"step-{i}",
                              "privileged value does not dominate on the beta side")
        r2 = rolle_between(Gk, h_tilde, h_pb, beta, fib.target)
        g2_new = r2.branch

        step_checks = [
            ValueCheck(f"step-{i}-rolle-alpha", fib.expr(g1_new.phi), "alpha",
                       "==", format_val(fib.val(branch_value(g1_new, alpha)))),
            ValueCheck(f"step-{i}-rolle-beta", fib.expr(g2_new.phi), "beta",
                       "==", format_val(fib.val(branch_value(g2_new, beta)))),
        ]
        nxt = F.divided_derivative(2 * i + 1)
        h_tilde_new = h_pa_new = h_pb_new = None
        if not nxt.is_zero() and nxt.degree() >= 1:
            n_branches = newton_puiseux(nxt, fib.target)
            h_tilde_new = _pick_between(n_branches, g1_new.phi, g2_new.phi)
            if h_tilde_new is not None:
                h_pa_new = _pick_privileged(n_branches, alpha)
                h_pb_new = _pick_privileged(n_branches, beta)
                step_checks.extend(_item4_checks(fib, i, g1_new, h_tilde_new,
                                                 g2_new, alpha, beta))
        chain.append(ChainStep(
            i, fib.expr(g1_new.phi), fib.expr(g2_new.phi),
            fib.expr(h_tilde_new.phi) if h_tilde_new else "-",
            fib.expr(h_pa_new.phi) if h_pa_new else "-",
            fib.expr(h_pb_new.phi) if h_pb_new else "-",
            tuple(step_checks)))
        checks.extend(step_checks)
        g1, g2 = g1_new, g2_new
        if h_tilde_new is None:
            if 2 * i < th:
                raise ChainBroken(f"step-{i}", "chain ended before the target index")
            break
        h_tilde, h_pa, h_pb = h_tilde_new, h_pa_new, h_pb_new

    final = g1 if th % 2 == 0 else h_tilde
    if not _strictly_between(final.phi, za, zb):
        raise ChainBroken("final", "final derivative branch fails to separate")
    checks.append(ValueCheck("final-separates", fib.expr(final.phi), "alpha",
                             "sign==", "+" if (za - final.phi).sign() > 0 else "-"))
    checks.append(ValueCheck("final-separates", fib.expr(final.phi), "beta",
                             "sign==", "+" if (zb - final.phi).sign() > 0 else "-"))
    return Certificate("chain", inst, th, tuple(checks), tuple(chain))


def _dedupe(bs: Sequence[Branch]) -> list[Branch]:
    out, seen = [], set()
    for b in bs:
        key = b.phi.terms
        if key not in seen:
            seen.add(key)
            out.append(b)
    return out


def _strictly_between(phi: Series, za: Series, zb: Series) -> bool:
    sa = (za - phi).sign()
    sb = (zb - phi).sign()
    return sa != 0 and sb != 0 and sa != sb


def _pick_between(bs: Sequence[Branch], lo: Series, hi: Series) -> Optional[Branch]:
    for b in sorted(bs, key=lambda b: str(b.phi)):
        if b.is_real and between_series(lo, b.phi, hi.re()):
            return b
    return None


def _pick_privileged(bs: Sequence[Branch], gamma: Curvette) -> Branch:
    sel = privileged(list(bs), gamma)
    return bs[sel.indices[0]]


def _item4_checks(fib: _Fiber, i: int, g1: Branch, h_tilde: Branch, g2: Branch,
                  alpha: Curvette, beta: Curvette) -> list[ValueCheck]:
    """The per-step value pattern: on each side, the nearer branch dominates
    and the derivative branch matches the farther one."""
    va_g1 = branch_value(g1, alpha)
    va_ht = branch_value(h_tilde, alpha)
    va_g2 = branch_value(g2, alpha)
    vb_g1 = branch_value(g1, beta)
    vb_ht = branch_value(h_tilde, beta)
    vb_g2 = branch_value(g2, beta)
    if val_cmp(va_g1, va_ht) < 0 or val_cmp(va_ht, va_g2) != 0:
        raise ChainBroken(f"item4-alpha-{i}",
                          f"value pattern fails: {va_g1}, {va_ht}, {va_g2}")
    if val_cmp(vb_g2, vb_ht) < 0 or val_cmp(vb_ht, vb_g1) != 0:
        raise ChainBroken(f"item4-beta-{i}",
                          f"value pattern fails: {vb_g1}, {vb_ht}, {vb_g2}")
    out = []
    for name, b, cv, v in (("g1", g1, "alpha", va_g1), ("h", h_tilde, "alpha", va_ht),
                           ("g2", g2, "alpha", va_g2), ("g1", g1, "beta", vb_g1),
                           ("h", h_tilde, "beta", vb_ht), ("g2", g2, "beta", vb_g2)):
        out.append(ValueCheck(f"item4-{i}-{name}", fib.expr(b.phi), cv, "==",
                              format_val(fib.val(v))))
    return out


# -- component oracle and decision ------------------------------------------------------


@dataclass(frozen=True)
class ComponentOracle:
    same_component: bool
    branches_between: int
    real_branch_count: int
    positions: tuple   # (index below alpha, index below beta)


def _real_branch_profile(g: ZPoly, z_val: Series, target) -> tuple:
    """Signs of z - phi at the point for each distinct sorted real branch."""
    bs = newton_puiseux(g, target)
    reals = order_real_branches(_dedupe([b for b in bs if b.is_real]))
    signs = []
    for b in reals:
        s = (z_val - b.phi).sign()
        if s == 0:
            raise Indeterminate("point lies on a branch")
        signs.append(s)
    return reals, signs


def component_oracle(inst: Instance, refine: int = 3) -> ComponentOracle:
    """Band-count oracle: the points share a component of the nonvanishing
    set over the cylinder exactly when no real branch separates them.

    Valid under good position (components are the bands between consecutive
    real branches).  Truncation-driven indeterminacy triggers refinement up
    to the given number of rounds.
    """
    target = inst.target_order
    last: Optional[Exception] = None
    for _ in range(refine + 1):
        try:
            ga = inst.fiber(inst.alpha)
            gb = inst.fiber(inst.beta)
            _, sa = _real_branch_profile(ga, inst.alpha.z_series, target)
            _, sb = _real_branch_profile(gb, inst.beta.z_series, target)
            if len(sa) != len(sb):
                raise SoundnessViolation(
                    "real branch counts differ across the fibers; good position fails")
            between = sum(1 for x, y in zip(sa, sb) if x != y)
            pa = sum(1 for s in sa if s > 0)
            pb = sum(1 for s in sb if s > 0)
            return ComponentOracle(between == 0, between, len(sa), (pa, pb))
        except Indeterminate as exc:
            last = exc
            target = (Fraction(target) * 2 + 8) if target else Fraction(16)
    raise Indeterminate(f"component oracle undecided after refinement: {last}")


def decide_separation(inst: Instance, refine: int = 3) -> Certificate:
    """Full pipeline: good position gate, band-count oracle, hypothesis
    check, derivative recursion, cross-checks, certificate.

    The theorem pipeline and the oracle must agree: plausible hypotheses
    with separated points raise SoundnessViolation (a library bug or a
    broken guarantee, never a user error).
    """
    inst.validate()
    notes: list[str] = []
    checks: list[ValueCheck] = []
    gp = good_position_check(inst)
    if not gp.verified_on_samples:
        bad = gp.first_violation()
        notes.append(f"derivative {bad.k} has non-constant real-root counts: "
                     f"{bad.distinct} / {bad.with_mult}")
        return Certificate("not-good-position", inst, None, (), (), None,
                           tuple(notes), inst.seed)
    env_a = {n: s for n, s in inst.alpha.components}
    env_b = {n: s for n, s in inst.beta.components}
    fa = inst.f.eval_series(env_a)
    fb = inst.f.eval_series(env_b)
    if fa.order() is INF or fb.order() is INF:
        notes.append("f vanishes along a curvette; the points are not in {f != 0}")
        return Certificate("undecided", inst, None, (), (), None, tuple(notes), inst.seed)
    checks.append(ValueCheck("value-f", "f", "alpha", "==", format_val(fa.order())))
    checks.append(ValueCheck("value-f", "f", "beta", "==", format_val(fb.order())))
    checks.append(ValueCheck("sign-f", "f", "alpha", "sign==",
                             "+" if inst.alpha.sign_of_series(fa) > 0 else "-"))
    checks.append(ValueCheck("sign-f", "f", "beta", "sign==",
                             "+" if inst.beta.sign_of_series(fb) > 0 else "-"))
    try:
        oracle = component_oracle(inst, refine)
    except Indeterminate as exc:
        notes.append(str(exc))
        return Certificate("undecided", inst, None, tuple(checks), (), None,
                           tuple(notes), inst.seed)
    hyp = hypothesis_check(inst)
    notes.append(f"oracle: {oracle.branches_between} separating branch(es) among "
                 f"{oracle.real_branch_count} real")
    notes.append(f"hypothesis status: {hyp.status} at degree bound {hyp.degree_bound}")
    if hyp.witness is not None:
        checks.append(ValueCheck("sign-changer", str(hyp.witness.poly), "alpha", "==",
                                 format_val(hyp.witness.value_alpha)))
        checks.append(ValueCheck("sign-changer", str(hyp.witness.poly), "beta", "==",
                                 format_val(hyp.witness.value_beta)))
    th = theta(inst.fiber(inst.alpha), inst.alpha)
    if oracle.same_component:
        if hyp.status == "violated":
            notes.append("hypotheses violated yet the points share a component; "
                         "the separation property is one-directional")
        return Certificate("same-component", inst, th, tuple(checks), (), None,
                           tuple(notes), inst.seed)
    # points separated: by the main theorem the hypotheses must fail
    witness = None
    try:
        witness, wchecks, chain = _derivative_witness(inst)
        checks.extend(wchecks)
    except (ChainBroken, UnknownOrder, Indeterminate) as exc:
        chain = ()
        notes.append(f"derivative witness unavailable: {exc}")
    if hyp.status == "plausible":
        if witness is None:
            raise SoundnessViolation(
                "points in different components with plausible hypotheses at degree "
                f"bound {inst.degree_bound} and no derivative witness; the pipeline "
                "guarantee is broken")
        notes.append("violation established by the derivative witness; the "
                     "bounded search alone was inconclusive")
    return Certificate("hypothesis-violated", inst, th, tuple(checks), chain,
                       witness, tuple(notes), inst.seed)


def _derivative_witness(inst: Instance):
    """Recurse onto the first dropping derivative until it changes sign.

    Produces an explicit sign-changing element whose value sits strictly
    below the value of f on both sides: the exact violation witness.  Also
    attempts the branch-chain construction at each level where the
    first-derivative premise holds, recording it for the certificate.
    """
    checks: list[ValueCheck] = []
    chain: tuple = ()
    cur = inst
    env_a0 = {n: s for n, s in inst.alpha.components}
    top_value = inst.f.eval_series(env_a0).order()
    prev_value = None
    guard = 0
    while True:
        guard += 1
        if guard > inst.z_degree() + 2:
            raise ChainBroken("witness", "derivative recursion failed to terminate")
        env_a = {n: s for n, s in cur.alpha.components}
        env_b = {n: s for n, s in cur.beta.components}
        fa = cur.f.eval_series(env_a)
        fb = cur.f.eval_series(env_b)
        if prev_value is not None and val_cmp(fa.order(), prev_value) >= 0:
            raise ChainBroken("witness", "derivative value failed to drop")
        prev_value = fa.order()
        sa = cur.alpha.sign_of_series(fa)
        sb = cur.beta.sign_of_series(fb)
        if sa != sb:
            expr = str(cur.f)
            checks.append(ValueCheck("witness-value", expr, "alpha", "==",
                                     format_val(fa.order())))
            checks.append(ValueCheck("witness-value", expr, "beta", "==",
                                     format_val(fb.order())))
            checks.append(ValueCheck("witness-sign", expr, "alpha", "sign==",
                                     "+" if sa > 0 else "-"))
            checks.append(ValueCheck("witness-sign", expr, "beta", "sign==",
                                     "+" if sb > 0 else "-"))
            if val_cmp(fa.order(), top_value) >= 0:
                raise ChainBroken("witness", "witness value does not undercut f")
            checks.append(ValueCheck("witness-below", expr, "alpha", "<",
                                     format_val(top_value)))
            return expr, checks, chain
        F = cur.fiber(cur.alpha)
        th = theta(F, cur.alpha)
        dF = F.divided_derivative(1)
        if (th > 1 and not chain
                and val_cmp(nu_gamma(dF, cur.alpha), nu_gamma(F, cur.alpha)) >= 0):
            try:
                cert = build_claim_chain(cur)
                chain = cert.chain
                checks.extend(cert.checks)
            except BranchSepError as exc:
                checks.append(ValueCheck("chain-note", str(exc), "alpha", "note", "-"))
        new_coeffs = divided_z_derivative(cur.f.z_coefficients(cur.z_name), th)
        new_f = zcoeffs_to_xpoly(new_coeffs, cur.z_name)
        cur = replace(cur, f=new_f)


# -- instance and certificate text forms -------------------------------------------------


def parse_instance(text: str) -> Instance:
    """Key-value instance file; see the package README for the format."""
    fields: dict = {"alpha": {}, "beta": {}, "box": {}}
    scalars: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line=lineno)
        key, value = [part.strip() for part in line.split(":", 1)]
        if key.startswith(("alpha.", "beta.")):
            side, var = key.split(".", 1)
            fields[side][var] = parse_series(value)
        elif key.startswith("box."):
            var = key.split(".", 1)[1]
            ends = value.strip("[] \t").split(",")
            if len(ends) != 2:
                raise ParseError("box lines look like: box.x: [lo, hi]", line=lineno)
            fields["box"][var] = (Fraction(ends[0].strip()), Fraction(ends[1].strip()))
        else:
            scalars[key] = value
    if "f" not in scalars:
        raise ParseError("instance needs an 'f:' line")
    f = parse_xpoly(scalars["f"])
    z_name = scalars.get("z", "z")
    alpha = Curvette.make(sorted(fields["alpha"].items()), z_name)
    beta = Curvette.make(sorted(fields["beta"].items()), z_name)
    box = tuple(sorted(fields["box"].items()))
    return Instance(
        f=f, alpha=alpha, beta=beta, box=box,
        grid=int(scalars.get("grid", 5)),
        degree_bound=int(scalars.get("degree_bound", 2)),
        target_order=Fraction(scalars["target_order"]) if "target_order" in scalars else None,
        z_name=z_name,
        seed=int(scalars["seed"]) if "seed" in scalars else None,
    )


def instance_to_text(inst: Instance) -> str:
    lines = [f"f: {inst.f}"]
    if inst.z_name != "z":
        lines.append(f"z: {inst.z_name}")
    for name, s in inst.alpha.components:
        lines.append(f"alpha.{name}: {s}")
    for name, s in inst.beta.components:
        lines.append(f"beta.{name}: {s}")
    for var, (lo, hi) in inst.box:
        lines.append(f"box.{var}: [{lo}, {hi}]")
    lines.append(f"grid: {inst.grid}")
    lines.append(f"degree_bound: {inst.degree_bound}")
    if inst.target_order is not None:
        lines.append(f"target_order: {inst.target_order}")
    if inst.seed is not None:
        lines.append(f"seed: {inst.seed}")
    return "\n".join(lines) + "\n"


def certificate_to_text(cert: Certificate) -> str:
    lines = ["certificate: 1", f"verdict: {cert.verdict}"]
    if cert.theta_value is not None:
        lines.append(f"theta: {cert.theta_value}")
    if cert.seed is not None:
        lines.append(f"seed: {cert.seed}")
    lines.append("-- instance --")
    lines.append(instance_to_text(cert.instance).rstrip())
    lines.append("-- data --")
    for c in cert.checks:
        lines.append(f"check: {c.label} | {c.curvette} | {c.op} | {c.value} | {c.expr}")
    for step in cert.chain:
        lines.append(f"chain: {step.index} | g1 {step.g1} | g2 {step.g2} | "
                     f"h {step.h_tilde} | ha {step.h_priv_alpha} | hb {step.h_priv_beta}")
    if cert.witness:
        lines.append(f"witness: {cert.witness}")
    for n in cert.notes:
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"


def certificate_from_text(text: str) -> Certificate:
    head, _, rest = text.partition("-- instance --")
    inst_text, _, data = rest.partition("-- data --")
    inst = parse_instance(inst_text)
    verdict, th, seed = "undecided", None, None
    for line in head.splitlines():
        line = line.strip()
        if line.startswith("verdict:"):
            verdict = line.split(":", 1)[1].strip()
        elif line.startswith("theta:"):
            th = int(line.split(":", 1)[1])
        elif line.startswith("seed:"):
            seed = int(line.split(":", 1)[1])
    checks, notes, chain_lines = [], [], []
    witness = None
    for line in data.splitlines():
        line = line.strip()
        if line.startswith("check:"):
            parts = [p.strip() for p in line[len("check:"):].split("|")]
            if len(parts) != 5:
                raise ParseError(f"malformed check line: {line}")
            label, curvette, op, value, expr = parts
            checks.append(ValueCheck(label, expr, curvette, op, value))
        elif line.startswith("note:"):
            notes.append(line[len("note:"):].strip())
        elif line.startswith("witness:"):
            witness = line[len("witness:"):].strip()
        elif line.startswith("chain:"):
            chain_lines.append(line)
    return Certificate(verdict, inst, th, tuple(checks), tuple(chain_lines),
                       witness, tuple(notes), seed)


@dataclass(frozen=True)
class ReplayReport:
    total: int
    passed: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def replay(cert: Certificate) -> ReplayReport:
    """Recompute every recorded comparison from the embedded instance."""
    inst = cert.instance
    total = passed = 0
    failures = []
    for c in cert.checks:
        if c.op == "note":
            continue
        total += 1
        gamma = inst.alpha if c.curvette == "alpha" else inst.beta
        env = {n: s for n, s in gamma.components}
        try:
            if c.expr == "f":
                val_series = inst.f.eval_series(env)
            else:
                try:
                    p = parse_xpoly(c.expr, allowed=inst.f.vars)
                    val_series = p.eval_series(env)
                except ParseError:
                    val_series = _eval_branch_expr(c.expr, gamma, inst.z_name)
            if c.op == "sign==":
                got = gamma.sign_of_series(val_series)
                want = 1 if c.value == "+" else -1
                okay = got == want
            else:
                got = val_series.order_lower_bound() if not val_series.terms \
                    else val_series.order()
                want = parse_val(c.value)
                okay = val_cmp(got, want) == 0 if c.op == "==" else _cmp_op(got, want, c.op)
            if okay:
                passed += 1
            else:
                failures.append((c, str(got)))
        except Exception as exc:  # noqa: BLE001 - report, do not crash replays
            failures.append((c, f"error: {exc}"))
    return ReplayReport(total, passed, tuple(failures))


def _cmp_op(got, want, op) -> bool:
    c = val_cmp(got, want)
    return {"<": c < 0, "<=": c <= 0, ">": c > 0, ">=": c >= 0}[op]


def _eval_branch_expr(expr: str, gamma: Curvette, z_name: str) -> Series:
    """Evaluate an expression mixing z and t at the curvette."""
    from .parser import parse_zpoly
    if z_name != "z":
        expr = re.sub(rf"\b{re.escape(z_name)}\b", "z", expr)
    zp = parse_zpoly(expr)
    return zp.eval(gamma.z_series)
