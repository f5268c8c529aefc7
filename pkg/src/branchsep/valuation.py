"""Curvettes and the valuations they induce.

A curvette supplies exact series for the coordinates (x_1..x_n, z); the
induced valuation of a polynomial is the t-adic order of its composition
with those series.  This module also hosts the recentering iteration that
aligns the weighted-minimum value nu_z with the true value, the weighted
nu_s calculus on integer-exponent polynomials, privileged-factor selection,
and the derivative-value check built on top of branch expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .branches import Branch, ReImPair, newton_puiseux
from .errors import Indeterminate, NonConvergence, UnknownOrder
from .scalars import Scalar
from .series import INF, Series, ValT, exp_div, val_cmp, val_min
from .zpoly import InitialFormZ, ZPoly, nu_z


@dataclass(frozen=True)
class Curvette:
    """Point datum: named coordinate series plus sign data for generators.

    ``components`` maps variable names to exact series over a real scalar
    field; ``z_name`` singles out the fiber coordinate.  ``signs`` assigns
    +1/-1 to the formal generators of the exponent group (all +1 by
    default, the t -> 0+ convention); for lex groups one entry per tuple
    position.
    """

    components: tuple  # ordered pairs (name, Series)
    z_name: str = "z"
    signs: tuple = ()

    @staticmethod
    def make(items, z_name: str = "z", signs=()) -> "Curvette":
        comps = tuple((name, s) for name, s in items)
        return Curvette(comps, z_name, tuple(signs))

    def component(self, name: str) -> Series:
        for n, s in self.components:
            if n == name:
                return s
        raise KeyError(f"curvette has no component {name!r}")

    @property
    def z_series(self) -> Series:
        return self.component(self.z_name)

    @property
    def x_items(self) -> tuple:
        return tuple((n, s) for n, s in self.components if n != self.z_name)

    def arity(self) -> Optional[int]:
        for _, s in self.components:
            if s.arity is not None:
                return s.arity
        return None

    def sign_of_exponent(self, e) -> int:
        """Sign of t^e under the declared generator signs (parity rule)."""
        if not self.signs:
            return 1
        exps = e if isinstance(e, tuple) else (e,)
        sgn = 1
        for s, x in zip(self.signs, exps):
            num = x.numerator if isinstance(x, Fraction) else int(x)
            if s < 0 and num % 2:
                sgn = -sgn
        return sgn

    def sign_of_series(self, s: Series) -> int:
        """Sign of an evaluated series under the sign data, t -> 0+."""
        if not s.terms:
            if s.trunc is INF:
                return 0
            raise Indeterminate(f"sign unknown below truncation {s.trunc}")
        e, c = s.leading()
        return c.sign() * self.sign_of_exponent(e)

    def __str__(self):
        lines = [f"{n} = {s}" for n, s in self.components]
        return "\n".join(lines)


def nu_gamma(obj: Union[ZPoly, Branch, Series], gamma: Curvette) -> ValT:
    """Order of vanishing along the curvette; INF on exact vanishing."""
    if isinstance(obj, Series):
        return obj.order()
    if isinstance(obj, Branch):
        return branch_value(obj, gamma)
    val = obj.eval(gamma.z_series)
    return val.order()


def branch_value(b: Union[Branch, Series], gamma: Curvette) -> ValT:
    """Value of the linear factor z - phi along the curvette.

    Real branches evaluate directly; complex ones through the real/imaginary
    split, which is the unique valuation extension.
    """
    phi = b.phi if isinstance(b, Branch) else b
    if phi.is_real():
        return (gamma.z_series - phi).order()
    return nu_complex(ReImPair(phi.re(), phi.im()), gamma)


def nu_complex(h: ReImPair, gamma: Curvette) -> ValT:
    """min of the real-part and imaginary-part values of z - (re + i*im)."""
    re_val = (gamma.z_series - h.re).order()
    im_val = h.im.order()
    return val_min(re_val, im_val)


def nu_complex_norm(h: ReImPair, gamma: Curvette) -> ValT:
    """Cross-check route: half the value of (Re)^2 + (Im)^2."""
    diff = gamma.z_series - h.re
    norm = diff * diff + h.im * h.im
    o = norm.order()
    if o is INF:
        return INF
    return exp_div(o, 2)


@dataclass(frozen=True)
class PrivilegedSelection:
    """Indices of the factors attaining the maximal value, and that value."""

    indices: tuple
    value: ValT


def privileged(factors: Sequence[Branch], gamma: Curvette) -> PrivilegedSelection:
    """Select every factor of maximal value along the curvette."""
    if not factors:
        raise ValueError("privileged selection needs at least one factor")
    values = [branch_value(b, gamma) for b in factors]
    top = values[0]
    for v in values[1:]:
        if val_cmp(v, top) > 0:
            top = v
    idx = tuple(i for i, v in enumerate(values) if val_cmp(v, top) == 0)
    return PrivilegedSelection(idx, top)


# -- recentering -----------------------------------------------------------------


@dataclass(frozen=True)
class RecenterStep:
    poly_index: int
    phi_term: Series
    nu_z_before: ValT
    delta_before: int


@dataclass(frozen=True)
class RecenterEntry:
    """Per-polynomial before/after data for the recentering report."""

    nu_z_before: ValT
    delta_before: int
    nu_value: ValT
    nu_z_after: ValT
    delta_after: int


@dataclass(frozen=True)
class RecenterResult:
    phi: Series
    entries: tuple
    steps: tuple
    phi_star: Optional[Series] = None
    star_deltas: tuple = ()


def _nu_ztilde(g: ZPoly, phi: Series, gamma: Curvette) -> InitialFormZ:
    """nu_z data of g written in the shifted variable z - phi."""
    shifted = ZPoly.make([g.divided_derivative(i).eval(phi)
                          for i in range(len(g.coeffs))])
    zt = gamma.z_series - phi
    return nu_z(shifted, zt.order()), shifted


def _nu_ztilde_form(g: ZPoly, phi: Series, gamma: Curvette) -> InitialFormZ:
    return _nu_ztilde(g, phi, gamma)[0]


def recenter(gs: Sequence[ZPoly], gamma: Curvette, stage2: bool = False,
             step_bound: Optional[int] = None) -> RecenterResult:
    """Find phi with nu_{z-phi}(g) = nu_gamma(g) for every family member.

    Follows the residual-polynomial iteration: while the weighted minimum
    undershoots the true value, either the residual is a pure power -- then
    the next term is minus the subleading coefficient over delta (read at
    the leading level) -- or the initial degree strictly drops after
    recentering by the leading term of z - phi.  The family is processed in
    order; established equalities are monotone under later steps and are
    re-verified.  An optional second stage pushes every initial degree to
    zero.  Exceeding the step bound raises NonConvergence, which signals a
    bug or an out-of-model input rather than a user error.
    """
    gs = list(gs)
    if any(g.is_zero() for g in gs):
        raise ValueError("recentering needs nonzero polynomials")
    if gamma.arity() is not None:
        raise ValueError("recentering needs a rank-one (rational) value group")
    if step_bound is None:
        step_bound = 4 * max(g.degree() for g in gs) * max(
            64, gamma.z_series.denominator()) + 8
    phi = Series.zero()
    steps: list[RecenterStep] = []
    for idx, g in enumerate(gs):
        nu_val = nu_gamma(g, gamma)
        while True:
            form, shifted = _nu_ztilde(g, phi, gamma)
            if val_cmp(form.value, nu_val) == 0:
                break
            if len(steps) >= step_bound:
                raise NonConvergence(
                    f"recentering exceeded {step_bound} steps on polynomial {idx}")
            phi_term = _recenter_term(form, shifted, phi, gamma)
            steps.append(RecenterStep(idx, phi_term, form.value, form.delta))
            phi = phi + phi_term
        # earlier equalities persist by monotonicity; re-verify cheaply
        for j in range(idx):
            fj = _nu_ztilde_form(gs[j], phi, gamma)
            assert val_cmp(fj.value, nu_gamma(gs[j], gamma)) == 0, \
                "recentering regressed an established equality"
    entries = []
    for g in gs:
        before = nu_z(g, gamma.z_series.order())
        after = _nu_ztilde_form(g, phi, gamma)
        entries.append(RecenterEntry(before.value, before.delta, nu_gamma(g, gamma),
                                     after.value, after.delta))
    result = RecenterResult(phi, tuple(entries), tuple(steps))
    if not stage2:
        return result
    phi_star, star_deltas = _stage2(gs, gamma, phi, step_bound)
    return RecenterResult(phi, tuple(entries), tuple(steps), phi_star, star_deltas)


def _recenter_term(form: InitialFormZ, shifted: ZPoly, phi: Series,
                   gamma: Curvette) -> Series:
    delta = form.delta
    residual = form.as_scalar_poly()
    z_cur = gamma.z_series - phi
    if _is_pure_power(residual, delta):
        # next term: -(subleading over delta * leading), at the leading level
        lead_d = shifted.coeffs[delta].leading()
        lead_d1 = shifted.coeffs[delta - 1].leading()
        coeff = -(lead_d1[1] / (Scalar.rational(delta) * lead_d[1]))
        exp = lead_d1[0] - lead_d[0]
        term = Series.t_power(exp, coeff)
        # the same monomial must be the leading term of z - phi
        assert term.terms == (z_cur.leading_monomial()).terms, \
            "pure-power step disagrees with the shifted-variable leading term"
        return term
    if not z_cur.terms:
        raise UnknownOrder("curvette z-component exhausted during recentering")
    return z_cur.leading_monomial()


def _is_pure_power(residual, delta: int) -> bool:
    """Whether the residual equals c * (X - psi)^delta for some psi."""
    if delta == 0 or residual[delta].is_zero():
        return False
    c = residual[delta]
    psi = -(residual[delta - 1] / (Scalar.rational(delta) * c))
    from math import comb
    for i, r in enumerate(residual):
        expect = c * Scalar.rational(comb(delta, i)) * ((-psi) ** (delta - i))
        if r != expect:
            return False
    return not psi.is_zero()


def _stage2(gs, gamma, phi, step_bound):
    """Drive every initial degree to zero by peeling leading terms."""
    phi_star = Series.zero()
    guard = 0
    while True:
        deltas = []
        for g in gs:
            form = _nu_ztilde_form(g, phi + phi_star, gamma)
            deltas.append(form.delta)
        if all(d == 0 for d in deltas):
            return phi_star, tuple(deltas)
        z_cur = gamma.z_series - phi - phi_star
        if not z_cur.terms:
            raise UnknownOrder(
                "a family member vanishes along the curvette; its initial "
                "degree cannot reach zero")
        guard += 1
        if guard > step_bound:
            raise NonConvergence("stage-two recentering exceeded its step bound")
        phi_star = phi_star + z_cur.leading_monomial()


# -- the weighted nu_s calculus ----------------------------------------------------


def nu_s(h: ZPoly, s: int, gamma: Curvette) -> tuple[ValT, ZPoly]:
    """Weighted minimum min_i ((s+1) i + order(e_i)) and its initial form."""
    if h.is_zero():
        raise ValueError("nu_s of the zero polynomial")
    if h.denominator() != 1:
        raise ValueError("nu_s needs integer exponents; reparametrize first")
    weight = Fraction(s + 1)
    best: ValT = INF
    vals = []
    for i, e in enumerate(h.coeffs):
        if e.is_zero_exact():
            vals.append(INF)
            continue
        w = e.order()
        w = INF if w is INF else w + weight * i
        vals.append(w)
        if val_cmp(w, best) < 0:
            best = w
    keep = [e if val_cmp(vals[i], best) == 0 else Series.zero(e.arity)
            for i, e in enumerate(h.coeffs)]
    return best, ZPoly.make(keep)


# -- derivative-value check ---------------------------------------------------------


@dataclass(frozen=True)
class PrivBranchCheck:
    """Certificate table for the derivative-value comparison."""

    premise_holds: bool
    derivative_values: tuple  # (i, nu(g^(i))) for i = 0..k
    branch_values: tuple      # values of the factors of g
    k_branch_values: tuple    # values of the factors of g^(k)
    privileged_value: ValT
    conclusion_holds: Optional[bool]


def check_privbranch(g: ZPoly, k: int, gamma: Curvette,
                     target_order=None) -> PrivBranchCheck:
    """Premise: nu(g^(i)) >= nu(g) for i <= k.  Conclusion: every maximal-value
    factor of g^(k) has strictly larger value than every factor of g.

    Factor values are obtained by brute force: expand both polynomials into
    branches and evaluate each one along the curvette.  The guarantee is for
    origin-centered data (roots and curvette vanishing at t = 0, hence
    strictly positive factor values); with value-zero factors the strict
    inequality can degenerate to equality.
    """
    if not 1 <= k <= g.degree() - 1:
        raise ValueError("derivative index must satisfy 1 <= k <= deg-1")
    base = nu_gamma(g, gamma)
    derivative_values = [(0, base)]
    premise = True
    for i in range(1, k + 1):
        v = nu_gamma(g.divided_derivative(i), gamma)
        derivative_values.append((i, v))
        if val_cmp(v, base) < 0:
            premise = False
    if not premise:
        return PrivBranchCheck(False, tuple(derivative_values), (), (), INF, None)
    g_branches = newton_puiseux(g, target_order)
    k_branches = newton_puiseux(g.divided_derivative(k), target_order)
    g_vals = tuple(branch_value(b, gamma) for b in g_branches)
    k_vals = tuple(branch_value(b, gamma) for b in k_branches)
    sel = privileged(k_branches, gamma)
    concl = all(val_cmp(sel.value, v) > 0 for v in g_vals)
    return PrivBranchCheck(True, tuple(derivative_values), g_vals, k_vals,
                           sel.value, concl)
