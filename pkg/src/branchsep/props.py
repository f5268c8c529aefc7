"""Randomized property suite shared by the CLI and the acceptance tests.

Each property draws its own instances from a seeded generator, checks an
exact statement on every instance, and reports failures with reproduction
data.  The generators are deliberately biased so that the interesting
premises (equal derivative values, shared branch prefixes, separated
points) occur often.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .branches import (Branch, ReImPair, conjugation_closed, newton_puiseux,
                       order_real_branches, perturbation_bound_check, reconstruct)
from .errors import (ChainBroken, DegreeTooHigh, DenominatorBound, Indeterminate,
                     NoRealRoot, SoundnessViolation, UnknownOrder)
from .polygon import build as build_polygon, minkowski_sum
from .qpoly import descartes_count, squarefree_decomposition
from .scalars import Scalar
from .series import INF, Series, val_cmp
from .separation import (Instance, component_oracle, decide_separation,
                         hypothesis_check, rolle_between)
from .valuation import (Curvette, branch_value, check_privbranch, nu_complex,
                        nu_complex_norm, recenter)
from .xpoly import XPoly
from .zpoly import ZPoly, nu_z, sturm_count


@dataclass
class PropResult:
    name: str
    trials: int
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" ({len(self.failures)} failures)" if self.failures else ""
        return f"{status} {self.name}: {self.checked}/{self.trials} instances{extra}"


# -- generators -------------------------------------------------------------------


def rand_fraction(rng, num=6, den=4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_nonzero_fraction(rng, num=6, den=4) -> Fraction:
    while True:
        q = rand_fraction(rng, num, den)
        if q:
            return q


def rand_series(rng, max_terms=3, denom=2, complex_ok=False, lo_exp=0) -> Series:
    terms = []
    pool = [Fraction(n, denom) for n in range(lo_exp * denom, 4 * denom)]
    exps = sorted(rng.sample(pool, k=rng.randint(0, max_terms)))
    for e in exps:
        c = rand_nonzero_fraction(rng)
        if complex_ok and rng.random() < 0.4:
            terms.append((e, Scalar(Fraction(c), ia=rand_fraction(rng))))
        else:
            terms.append((e, Scalar.rational(c)))
    return Series.make(terms)


def rand_int_series(rng, max_terms=3, lo=1, hi=5) -> Series:
    n = rng.randint(0, max_terms)
    exps = sorted(rng.sample(range(lo, hi + 1), k=min(n, hi - lo + 1)))
    return Series.make([(Fraction(e), rand_nonzero_fraction(rng)) for e in exps])


def rand_branch_poly(rng, degree, denom=1, lo_exp=0) -> tuple[ZPoly, list[Series]]:
    """Monic polynomial assembled from random exact linear factors."""
    one = Series.constant(1)
    phis = []
    g = ZPoly.make([one])
    for _ in range(degree):
        phi = rand_series(rng, max_terms=rng.randint(1, 2), denom=denom, lo_exp=lo_exp)
        while not phi.terms:
            phi = rand_series(rng, max_terms=2, denom=denom, lo_exp=lo_exp)
        phis.append(phi)
        g = g * ZPoly.make([-phi, one])
    return g, phis


def rand_curvette_z(rng, phis, denom=1) -> Series:
    """A z-component near the given branches: midpoint, prefix tweak, or free."""
    mode = rng.random()
    if phis and mode < 0.45:
        a, b = rng.choice(phis), rng.choice(phis)
        mid = (a + b).scale(Fraction(1, 2))
        tweak_exp = Fraction(rng.randint(3, 7), denom)
        return mid + Series.t_power(tweak_exp, rand_nonzero_fraction(rng))
    if phis and mode < 0.7:
        phi = rng.choice(phis)
        tweak_exp = Fraction(rng.randint(2, 6), denom)
        return phi + Series.t_power(tweak_exp, rand_nonzero_fraction(rng))
    s = rand_series(rng, max_terms=2, denom=denom)
    if not s.terms:
        s = Series.t_power(Fraction(1), rand_nonzero_fraction(rng))
    return s


def curvette_for(z: Series) -> Curvette:
    return Curvette.make([("x", Series.t_power(Fraction(1))), ("z", z)])


# -- individual properties -----------------------------------------------------------


def prop_series_valuation(rng, trials=200) -> PropResult:
    """order(a*b) = order(a) + order(b); ultrametric inequality for sums."""
    fails = []
    for k in range(trials):
        a = rand_series(rng, complex_ok=True)
        b = rand_series(rng, complex_ok=True)
        if not a.terms or not b.terms:
            continue
        oa, ob = a.order(), b.order()
        if (a * b).order() != oa + ob:
            fails.append(f"#{k}: multiplicativity on {a} | {b}")
        s = a + b
        if s.terms and val_cmp(s.order(), min(oa, ob)) < 0:
            fails.append(f"#{k}: ultrametric on {a} | {b}")
        if oa != ob and (not s.terms or s.order() != min(oa, ob)):
            fails.append(f"#{k}: strict case on {a} | {b}")
    return PropResult("series-valuation", trials, trials, fails)


def prop_compare_order(rng, trials=200) -> PropResult:
    """compare is a strict total order, translation invariant."""
    fails = []
    for k in range(trials):
        a, b, c = (rand_series(rng) for _ in range(3))
        try:
            ab = a.compare(b)
            if ab != -b.compare(a):
                fails.append(f"#{k}: antisymmetry {a} | {b}")
            if (a + c).compare(b + c) != ab:
                fails.append(f"#{k}: translation {a} | {b} | {c}")
        except Indeterminate:
            continue
    return PropResult("compare-total-order", trials, trials, fails)


def prop_reparam(rng, trials=100) -> PropResult:
    fails = []
    for k in range(trials):
        s = rand_series(rng, denom=3)
        a = rng.randint(1, 4)
        r = s.reparam(a)
        if s.terms and r.order() != a * s.order():
            fails.append(f"#{k}: reparam order {s} a={a}")
    return PropResult("reparam-order", trials, trials, fails)


def prop_divided_derivative(rng, trials=100) -> PropResult:
    """Composition identity with the multinomial factor, exactly."""
    from math import comb
    fails = []
    for n in range(trials):
        g, _ = rand_branch_poly(rng, rng.randint(1, 4))
        j = rng.randint(0, 2)
        k = rng.randint(0, 2)
        lhs = g.divided_derivative(j).divided_derivative(k)
        rhs = g.divided_derivative(j + k)
        scaled = rhs.scale(comb(j + k, j))
        if len(lhs.coeffs) != len(scaled.coeffs) or any(
                not (x - y).is_zero_exact() for x, y in zip(lhs.coeffs, scaled.coeffs)):
            fails.append(f"#{n}: j={j} k={k} on {g}")
    return PropResult("divided-derivative-composition", trials, trials, fails)


def prop_eval_hom(rng, trials=100) -> PropResult:
    fails = []
    for k in range(trials):
        g, _ = rand_branch_poly(rng, rng.randint(1, 3))
        h, _ = rand_branch_poly(rng, rng.randint(1, 3))
        s = rand_series(rng)
        lhs = (g * h).eval(s)
        rhs = g.eval(s) * h.eval(s)
        if not (lhs - rhs).is_zero_exact():
            fails.append(f"#{k}: eval hom at {s}")
    return PropResult("eval-ring-homomorphism", trials, trials, fails)


def prop_minkowski(rng, trials=200) -> PropResult:
    """Newton polygon of a product is the Minkowski sum of the polygons."""
    fails = []
    for k in range(trials):
        g, _ = rand_branch_poly(rng, rng.randint(1, 3), denom=rng.choice([1, 1, 2]))
        h, _ = rand_branch_poly(rng, rng.randint(1, 3), denom=rng.choice([1, 1, 2]))
        hp = build_polygon(g * h).hull
        ms = minkowski_sum(build_polygon(g).hull, build_polygon(h).hull)
        if hp != ms:
            fails.append(f"#{k}: {g} | {h}: {hp} vs {ms}")
    return PropResult("polygon-minkowski", trials, trials, fails)


def prop_slopes_are_branch_values(rng, trials=100) -> PropResult:
    """Hull slopes with multiplicity are the negatives of the branch values."""
    fails = []
    for k in range(trials):
        g, phis = rand_branch_poly(rng, rng.randint(1, 4), denom=rng.choice([1, 2]))
        values = sorted(
            (phi.order() if phi.terms else INF) for phi in phis)
        if any(v is INF for v in values):
            continue
        poly = build_polygon(g)
        slopes = []
        for e in poly.edges:
            slopes.extend([-e.slope] * (e.j - e.i))
        if sorted(slopes) != sorted(values):
            fails.append(f"#{k}: {g}: slopes {slopes} values {values}")
    return PropResult("polygon-slopes-branch-values", trials, trials, fails)


def prop_nuz_bound(rng, trials=150) -> PropResult:
    """The weighted minimum never exceeds the value of the evaluation."""
    fails = []
    for k in range(trials):
        g, phis = rand_branch_poly(rng, rng.randint(1, 4))
        z = rand_curvette_z(rng, phis)
        gz = g.eval(z)
        if not gz.terms:
            continue
        if z.terms and val_cmp(z.order(), Fraction(0)) < 0:
            continue
        nz = nu_z(g, z.order() if z.terms else INF)
        if val_cmp(nz.value, gz.order()) > 0:
            fails.append(f"#{k}: nu_z {nz.value} > nu {gz.order()} on {g} at {z}")
    return PropResult("nu_z-lower-bound", trials, trials, fails)


def prop_newton_puiseux(rng, trials=60) -> PropResult:
    """Reconstruction, branch count, and conjugation closure."""
    fails = []
    checked = 0
    for k in range(trials):
        d = rng.randint(1, 4)
        if rng.random() < 0.5:
            g, _ = rand_branch_poly(rng, d, denom=rng.choice([1, 2]))
        else:
            one = Series.constant(1)
            coeffs = [rand_series(rng, denom=rng.choice([1, 2])) for _ in range(d)]
            g = ZPoly.make(coeffs + [one])
        try:
            bs = newton_puiseux(g)
        except (DegreeTooHigh, DenominatorBound):
            continue
        checked += 1
        if sum(b.multiplicity for b in bs) != g.degree():
            fails.append(f"#{k}: multiplicity sum on {g}")
            continue
        if not conjugation_closed(bs):
            fails.append(f"#{k}: conjugation closure on {g}")
        recon = reconstruct(bs)
        diff = recon - g
        for c in diff.coeffs:
            if c.terms:
                fails.append(f"#{k}: reconstruction differs at known terms on {g}")
                break
    return PropResult("newton-puiseux-reconstruction", trials, checked, fails)


def prop_branch_count_vs_sturm(rng, trials=40) -> PropResult:
    """Real-branch count equals the real-root count at small rational t."""
    fails = []
    checked = 0
    for k in range(trials):
        g, _ = rand_branch_poly(rng, rng.randint(1, 3), denom=1)
        try:
            bs = newton_puiseux(g)
        except (DegreeTooHigh, DenominatorBound):
            continue
        reals = {b.phi.terms for b in bs if b.is_real}
        t0 = Fraction(1, rng.randint(500, 2000))
        coeffs = [c_ser_eval(c, t0) for c in g.coeffs]
        try:
            n = sturm_count(coeffs)
        except Exception:
            continue
        checked += 1
        if n != len(reals):
            fails.append(f"#{k}: {len(reals)} branches vs {n} roots at t={t0} on {g}")
    return PropResult("real-branches-vs-sturm", trials, checked, fails)


def c_ser_eval(s: Series, t0: Fraction) -> Fraction:
    acc = Fraction(0)
    for e, c in s.terms:
        q = c.as_fraction()
        if q is None or e.denominator != 1:
            raise ValueError("rational integer-exponent series expected")
        acc += q * t0 ** int(e)
    return acc


def prop_reim(rng, trials=300) -> PropResult:
    """Extension identity and the imaginary-part inequality."""
    fails = []
    for k in range(trials):
        re = rand_series(rng)
        im = rand_series(rng)
        z = rand_series(rng)
        gamma = curvette_for(z)
        pair = ReImPair(re, im)
        v = nu_complex(pair, gamma)
        v2 = nu_complex_norm(pair, gamma)
        if val_cmp(v, v2) != 0:
            fails.append(f"#{k}: min {v} vs norm {v2} (re={re}, im={im}, z={z})")
        if val_cmp(im.order(), v) < 0:
            fails.append(f"#{k}: Im inequality (re={re}, im={im}, z={z})")
    return PropResult("re-im-extension", trials, trials, fails)


def prop_ordering_lemma(rng, trials=150) -> PropResult:
    """Between the point and a farther branch, values only grow."""
    fails = []
    checked = 0
    for k in range(trials):
        z = rand_curvette_z(rng, [])
        h1 = rand_series(rng)
        h2 = rand_series(rng)
        gamma = curvette_for(z)
        try:
            e1 = z - h1
            e2 = z - h2
            s1, s2 = e1.sign(), e2.sign()
            if not (0 < s1 and e1.compare(e2) < 0) and not (s1 < 0 and e1.compare(e2) > 0):
                continue
            checked += 1
            v1 = branch_value(Branch(h1), gamma)
            v2 = branch_value(Branch(h2), gamma)
            if val_cmp(v1, v2) < 0:
                fails.append(f"#{k}: nu({h1})={v1} < nu({h2})={v2} at z={z}")
        except Indeterminate:
            continue
    return PropResult("ordering-lemma", trials, checked, fails)


def prop_recenter(rng, trials=100) -> PropResult:
    """Postcondition, stage-two initial degree, per-step monotonicity."""
    fails = []
    checked = 0
    for k in range(trials):
        fam = []
        for _ in range(rng.randint(1, 3)):
            g, _ = rand_branch_poly(rng, rng.randint(1, 3), denom=1)
            fam.append(g)
        z = rand_int_series(rng, max_terms=2)
        if not z.terms:
            z = Series.t_power(Fraction(1))
        gamma = curvette_for(z)
        if any(nu_gamma_is_inf(g, gamma) for g in fam):
            continue
        checked += 1
        try:
            res = recenter(fam, gamma, stage2=True)
        except (UnknownOrder, Exception) as exc:
            fails.append(f"#{k}: recenter raised {exc!r}")
            continue
        for i, entry in enumerate(res.entries):
            if val_cmp(entry.nu_z_after, entry.nu_value) != 0:
                fails.append(f"#{k}: poly {i} postcondition {entry}")
        if res.star_deltas and any(d != 0 for d in res.star_deltas):
            fails.append(f"#{k}: stage-two degree {res.star_deltas}")
        # per-step monotonicity of the weighted minimum, replayed
        from .valuation import _nu_ztilde_form
        prefix = Series.zero()
        for st in res.steps:
            before = _nu_ztilde_form(fam[st.poly_index], prefix, gamma).value
            prefix = prefix + st.phi_term
            after = _nu_ztilde_form(fam[st.poly_index], prefix, gamma).value
            if val_cmp(after, before) < 0:
                fails.append(f"#{k}: step decreased the weighted minimum")
    return PropResult("recenter-postcondition", trials, checked, fails)


def nu_gamma_is_inf(g: ZPoly, gamma: Curvette) -> bool:
    from .valuation import nu_gamma
    return nu_gamma(g, gamma) is INF


def prop_privbranch(rng, trials=500) -> PropResult:
    """Premise-conditional strict domination of the privileged value."""
    fails = []
    checked = 0
    premise_count = 0
    attempts = 0
    while checked < trials and attempts < trials * 40:
        attempts += 1
        d = rng.randint(2, 5)
        # origin-centered data: every branch and the curvette vanish at t = 0,
        # so all factor values are strictly positive
        g, phis = rand_branch_poly(rng, d, denom=1, lo_exp=1)
        k = rng.randint(1, d - 1)
        z = rand_curvette_z(rng, phis)
        if not z.terms or z.order() <= 0:
            continue
        gamma = curvette_for(z)
        try:
            chk = check_privbranch(g, k, gamma)
        except (DegreeTooHigh, DenominatorBound, UnknownOrder, Indeterminate):
            continue
        checked += 1
        if chk.premise_holds:
            premise_count += 1
            if chk.conclusion_holds is not True:
                fails.append(
                    f"#{checked}: premise holds, conclusion fails: g={g}, k={k}, z={z}")
    if premise_count < max(5, trials // 50):
        fails.append(f"only {premise_count} premise-holding instances; generator too weak")
    return PropResult("privileged-derivative-value", trials, checked, fails)


def prop_rolle(rng, trials=200) -> PropResult:
    """Equidistance / generalized Rolle on shared-prefix branch pairs."""
    fails = []
    checked = 0
    attempts = 0
    while checked < trials and attempts < trials * 40:
        attempts += 1
        m = rng.randint(1, 3)
        prefix = Series.make([(Fraction(e), rand_fraction(rng))
                              for e in range(1, m)])
        d = rng.randint(2, 3)
        one = Series.constant(1)
        g = ZPoly.make([one])
        leads = rng.sample(range(-5, 6), k=d)
        phis = []
        for c in leads:
            tail_exp = m + rng.randint(1, 2)
            phi = prefix + Series.t_power(Fraction(m), Fraction(c)) \
                + Series.t_power(Fraction(tail_exp), rand_fraction(rng))
            phis.append(phi)
            g = g * ZPoly.make([-phi, one])
        b1, b2 = Branch(phis[0]), Branch(phis[1])
        mu = rng.choice([Fraction(num, 2) for num in range(1, 7)])
        z = prefix + Series.t_power(Fraction(m), mu)
        gamma = curvette_for(z)
        try:
            res = rolle_between(g, b1, b2, gamma)
        except (DegreeTooHigh, DenominatorBound, Indeterminate):
            continue
        except (NoRealRoot, ChainBroken) as exc:
            fails.append(f"#{checked}: guarantee failed: {exc} (g={g}, z={z})")
            checked += 1
            continue
        checked += 1
        if not res.no_unique_minimum():
            fails.append(f"#{checked}: unique minimum (g={g}, z={z})")
        if res.lead_found.sign() != res.lead_bound.sign() or \
                not _abs_lt(res.lead_found, res.lead_bound):
            fails.append(f"#{checked}: coefficient not inside the bound (g={g})")
    return PropResult("rolle-equidistance", trials, checked, fails)


def _abs_lt(a: Scalar, b: Scalar) -> bool:
    fa = a if a.sign() >= 0 else -a
    fb = b if b.sign() >= 0 else -b
    return fa < fb


def prop_separation_soundness(rng, configs=10, pairs_per=50) -> PropResult:
    """Contrapositive of the separation theorem on linear-branch instances."""
    fails = []
    checked = 0
    x = XPoly.variable("x", ("x", "z"))
    zv = XPoly.variable("z", ("x", "z"))
    for cfg in range(configs):
        n = rng.randint(1, 4)
        cs = [rand_fraction(rng, num=4, den=2) for _ in range(n)]
        f = XPoly.constant(1, ("x", "z"))
        for c in cs:
            f = f * (zv - x.scale(c))
        for _ in range(pairs_per):
            za = Series.make([(Fraction(1), rand_fraction(rng, num=5, den=2)),
                              (Fraction(2), rand_fraction(rng))])
            zb = Series.make([(Fraction(1), rand_fraction(rng, num=5, den=2)),
                              (Fraction(2), rand_fraction(rng))])
            inst = Instance(
                f=f,
                alpha=Curvette.make([("x", Series.t_power(Fraction(1))), ("z", za)]),
                beta=Curvette.make([("x", Series.t_power(Fraction(1))), ("z", zb)]),
                box=(("x", (Fraction(1, 4), Fraction(1))),),
                grid=3, degree_bound=2)
            try:
                cert = decide_separation(inst)
            except SoundnessViolation as exc:
                fails.append(f"cfg {cfg}: soundness violation: {exc}")
                checked += 1
                continue
            except (Indeterminate, UnknownOrder):
                continue
            checked += 1
            if cert.verdict not in ("same-component", "hypothesis-violated", "undecided"):
                fails.append(f"cfg {cfg}: unexpected verdict {cert.verdict}")
    return PropResult("separation-soundness", configs * pairs_per, checked, fails)


def prop_sturm_oracle(rng, trials=200) -> PropResult:
    """Sturm counting versus Descartes bisection, both counting modes."""
    fails = []
    for k in range(trials):
        d = rng.choice([3, 4])
        base = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(d)] + [Fraction(1)]
        if rng.random() < 0.3:
            # inject a repeated factor for the multiplicity mode
            r = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            base = _mul_lists(base, [r * r, -2 * r, Fraction(1)])
        lo = Fraction(rng.randint(-8, 0))
        hi = Fraction(rng.randint(1, 8))
        s_distinct = sturm_count(base, lo, hi)
        d_distinct = descartes_count(base, lo, hi)
        if s_distinct != d_distinct:
            fails.append(f"#{k}: distinct {s_distinct} vs {d_distinct} on {base}")
        s_mult = sturm_count(base, lo, hi, multiplicity=True)
        d_mult = sum(i * descartes_count(p, lo, hi)
                     for p, i in squarefree_decomposition(base))
        if s_mult != d_mult:
            fails.append(f"#{k}: mult {s_mult} vs {d_mult} on {base}")
    return PropResult("sturm-vs-descartes", trials, trials, fails)


def _mul_lists(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def prop_perturbation(rng, trials=50) -> PropResult:
    fails = []
    for d in (1, 2, 3, 4):
        for eps in (Fraction(1, 2), Fraction(1, 10)):
            rep = perturbation_bound_check(d, eps, trials, rng)
            if not rep.ok:
                fails.append(f"d={d} eps={eps}: {len(rep.violations)} violations")
    return PropResult("perturbation-bound", 8 * trials, 8 * trials, fails)


ALL_PROPS: list[Callable] = [
    prop_series_valuation,
    prop_compare_order,
    prop_reparam,
    prop_divided_derivative,
    prop_eval_hom,
    prop_minkowski,
    prop_slopes_are_branch_values,
    prop_nuz_bound,
    prop_newton_puiseux,
    prop_branch_count_vs_sturm,
    prop_reim,
    prop_ordering_lemma,
    prop_recenter,
    prop_privbranch,
    prop_rolle,
    prop_separation_soundness,
    prop_sturm_oracle,
    prop_perturbation,
]


def run_all(seed: int, scale: Fraction = Fraction(1, 4)) -> list[PropResult]:
    """Run every property with trial counts scaled down for interactive use."""
    import inspect
    results = []
    for prop in ALL_PROPS:
        rng = random.Random(f"{seed}:{prop.__name__}")
        sig = inspect.signature(prop)
        kwargs = {}
        for name, p in sig.parameters.items():
            if name == "rng":
                continue
            if isinstance(p.default, int):
                kwargs[name] = max(4, int(p.default * scale))
        results.append(prop(rng, **kwargs))
    return results
