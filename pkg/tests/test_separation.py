import random
from fractions import Fraction as F

import pytest

from branchsep.branches import Branch
from branchsep.errors import EmptyDomain, SoundnessViolation
from branchsep.separation import (Instance, build_claim_chain, certificate_from_text,
                                  certificate_to_text, component_oracle,
                                  decide_separation, good_position_check,
                                  hypothesis_check, instance_to_text, parse_instance,
                                  replay, rolle_between, search_sign_changers, theta)
from branchsep.series import INF, Series
from branchsep.valuation import Curvette
from branchsep.zpoly import ZPoly

one = Series.constant(1)
t = Series.t_power(F(1))
t2 = Series.t_power(F(2))


def lin(phi):
    return ZPoly.make([-phi, one])


def curv(z, x=t):
    return Curvette.make([("x", x), ("z", z)])


def make_instance(text):
    return parse_instance(text)


BASE = """
alpha.x: t
beta.x: t
box.x: [1/4, 1]
grid: 5
degree_bound: 2
"""


class TestGoodPosition:
    def test_two_real_roots_constant(self):
        inst = make_instance("f: z^2 - x\nalpha.z: 2*t\nbeta.z: 3*t" + BASE)
        rep = good_position_check(inst)
        assert rep.verified_on_samples
        assert rep.per_derivative[0].distinct == (2,) * 5
        assert rep.per_derivative[1].distinct == (1,) * 5

    def test_no_real_roots_constant(self):
        inst = make_instance("f: z^2 + x\nalpha.z: 2*t\nbeta.z: 3*t" + BASE)
        rep = good_position_check(inst)
        assert rep.verified_on_samples
        assert rep.per_derivative[0].distinct == (0,) * 5

    def test_flipping_count_detected(self):
        inst = make_instance(
            "f: z^2 - x\nalpha.z: 2*t\nbeta.z: 3*t\nalpha.x: t\nbeta.x: t\n"
            "box.x: [-1, 1]\ngrid: 5\ndegree_bound: 2")
        rep = good_position_check(inst)
        assert not rep.verified_on_samples
        assert rep.first_violation().k == 0

    def test_empty_box_rejected(self):
        inst = make_instance("f: z - x\nalpha.z: 2*t\nbeta.z: 3*t\nalpha.x: t\n"
                             "beta.x: t\ngrid: 5\ndegree_bound: 2")
        with pytest.raises(EmptyDomain):
            good_position_check(inst)


class TestTheta:
    def test_double_root(self):
        g = ZPoly.make([Series.zero(), Series.zero(), one])  # z^2
        assert theta(g, curv(t)) == 1

    def test_quick_drop(self):
        g = ZPoly.make([-t * t, Series.zero(), one])
        assert theta(g, curv(t + Series.t_power(F(5)))) == 1

    def test_deep_theta(self):
        # f = z^4 - 2 x^2 z^2 along z = t + t^3: first and second values tie
        g = ZPoly.make([Series.zero(), Series.zero(), (t * t).scale(-2),
                        Series.zero(), one])
        assert theta(g, curv(t + Series.t_power(F(3)))) == 2


class TestRolle:
    def test_equidistance_midpoint(self):
        g = lin(Series.zero()) * lin(t)  # z(z - t); derivative root at t/2
        res = rolle_between(g, Branch(Series.zero()), Branch(t), curv(t.scale(2)))
        assert res.mode == "equidistance"
        assert res.branch.phi == t.scale(F(1, 2))
        assert res.no_unique_minimum()

    def test_quadratic_extension_root(self):
        g = lin(Series.zero()) * lin(t) * lin(-t)  # derivative 3z^2 - t^2
        res = rolle_between(g, Branch(Series.zero()), Branch(t), curv(t.scale(2)))
        lead = res.branch.phi.leading()[1]
        assert lead * lead == __import__("branchsep.scalars", fromlist=["Scalar"]).Scalar.rational(F(1, 3))
        assert lead.sign() > 0  # between 0 and t

    def test_three_value_report(self):
        g = lin(Series.zero()) * lin(t)
        gamma = curv(t.scale(F(1, 2)) + Series.t_power(F(3)))
        res = rolle_between(g, Branch(Series.zero()), Branch(t), gamma)
        vals = sorted([res.value_h1, res.value_h2, res.value_v], key=str)
        assert res.value_v == 3  # z - t/2 has high contact
        assert res.no_unique_minimum()

    def test_generalized_mode(self):
        # branches 0 and t of z(z-t), curvette hugging t: values 1 < 3
        g = lin(Series.zero()) * lin(t)
        gamma = curv(t + Series.t_power(F(3)))
        res = rolle_between(g, Branch(Series.zero()), Branch(t), gamma)
        assert res.mode == "generalized"
        assert res.value_v == res.value_h1 == 1

    def test_randomized_guarantees(self):
        from branchsep.props import prop_rolle
        r = prop_rolle(random.Random(12), trials=40)
        assert r.ok, r.failures[:3]


class TestHypothesis:
    def test_sign_changer_found(self):
        inst = make_instance("f: (z - x)*(z + x)\nalpha.z: 2*t\nbeta.z: -2*t" + BASE)
        rep = hypothesis_check(inst)
        assert rep.status == "violated"
        assert rep.mu_hat_alpha == 1 and rep.nu_f_alpha == 2

    def test_plausible_when_together(self):
        inst = make_instance("f: z - x\nalpha.z: 2*t\nbeta.z: 3*t" + BASE)
        rep = hypothesis_check(inst)
        assert rep.status == "plausible"
        assert not rep.f_changes_sign

    def test_vacuous_search_is_plausible(self):
        inst = make_instance("f: z\nalpha.z: t\nbeta.z: 2*t" + BASE)
        rep = hypothesis_check(inst)
        assert rep.status == "plausible"


class TestDecide:
    def test_same_component(self):
        inst = make_instance("f: z - x\nalpha.z: 2*t\nbeta.z: 3*t" + BASE)
        cert = decide_separation(inst)
        assert cert.verdict == "same-component"

    def test_violated_with_witness(self):
        inst = make_instance("f: (z - x)*(z + x)\nalpha.z: 2*t\nbeta.z: -2*t" + BASE)
        cert = decide_separation(inst)
        assert cert.verdict == "hypothesis-violated"
        assert cert.witness is not None

    def test_not_good_position(self):
        inst = make_instance(
            "f: z^2 - x\nalpha.z: 2*t\nbeta.z: 3*t\nalpha.x: t\nbeta.x: t\n"
            "box.x: [-1, 1]\ngrid: 5\ndegree_bound: 2")
        cert = decide_separation(inst)
        assert cert.verdict == "not-good-position"

    def test_degenerate_point_on_zero_set(self):
        inst = make_instance("f: z - x\nalpha.z: t\nbeta.z: 3*t" + BASE)
        cert = decide_separation(inst)
        assert cert.verdict == "undecided"

    def test_degree_two_replays_contradiction(self):
        # both branches between the points, equal signs: the first derivative
        # must drop below f on each side, and z is the produced witness
        inst = make_instance("f: (z - x)*(z + x)\nalpha.z: 2*t\nbeta.z: -2*t" + BASE)
        F_alpha = inst.fiber(inst.alpha)
        assert theta(F_alpha, inst.alpha) == 1
        cert = decide_separation(inst)
        assert any(c.label == "witness-below" for c in cert.checks)


class TestClaimChain:
    def test_quartic_chain(self):
        inst = make_instance(
            "f: z^4 - 2*x^2*z^2\nalpha.z: t + t^3\nbeta.z: -t + t^3" + BASE)
        cert = build_claim_chain(inst)
        assert cert.theta_value == 2
        assert len(cert.chain) == 2
        base = cert.chain[0]
        assert base.g1 == base.g2 == "z - (0)"  # double branch, base convention
        step = cert.chain[1]
        assert "sqrt(3)" in step.g1 and "sqrt(3)" in step.g2

    def test_chain_checks_replay(self):
        inst = make_instance(
            "f: z^4 - 2*x^2*z^2\nalpha.z: t + t^3\nbeta.z: -t + t^3" + BASE)
        cert = decide_separation(inst)
        rep = replay(certificate_from_text(certificate_to_text(cert)))
        assert rep.ok, rep.failures[:3]


class TestOracle:
    def test_band_counting(self):
        inst = make_instance("f: (z - x)*(z + x)\nalpha.z: 2*t\nbeta.z: -2*t" + BASE)
        orc = component_oracle(inst)
        assert not orc.same_component and orc.branches_between == 2

    def test_same_band(self):
        inst = make_instance("f: (z - x)*(z + x)\nalpha.z: 2*t\nbeta.z: 3*t" + BASE)
        orc = component_oracle(inst)
        assert orc.same_component

    def test_straight_path_agreement(self):
        # exact root counting on the straight z-segment at a small rational t
        # agrees with the band oracle (same band iff the segment misses {f=0})
        rng = random.Random(21)
        from branchsep.props import rand_fraction
        from branchsep.xpoly import XPoly
        from branchsep.zpoly import sturm_count
        x = XPoly.variable("x", ("x", "z"))
        zv = XPoly.variable("z", ("x", "z"))
        checked = 0
        for _ in range(40):
            cs = sorted({rand_fraction(rng, 3, 2) for _ in range(rng.randint(1, 4))})
            f = XPoly.constant(1, ("x", "z"))
            for c in cs:
                f = f * (zv - x.scale(c))
            za = Series.make([(F(1), rand_fraction(rng, 4, 2)), (F(2), rand_fraction(rng))])
            zb = Series.make([(F(1), rand_fraction(rng, 4, 2)), (F(2), rand_fraction(rng))])
            inst = Instance(f=f, alpha=curv(za), beta=curv(zb),
                            box=(("x", (F(1, 4), F(1))),), grid=3)
            t0 = F(1, 1000)
            a_val = _eval_at(za, t0)
            b_val = _eval_at(zb, t0)
            spec = [c.eval_rational({"x": t0}) for c in f.z_coefficients()]
            if _qe(spec, a_val) == 0 or _qe(spec, b_val) == 0 or a_val == b_val:
                continue
            lo, hi = min(a_val, b_val), max(a_val, b_val)
            same_by_path = sturm_count(spec, lo, hi) == 0
            try:
                orc = component_oracle(inst)
            except Exception:
                continue
            checked += 1
            assert orc.same_component == same_by_path, (cs, za, zb)
        assert checked >= 20


def _eval_at(s, t0):
    acc = F(0)
    for e, c in s.terms:
        acc += c.as_fraction() * t0 ** int(e)
    return acc


def _qe(p, x):
    acc = F(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


class TestCertificates:
    def test_round_trip_and_replay(self):
        inst = make_instance("f: (z - x)*(z + x)\nalpha.z: 2*t\nbeta.z: -2*t" + BASE)
        cert = decide_separation(inst)
        text = certificate_to_text(cert)
        again = certificate_from_text(text)
        assert again.verdict == cert.verdict
        assert certificate_to_text(again) == text
        assert replay(again).ok

    def test_instance_round_trip(self):
        inst = make_instance("f: z - x\nalpha.z: 2*t\nbeta.z: 3*t" + BASE + "seed: 5")
        text = instance_to_text(inst)
        assert parse_instance(text) == inst

    def test_soundness_property(self):
        from branchsep.props import prop_separation_soundness
        r = prop_separation_soundness(random.Random(6), configs=4, pairs_per=10)
        assert r.ok, r.failures[:3]
