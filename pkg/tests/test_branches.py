import random
from fractions import Fraction as F

import pytest

from branchsep.branches import (Branch, between, between_series, conjugation_closed,
                                newton_puiseux, order_real_branches,
                                perturbation_bound_check, perturbation_delta,
                                reconstruct)
from branchsep.errors import DegreeTooHigh, Indeterminate
from branchsep.scalars import Scalar
from branchsep.series import INF, Series
from branchsep.zpoly import ZPoly

one = Series.constant(1)
t = Series.t_power(F(1))
t2 = Series.t_power(F(2))
t3 = Series.t_power(F(3))
half = Series.t_power(F(1, 2))


def lin(phi):
    return ZPoly.make([-phi, one])


class TestExpansion:
    def test_square_root_branches(self):
        bs = newton_puiseux(ZPoly.make([-t, Series.zero(), one]))
        phis = sorted(str(b.phi) for b in bs)
        assert phis == ["-t^(1/2)", "t^(1/2)"]
        assert all(b.is_real for b in bs)

    def test_conjugate_pair(self):
        bs = newton_puiseux(ZPoly.make([t, Series.zero(), one]))
        assert all(not b.is_real for b in bs)
        assert conjugation_closed(bs)
        for b in bs:
            pair = b.re_im()
            assert pair.re.is_zero_exact()
            assert pair.im in (half, -half)

    def test_two_edges(self):
        g = ZPoly.make([t3, -(t + t2), one])
        bs = newton_puiseux(g)
        assert {str(b.phi) for b in bs} == {"t", "t^2"}
        assert reconstruct(bs) == g

    def test_multiplicity(self):
        g = lin(t) * lin(t) * lin(-t)
        bs = newton_puiseux(g)
        mults = {str(b.phi): b.multiplicity for b in bs}
        assert mults == {"t": 2, "-t": 1}

    def test_truncated_branch_certified(self):
        # z^2 - t^2 (1 + t): roots +-t sqrt(1+t), infinitely many terms
        g = ZPoly.make([-(t2 + t3), Series.zero(), one])
        bs = newton_puiseux(g, target_order=5)
        for b in bs:
            assert b.phi.trunc is not INF
            assert (F(5) <= b.phi.trunc)
            # residual order certifies the contact
            assert b.residual_order is not INF and b.residual_order > 5

    def test_quadratic_extension(self):
        g = ZPoly.make([-t2.scale(F(1, 3)), Series.zero(), one])  # z^2 - t^2/3
        bs = newton_puiseux(g)
        lead = {b.phi.leading()[1] for b in bs}
        assert lead == {Scalar(rb=F(1, 3), d=3), Scalar(rb=F(-1, 3), d=3)}

    def test_degree_too_high(self):
        # z^3 - 2 t^3: residual u^3 - 2 is irreducible over the field
        g = ZPoly.make([-t3.scale(2), Series.zero(), Series.zero(), one])
        with pytest.raises(DegreeTooHigh):
            newton_puiseux(g)

    def test_reconstruction_randomized(self):
        rng = random.Random(3)
        from branchsep.props import rand_branch_poly
        for _ in range(25):
            g, _ = rand_branch_poly(rng, rng.randint(1, 4), denom=rng.choice([1, 2]))
            bs = newton_puiseux(g)
            assert sum(b.multiplicity for b in bs) == g.degree()
            diff = reconstruct(bs) - g
            assert all(not c.terms for c in diff.coeffs)


class TestOrdering:
    def test_sorted_by_small_t(self):
        bs = [Branch(t.scale(3)), Branch(t), Branch(t.scale(2))]
        assert [str(b.phi) for b in order_real_branches(bs)] == ["t", "2*t", "3*t"]

    def test_second_order_tiebreak(self):
        bs = [Branch(t), Branch(t - t2)]
        assert [str(b.phi) for b in order_real_branches(bs)] == ["t -t^2", "t"]

    def test_square_roots(self):
        bs = [Branch(-half), Branch(half)]
        assert [str(b.phi) for b in order_real_branches(bs)] == ["-t^(1/2)", "t^(1/2)"]

    def test_equal_branches_rejected(self):
        with pytest.raises(Indeterminate):
            order_real_branches([Branch(t), Branch(t)])


class TestBetween:
    def test_separating(self):
        h = Branch(t.scale(2))  # z - 2t
        assert between(h, t.scale(3), t) is True
        assert between(h, t.scale(3), t.scale(4)) is False

    def test_three_series_variant(self):
        psi = t
        phi1 = t.scale(F(1, 2))
        phi2 = t.scale(F(3, 2)) + t2.scale(Scalar.imaginary(1))
        assert between_series(phi1, psi, phi2.re()) is True
        assert between_series(psi, phi1, phi2.re()) is False


class TestPerturbationBound:
    def test_delta_values(self):
        assert perturbation_delta(1, F(1, 10)) == F(1, 10)
        assert perturbation_delta(2, F(1, 2)) == F(1, 16)

    def test_degree_one_exact(self):
        rng = random.Random(0)
        rep = perturbation_bound_check(1, F(1, 10), 50, rng)
        assert rep.ok and rep.delta == F(1, 10)

    def test_degree_two_both_routes(self):
        rng = random.Random(1)
        rep = perturbation_bound_check(2, F(1, 2), 60, rng)
        assert rep.ok

    def test_degree_three_certified(self):
        rng = random.Random(2)
        rep = perturbation_bound_check(3, F(1, 10), 30, rng)
        assert rep.ok

    def test_detects_outliers(self):
        from branchsep.branches import _roots_inside
        # z^3 - 1 has a root on the unit circle
        assert _roots_inside([F(-1), F(0), F(0), F(1)], F(1, 2)) is False
        assert _roots_inside([F(-1), F(0), F(0), F(1)], F(2)) is True
