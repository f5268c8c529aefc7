from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchsep.errors import UnknownOrder
from branchsep.series import INF, Series
from branchsep.zpoly import (ZPoly, nu_z, radical, squarefree_factors,
                             sturm_count, zpoly_gcd)

one = Series.constant(1)
t = Series.t_power(F(1))
t2 = Series.t_power(F(2))
t3 = Series.t_power(F(3))


def lin(phi):
    return ZPoly.make([-phi, one])


class TestDividedDerivative:
    def test_quadratic(self):
        g = ZPoly.make([-t, Series.zero(), one])  # z^2 - t
        assert g.divided_derivative(1) == ZPoly.make([Series.zero(), one.scale(2)])
        assert g.divided_derivative(2) == ZPoly.make([one])

    def test_cubic_by_formula(self):
        g = ZPoly.make([Series.zero(), t, Series.zero(), one])  # z^3 + t z
        assert g.divided_derivative(1) == ZPoly.make([t, Series.zero(), one.scale(3)])
        assert g.divided_derivative(2) == ZPoly.make([Series.zero(), one.scale(3)])

    def test_beyond_degree_is_zero(self):
        assert ZPoly.make([t, one]).divided_derivative(5).is_zero()


class TestEval:
    def test_root(self):
        g = ZPoly.make([-t, Series.zero(), one])
        assert g.eval(Series.t_power(F(1, 2))).is_zero_exact()

    def test_at_zero(self):
        g = ZPoly.make([-t, Series.zero(), one])
        assert g.eval(Series.zero()) == -t

    def test_substitution(self):
        g = lin(t2)  # z - t^2
        assert g.eval(t2 + t3) == t3

    def test_compose_shift_identity(self):
        g = ZPoly.make([t3, -(t + t2), one])
        s = t + t2
        shifted = g.compose_shift(s)
        # g(z + s) evaluated at 0 equals g(s)
        assert shifted.coeffs[0] == g.eval(s)
        assert shifted.compose_shift(-s) == g


class TestNuZ:
    def test_spec_example_balanced(self):
        g = ZPoly.make([-t, Series.zero(), one])
        form = nu_z(g, F(1, 2))
        assert form.value == 1 and form.support == (0, 2) and form.delta == 2

    def test_spec_example_dominant_constant(self):
        g = ZPoly.make([-t, Series.zero(), one])
        form = nu_z(g, F(2))
        assert form.value == 1 and form.support == (0,) and form.delta == 0

    def test_z_alone(self):
        g = ZPoly.make([Series.zero(), one])
        form = nu_z(g, F(5))
        assert form.support == (1,) and form.value == 5

    def test_unknown_order_propagates(self):
        g = ZPoly.make([Series((), F(2), None), one])
        with pytest.raises(UnknownOrder):
            nu_z(g, F(1))


class TestSturmFacade:
    def test_examples(self):
        assert sturm_count([F(0), F(-1), F(0), F(1)]) == 3
        assert sturm_count([F(1), F(0), F(1)]) == 0
        p = [F(2), F(-3), F(0), F(1)]  # (z-1)^2 (z+2)
        assert sturm_count(p, 0, INF) == 1
        assert sturm_count(p, 0, INF, multiplicity=True) == 2


class TestSeriesFieldStructure:
    def test_gcd_of_common_factor(self):
        g = lin(t) * lin(t) * lin(t2)
        h = lin(t) * lin(t2)
        assert zpoly_gcd(g, h) == h

    def test_gcd_coprime(self):
        assert zpoly_gcd(lin(t), lin(t2)).degree() == 0

    def test_squarefree_multiplicities(self):
        g = lin(t) * lin(t) * lin(t) * lin(t2)
        assert sorted((f.degree(), m) for f, m in squarefree_factors(g)) == \
            [(1, 1), (1, 3)]

    def test_radical_drops_multiplicity(self):
        g = lin(t) * lin(t) * lin(t2)
        assert radical(g) == lin(t) * lin(t2)

    def test_fractional_exponents(self):
        h = Series.t_power(F(1, 2))
        g = lin(h) * lin(h)
        assert squarefree_factors(g) == [(lin(h), 2)]

    @given(st.integers(1, 3), st.integers(1, 3))
    @settings(max_examples=20, deadline=None)
    def test_gcd_divides_both(self, a, b):
        g = lin(t) ** a * lin(t + t2)
        h = lin(t) ** b
        d = zpoly_gcd(g, h)
        assert d == lin(t) ** min(a, b)
