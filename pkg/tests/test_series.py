from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchsep.errors import ExponentGroupMismatch, Indeterminate, UnknownOrder
from branchsep.scalars import Scalar
from branchsep.series import INF, Series, val_cmp


def sr(*pairs, trunc=INF, arity=None):
    return Series.make([(e, c) for e, c in pairs], trunc, arity)


t = Series.t_power(F(1))
t2 = Series.t_power(F(2))

exponents = st.fractions(min_value=0, max_value=8, max_denominator=4)
coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=8).filter(bool)


@st.composite
def exact_series(draw, max_terms=4):
    n = draw(st.integers(0, max_terms))
    es = draw(st.lists(exponents, min_size=n, max_size=n, unique=True))
    return Series.make([(e, draw(coeffs)) for e in es])


class TestOrder:
    def test_leading_exponent(self):
        assert sr((F(3), 1), (F(5), 2)).order() == 3

    def test_zero_series_is_infinite(self):
        assert Series.zero().order() is INF

    def test_lex_order(self):
        assert Series.t_power((0, 3)).order() == (0, 3)

    def test_unknown_order_raises(self):
        with pytest.raises(UnknownOrder):
            sr(trunc=F(4)).order()


class TestArith:
    def test_halves_multiply_to_t(self):
        h = Series.t_power(F(1, 2))
        assert h * h == t

    def test_truncation_propagates_through_add(self):
        a = sr((F(1), 1), (F(2), 1), trunc=F(3))
        b = sr((F(1), -1))
        s = a + b
        assert s.trunc == 3
        assert s.terms == sr((F(2), 1)).terms

    def test_lex_square_by_hand(self):
        # (t^(0,4) + b t^(1,0))^2 expanded with exponent sums in the lex group
        b = F(7, 2)
        s = Series.make([((0, 4), 1), ((1, 0), b)])
        sq = s * s
        expected = Series.make([((0, 8), 1), ((1, 4), 2 * b), ((2, 0), b * b)])
        assert sq == expected

    def test_group_mismatch(self):
        with pytest.raises(ExponentGroupMismatch):
            t + Series.t_power((0, 1))

    def test_mul_truncation_bound(self):
        a = sr((F(1), 1), trunc=F(3))
        b = sr((F(2), 1))
        assert (a * b).trunc == 5  # 3 + order(b)

    @given(exact_series(), exact_series())
    @settings(max_examples=80)
    def test_order_multiplicative(self, a, b):
        if not a.terms or not b.terms:
            assert (a * b).is_zero_exact() or (a.terms and b.terms)
            return
        assert (a * b).order() == a.order() + b.order()

    @given(exact_series(), exact_series(), exact_series())
    @settings(max_examples=60)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)


class TestReparam:
    def test_spec_examples(self):
        assert Series.t_power(F(1, 2)) .reparam(2) == t
        s = sr((F(1, 2), 1), (F(1), -1))
        assert s.reparam(2) == sr((F(1), 1), (F(2), -1))
        assert sr((F(3), 1)).reparam(1) == sr((F(3), 1))
        s2 = sr((F(2, 3), 1), (F(5, 6), 1))
        assert s2.reparam(6) == sr((F(4), 1), (F(5), 1))

    @given(exact_series(), st.integers(1, 5))
    @settings(max_examples=50)
    def test_order_scales(self, s, a):
        if s.terms:
            assert s.reparam(a).order() == a * s.order()


class TestCompare:
    def test_domination_for_small_t(self):
        assert t.compare(t2) > 0
        assert t.scale(2).compare(t.scale(2)) == 0

    def test_leading_difference(self):
        a = t - Series.t_power(F(3))
        b = t - t2
        assert a.compare(b) > 0  # difference t^2 - t^3 has positive lead

    def test_indeterminate_at_truncation(self):
        a = sr((F(1), 1), trunc=F(2))
        with pytest.raises(Indeterminate):
            a.compare(sr((F(1), 1)))

    @given(exact_series(), exact_series(), exact_series())
    @settings(max_examples=60)
    def test_translation_invariance(self, a, b, c):
        assert (a + c).compare(b + c) == a.compare(b)


class TestComplexParts:
    def test_re_im_split(self):
        s = sr((F(1), Scalar(F(1), ia=F(2))), (F(2), Scalar(ia=F(-1))))
        assert s.re() == sr((F(1), 1))
        assert s.im() == sr((F(1), 2), (F(2), -1))
        assert s.re() + s.im().scale(Scalar.imaginary(1)) == s
