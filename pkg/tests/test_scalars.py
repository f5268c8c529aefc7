from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchsep.errors import DegreeTooHigh
from branchsep.scalars import I, ONE, Scalar, polynomial_roots

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def quad(a, b, d=5):
    return Scalar(F(a), F(b), d=d)


class TestArithmetic:
    def test_field_basics(self):
        x = quad(1, 2) + I.__mul__(quad(3, -1))
        assert (x - x).is_zero()
        assert x * x.inverse() == ONE
        assert (x * x.conj()).is_real()

    @given(rationals, rationals, rationals, rationals)
    @settings(max_examples=60)
    def test_inverse_roundtrip(self, a, b, c, e):
        x = Scalar(a, b, c, e, d=3 if (b or e) else None)
        if x.is_zero():
            return
        assert x * x.inverse() == ONE
        assert (ONE / x) * x == ONE

    def test_mixing_radicands_fails(self):
        with pytest.raises(DegreeTooHigh):
            quad(1, 1, 2) + quad(1, 1, 3)


class TestSign:
    def test_pure_cases(self):
        assert Scalar.rational(F(-3, 7)).sign() == -1
        assert quad(0, 2).sign() == 1
        assert quad(0, -2).sign() == -1

    def test_mixed_signs_compare_squares(self):
        # 2 - sqrt(2) > 0 but 1 - sqrt(2) < 0
        assert quad(2, -1, 2).sign() == 1
        assert quad(1, -1, 2).sign() == -1
        assert quad(-2, 1, 2).sign() == -1
        assert quad(-1, 1, 2).sign() == 1

    def test_complex_sign_raises(self):
        with pytest.raises(ValueError):
            I.sign()


class TestSqrt:
    @given(rationals)
    @settings(max_examples=60)
    def test_square_roundtrip(self, q):
        r = Scalar.rational(q).sqrt()
        if r is not None:
            assert r * r == Scalar.rational(q)

    def test_rational_square(self):
        assert Scalar.rational(F(9, 4)).sqrt() == Scalar.rational(F(3, 2))

    def test_introduces_radical(self):
        r = Scalar.rational(F(3, 4)).sqrt()
        assert r == Scalar(rb=F(1, 2), d=3)

    def test_negative_goes_imaginary(self):
        r = Scalar.rational(-4).sqrt()
        assert r == Scalar(ia=F(2))

    def test_quadratic_element(self):
        # (1 + sqrt(2))^2 = 3 + 2*sqrt(2)
        x = quad(3, 2, 2)
        r = x.sqrt()
        assert r is not None and r * r == x

    def test_complex_element(self):
        x = Scalar(F(0), ia=F(2))  # 2i = (1+i)^2
        r = x.sqrt()
        assert r is not None and r * r == x


class TestRoots:
    def test_rational_roots_with_multiplicity(self):
        # (u - 1)^2 (u + 2) = u^3 - 3u + 2
        roots = dict(polynomial_roots([Scalar.rational(c) for c in (2, -3, 0, 1)]))
        assert roots[Scalar.rational(1)] == 2
        assert roots[Scalar.rational(-2)] == 1

    def test_quadratic_extension_roots(self):
        # 3u^2 - 1 -> +-1/sqrt(3)
        roots = [r for r, _ in polynomial_roots([Scalar.rational(-1), Scalar(),
                                                 Scalar.rational(3)])]
        assert {r * r for r in roots} == {Scalar.rational(F(1, 3))}

    def test_imaginary_roots(self):
        roots = [r for r, _ in polynomial_roots([Scalar.rational(1), Scalar(),
                                                 Scalar.rational(1)])]
        assert set(roots) == {I, -I}

    def test_cubic_irreducible_raises(self):
        with pytest.raises(DegreeTooHigh):
            polynomial_roots([Scalar.rational(-2), Scalar(), Scalar(),
                              Scalar.rational(1)])  # u^3 - 2
