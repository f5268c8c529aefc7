from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchsep.errors import ParseError
from branchsep.parser import (parse_curvette, parse_series, parse_xpoly,
                              parse_zpoly)
from branchsep.scalars import Scalar
from branchsep.series import INF, Series, series_to_text
from branchsep.zpoly import ZPoly


class TestExpressions:
    def test_polynomial(self):
        g = parse_zpoly("z^2 - (t + t^2)*z + t^3")
        assert g.degree() == 2
        assert g.coeffs[1] == -(Series.t_power(F(1)) + Series.t_power(F(2)))

    def test_fractional_power(self):
        assert parse_series("t^(1/2)") == Series.t_power(F(1, 2))

    def test_lex_tuple(self):
        assert parse_series("3*t^(0,4)") == Series.t_power((0, 4), 3)

    def test_scalars(self):
        s = parse_series("(1/2 + 3*i - sqrt(5))")
        assert s.coefficient(F(0)) == Scalar(F(1, 2), F(-1), F(3), d=5)

    def test_truncation_tail(self):
        s = parse_series("t - t^2 + O(t^4)")
        assert s.trunc == 4

    def test_division_by_constant_only(self):
        assert parse_series("t/2") == Series.t_power(F(1), F(1, 2))
        with pytest.raises(ParseError):
            parse_zpoly("1/z")

    def test_errors_carry_position(self):
        with pytest.raises(ParseError):
            parse_zpoly("z^")
        with pytest.raises(ParseError):
            parse_zpoly("z + $")


class TestRoundTrip:
    cases = [
        "t",
        "-t^(1/2) + 2*t",
        "3*t^(0,4) + t^(1,1)",
        "(1/2+3*i)*t^2 -sqrt(5)*t^3",
        "t - t^3 + O(t^(7/2))",
    ]

    @pytest.mark.parametrize("text", cases)
    def test_series_fixed_cases(self, text):
        s = parse_series(text)
        assert parse_series(series_to_text(s)) == s

    def test_zpoly_case(self):
        g = parse_zpoly("z^3 - (t + t^2)*z + t^3")
        assert parse_zpoly(str(g)) == g

    @given(st.lists(st.tuples(
        st.fractions(min_value=0, max_value=6, max_denominator=4),
        st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool)),
        max_size=4))
    @settings(max_examples=80)
    def test_series_roundtrip_randomized(self, pairs):
        s = Series.make(pairs)
        assert parse_series(series_to_text(s)) == s


class TestXPoly:
    def test_product(self):
        f = parse_xpoly("(z - x)*(z + x)")
        assert str(f) == "z^2 -x^2"
        assert [str(c) for c in f.z_coefficients()] == ["-x^2", "0", "1"]

    def test_allowed_variables(self):
        with pytest.raises(ParseError):
            parse_xpoly("w + z", allowed=("x", "z"))


class TestCurvette:
    def test_components_and_signs(self):
        cv = parse_curvette("""
            x = t^3
            z = t^5 + 3*t^7
            sign 0 = +
        """)
        assert cv.component("x") == Series.t_power(F(3))
        assert cv.z_series == Series.t_power(F(5)) + Series.t_power(F(7), 3)
        assert cv.signs == (1,)

    def test_missing_z_rejected(self):
        with pytest.raises(ParseError):
            parse_curvette("x = t")

    def test_negative_generator_flips_odd_exponents(self):
        cv = parse_curvette("""
            x = t
            z = t^2
            sign 0 = -
        """)
        assert cv.sign_of_series(Series.t_power(F(1))) == -1
        assert cv.sign_of_series(Series.t_power(F(2))) == 1

    def test_roundtrip_via_str(self):
        cv = parse_curvette("x = t\nz = 2*t + t^3")
        again = parse_curvette(str(cv))
        assert again.components == cv.components
