import random
from fractions import Fraction as F

import pytest

from branchsep.errors import ZeroPolynomial
from branchsep.qpoly import (cauchy_root_bound, coeffs_from_power_sums,
                             count_real_roots, descartes_count, discriminant,
                             power_sums_from_coeffs, qeval, qmul, resultant,
                             squarefree_decomposition, taylor_shift)
from branchsep.series import INF


def poly_from_roots(roots):
    p = [F(1)]
    for r in roots:
        p = qmul(p, [-F(r), F(1)])
    return p


class TestCounting:
    def test_cubic_all_real(self):
        assert count_real_roots([F(0), F(-1), F(0), F(1)]) == 3  # z^3 - z

    def test_no_real_roots(self):
        assert count_real_roots([F(1), F(0), F(1)]) == 0

    def test_multiplicity_modes(self):
        p = poly_from_roots([1, 1, -2])
        assert count_real_roots(p, 0, INF) == 1
        assert count_real_roots(p, 0, INF, multiplicity=True) == 2

    def test_open_interval_excludes_endpoints(self):
        p = poly_from_roots([0, 1])
        assert count_real_roots(p, 0, 1) == 0
        assert count_real_roots(p, F(-1, 2), F(3, 2)) == 2

    def test_zero_polynomial_raises(self):
        with pytest.raises(ZeroPolynomial):
            count_real_roots([])

    def test_agrees_with_descartes_randomized(self):
        rng = random.Random(42)
        for _ in range(150):
            d = rng.choice([2, 3, 4])
            p = [F(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(d)] + [F(1)]
            lo, hi = F(rng.randint(-6, -1)), F(rng.randint(1, 6))
            assert count_real_roots(p, lo, hi) == descartes_count(p, lo, hi)


class TestStructure:
    def test_taylor_shift(self):
        # (x+2)^2 - 3 from x^2 - 3
        assert taylor_shift([F(-3), F(0), F(1)], F(2)) == [F(1), F(4), F(1)]

    def test_squarefree_decomposition(self):
        p = qmul(poly_from_roots([1, 1]), poly_from_roots([-2]))
        parts = squarefree_decomposition(p)
        assert sorted((len(q) - 1, m) for q, m in parts) == [(1, 1), (1, 2)]

    def test_resultant_of_common_root(self):
        assert resultant(poly_from_roots([1, 2]), poly_from_roots([2, 5])) == 0
        assert resultant(poly_from_roots([1]), poly_from_roots([3])) == -2  # g(1)

    def test_discriminant_sign(self):
        assert discriminant([F(-1), F(0), F(1)]) > 0   # two real roots
        assert discriminant([F(1), F(0), F(1)]) < 0    # conjugate pair

    def test_cauchy_bound_contains_roots(self):
        p = poly_from_roots([3, -5, F(1, 2)])
        b = cauchy_root_bound(p)
        assert count_real_roots(p, -b, b) == 3


class TestNewtonIdentities:
    def test_power_sum_roundtrip(self):
        p = poly_from_roots([1, 2, -3])
        s = power_sums_from_coeffs(p, 3)
        assert s[0] == 0 and s[1] == 14 and s[2] == -18
        assert coeffs_from_power_sums(s, 3) == p

    def test_product_polynomial_roots(self):
        # roots {1, 2}: pairwise products {1, 2, 2, 4}
        p = poly_from_roots([1, 2])
        s = power_sums_from_coeffs(p, 4)
        q = coeffs_from_power_sums([x * x for x in s], 4)
        assert qeval(q, F(1)) == 0 and qeval(q, F(2)) == 0 and qeval(q, F(4)) == 0
        assert q == poly_from_roots([1, 2, 2, 4])
