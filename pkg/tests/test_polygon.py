import random
from fractions import Fraction as F

import pytest

from branchsep.errors import NoEdges, NotAnEdge
from branchsep.polygon import build, deltanul_check, initial_form_edge, min_slope_side, minkowski_sum
from branchsep.scalars import Scalar
from branchsep.series import Series
from branchsep.zpoly import ZPoly

one = Series.constant(1)
t = Series.t_power(F(1))
t2 = Series.t_power(F(2))
t3 = Series.t_power(F(3))


def lin(phi):
    return ZPoly.make([-phi, one])


class TestBuild:
    def test_two_point_hull(self):
        p = build(ZPoly.make([-t, Series.zero(), one]))
        assert p.hull == ((0, F(1)), (2, F(0)))
        assert [e.slope for e in p.edges] == [F(-1, 2)]

    def test_three_vertex_hull(self):
        p = build(ZPoly.make([t3, -(t + t2), one]))
        assert p.hull == ((0, F(3)), (1, F(1)), (2, F(0)))
        assert [e.slope for e in p.edges] == [F(-2), F(-1)]

    def test_monomial_has_no_edges(self):
        p = build(ZPoly.make([Series.zero(), Series.zero(), Series.zero(), one]))
        assert p.hull == ((3, F(0)),)
        assert p.edges == ()
        with pytest.raises(NoEdges):
            min_slope_side(p)

    def test_points_above_hull_dropped(self):
        # middle coefficient too high to be a vertex
        p = build(ZPoly.make([t2, t3.scale(5), one]))
        assert p.hull == ((0, F(2)), (2, F(0)))

    def test_lex_valued_polygon(self):
        a0 = Series.t_power((1, 4))
        p = build(ZPoly.make([a0, Series.constant(1, 2)]))
        assert p.hull == ((0, (F(1), F(4))), (1, (F(0), F(0))))


class TestInitialForm:
    def test_collapse_of_square_minus_t(self):
        g = ZPoly.make([-t, Series.zero(), one])
        edge = build(g).edges[0]
        in_l, residual = initial_form_edge(g, edge)
        assert residual == [Scalar.rational(-1), Scalar(), Scalar.rational(1)]
        assert in_l == g  # both terms are leading monomials here

    def test_collapse_of_mixed(self):
        g = ZPoly.make([t3, -(t + t2), one])
        edge = build(g).edges[1]  # slope -1: terms (1,1) and (2,0)
        in_l, residual = initial_form_edge(g, edge)
        assert residual == [Scalar.rational(-1), Scalar.rational(1)]
        assert in_l == ZPoly.make([Series.zero(), -t, one])

    def test_edge_has_at_least_two_terms(self):
        g = ZPoly.make([t3, -(t + t2), one])
        for edge in build(g).edges:
            _, residual = initial_form_edge(g, edge)
            assert sum(1 for c in residual if not c.is_zero()) >= 2

    def test_foreign_edge_rejected(self):
        g = ZPoly.make([-t, Series.zero(), one])
        from branchsep.polygon import Edge
        with pytest.raises(NotAnEdge):
            initial_form_edge(g, Edge(0, F(5), 2, F(0)))


class TestMinSlope:
    def test_leftmost_edge(self):
        p = build(ZPoly.make([t3, -(t + t2), one]))
        e = min_slope_side(p)
        assert (e.i, e.j, e.slope) == (0, 1, F(-2))

    def test_single_edge(self):
        p = build(ZPoly.make([-t, Series.zero(), one]))
        assert min_slope_side(p).slope == F(-1, 2)


class TestDeltaNul:
    def test_dominant_constant(self):
        g = ZPoly.make([-t, Series.zero(), one])
        # curvette z = t^2: branch values are 1/2 each, nu(z) = 2 exceeds them
        assert deltanul_check(g, F(2), branch_values=[F(1, 2), F(1, 2)]) is True

    def test_balanced_case(self):
        g = ZPoly.make([-t, Series.zero(), one])
        assert deltanul_check(g, F(1, 2), branch_values=[F(1, 2), F(1, 2)]) is False

    def test_degenerate_z(self):
        g = ZPoly.make([Series.zero(), one])  # g = z, only branch is 0
        from branchsep.series import INF
        assert deltanul_check(g, F(3), branch_values=[INF]) is False


class TestMinkowski:
    def test_random_products(self):
        rng = random.Random(9)
        from branchsep.props import rand_branch_poly
        for _ in range(60):
            g, _ = rand_branch_poly(rng, rng.randint(1, 3), denom=rng.choice([1, 2]))
            h, _ = rand_branch_poly(rng, rng.randint(1, 3), denom=rng.choice([1, 2]))
            assert build(g * h).hull == minkowski_sum(build(g).hull, build(h).hull)

    def test_slopes_increase_left_to_right(self):
        rng = random.Random(10)
        from branchsep.props import rand_branch_poly
        for _ in range(40):
            g, _ = rand_branch_poly(rng, rng.randint(1, 4))
            slopes = [e.slope for e in build(g).edges]
            assert slopes == sorted(slopes)
