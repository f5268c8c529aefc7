"""Newton polygons of z-polynomials over a valued coefficient field.

The polygon of g is the convex hull of the points (i, nu(a_i)); only the
lower hull matters here.  Slopes live in the divisible hull of the exponent
group: plain rationals, or tuples of rationals compared lexicographically.
All hull computations are exact (cross products, no division except the
final slope values).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import NoEdges, NotAnEdge, UnknownOrder, ZeroPolynomial
from .scalars import Scalar
from .series import INF, Series, ValT, exp_add, exp_cmp, exp_div, exp_scale, exp_sub, val_cmp
from .zpoly import ZPoly, nu_z


def _cross_sign(p1, p2, p3) -> int:
    """Sign of the cross product (p2-p1) x (p3-p1); exponent-group exact."""
    (i1, v1), (i2, v2), (i3, v3) = p1, p2, p3
    lhs = exp_scale(exp_sub(v3, v1), i2 - i1)
    rhs = exp_scale(exp_sub(v2, v1), i3 - i1)
    return exp_cmp(lhs, rhs)


@dataclass(frozen=True)
class Edge:
    """Lower-hull segment from (i, vi) to (j, vj), i < j."""

    i: int
    vi: ValT
    j: int
    vj: ValT

    @property
    def slope(self):
        return exp_div(exp_sub(self.vj, self.vi), self.j - self.i)

    def contains(self, i: int, v: ValT) -> bool:
        if i < self.i or i > self.j:
            return False
        return _cross_sign((self.i, self.vi), (self.j, self.vj), (i, v)) == 0

    def __str__(self):
        return f"[({self.i}, {self.vi}) -> ({self.j}, {self.vj})] slope {self.slope}"


@dataclass(frozen=True)
class Polygon:
    """Finite point set with its lower convex hull."""

    points: tuple  # all (i, nu(a_i)) with finite value, sorted by i
    hull: tuple    # lower-hull vertex chain
    infinite: tuple = ()  # indices whose coefficient value is +infinity

    @property
    def edges(self) -> tuple:
        return tuple(Edge(a[0], a[1], b[0], b[1])
                     for a, b in zip(self.hull, self.hull[1:]))

    def min_slope_edge(self) -> Edge:
        es = self.edges
        if not es:
            raise NoEdges("polygon has a single vertex")
        return es[0]

    def __str__(self):
        verts = ", ".join(f"({i}, {v})" for i, v in self.hull)
        return f"Polygon[{verts}]"


def lower_hull(points: list) -> tuple:
    """Monotone chain; collinear interior points are dropped."""
    pts = sorted(points, key=lambda p: (p[0], _sort_val(p[1])))
    hull: list = []
    last_i = None
    for p in pts:
        if last_i == p[0]:
            continue  # one point per abscissa: keep the lower one
        while len(hull) >= 2 and _cross_sign(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
        last_i = p[0]
    return tuple(hull)


def _sort_val(v):
    return v if isinstance(v, tuple) else (v,)


def build(g: ZPoly, nu: Optional[Callable[[Series], ValT]] = None) -> Polygon:
    """Newton polygon of g under the coefficient valuation nu (default: order).

    Coefficients of value +infinity are omitted from the point set; unknown
    orders raise UnknownOrder.
    """
    if g.is_zero():
        raise ZeroPolynomial("polygon of the zero polynomial")
    nu = nu or (lambda s: s.order())
    points, infinite = [], []
    for i, a in enumerate(g.coeffs):
        if a.is_zero_exact():
            infinite.append(i)
            continue
        v = nu(a)
        if v is INF:
            infinite.append(i)
        else:
            points.append((i, v))
    if not points:
        raise UnknownOrder("every coefficient has infinite value")
    return Polygon(tuple(points), lower_hull(points), tuple(infinite))


def initial_form_edge(g: ZPoly, edge: Edge, nu=None) -> tuple[ZPoly, list[Scalar]]:
    """Terms of g sitting on the edge, and the one-variable collapse.

    Returns (in_L as a ZPoly of leading monomials, residual coefficients
    [c_{j0}..c_{j1}] of the collapsed polynomial in u = z / t^(-slope);
    index k holds the coefficient of u^(j0+k)).
    """
    poly = build(g, nu)
    if edge not in poly.edges:
        raise NotAnEdge(f"{edge} is not an edge of {poly}")
    span = edge.j - edge.i
    collapsed = [Scalar() for _ in range(span + 1)]
    monos = [Series.zero(g.arity()) for _ in range(len(g.coeffs))]
    for i, v in poly.points:
        if edge.contains(i, v):
            e, c = g.coeffs[i].leading()
            monos[i] = Series.t_power(e, c, g.coeffs[i].arity)
            collapsed[i - edge.i] = c
    return ZPoly.make(monos), collapsed


def min_slope_side(p: Polygon) -> Edge:
    """The lower-hull edge of smallest slope (the leftmost one)."""
    return p.min_slope_edge()


def deltanul_check(g: ZPoly, nu_of_z: ValT, nu=None, branch_values=None) -> bool:
    """Whether the constant term strictly dominates (initial form degree 0).

    When the values of the linear factors against the same valuation are
    supplied, the equivalent criterion -- nu(z) exceeding every factor value
    -- is asserted against the primary computation.
    """
    form = nu_z(g, nu_of_z, nu)
    result = form.delta == 0
    if branch_values is not None:
        alt = all(val_cmp(nu_of_z, bv) > 0 for bv in branch_values)
        assert alt == result, (
            f"initial-degree criterion ({result}) disagrees with the factor-value "
            f"criterion ({alt}); this indicates a library bug")
    return result


def minkowski_sum(h1: tuple, h2: tuple) -> tuple:
    """Minkowski sum of two lower-hull chains (edge-vector merge)."""
    def vectors(h):
        return [(b[0] - a[0], exp_sub(b[1], a[1])) for a, b in zip(h, h[1:])]

    start = (h1[0][0] + h2[0][0], exp_add(h1[0][1], h2[0][1]))
    vecs = vectors(h1) + vectors(h2)
    vecs.sort(key=_slope_key)
    chain = [start]
    for dx, dv in vecs:
        i, v = chain[-1]
        chain.append((i + dx, exp_add(v, dv)))
    return lower_hull(chain)


def _slope_key(vec):
    dx, dv = vec
    s = exp_div(dv, dx)
    return (s,) if not isinstance(s, tuple) else s
