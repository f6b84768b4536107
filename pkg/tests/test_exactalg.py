"""Tests for the exact arithmetic substrate."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hullmaps.exactalg import (
    GSeries,
    Poly,
    lagrange_interpolate,
    series_arith,
    series_compose,
    series_newton_root,
    series_reversion,
    series_sqrt,
)

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=12)


def gseries(order=6, var="x"):
    return st.lists(rationals, min_size=order + 1, max_size=order + 1).map(
        lambda cs: GSeries.of(var, cs)
    )


# -- basic arithmetic -------------------------------------------------------


def test_difference_of_squares():
    one_plus = GSeries.of("g", [1, 1, 0, 0])
    one_minus = GSeries.of("g", [1, -1, 0, 0])
    assert series_arith(one_plus, one_minus, "mul") == GSeries.of("g", [1, 0, -1, 0])


def test_geometric_series():
    one = GSeries.one("g", 3)
    denom = GSeries.of("g", [1, -1, 0, 0])
    assert series_arith(one, denom, "div") == GSeries.of("g", [1, 1, 1, 1])


def test_catalan_like_fixed_point():
    # (1 - sqrt(1-12g)) / (6g) = 1 + 3g + 18g^2 + 135g^3 + ...,
    # the fixed point of R = 1 + 3 g R^2 starting from R = 1.
    order = 6
    g = GSeries.gen("g", order + 2)
    root = series_sqrt(GSeries.one("g", order + 2) - 12 * g)
    series = (GSeries.one("g", order + 2) - root) / (6 * g)

    fixed = GSeries.one("g", order)
    for _ in range(order + 1):
        fixed = (GSeries.one("g", order) + 3 * g.truncate(order) * fixed * fixed).truncate(order)
    assert series.truncate(order) == fixed
    assert [series.coeff(n) for n in range(4)] == [1, 3, 18, 135]


def test_variable_mismatch_rejected():
    with pytest.raises(ValueError):
        GSeries.of("g", [1, 2]) + GSeries.of("t", [1, 2])


def test_division_by_zero_series():
    with pytest.raises(ZeroDivisionError):
        GSeries.of("g", [1, 1]) / GSeries.of("g", [0, 0])


def test_min_order_discipline():
    a = GSeries.of("g", [1, 1, 1, 1, 1])  # order 4
    b = GSeries.of("g", [1, 2, 3])  # order 2
    assert (a + b).order == 2
    assert (a * b).order == 2
    # an exact monomial shift keeps absolute precision
    assert a.shift(2).order == 6


@given(gseries(), gseries(), gseries())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


# -- reversion --------------------------------------------------------------


def test_reversion_identity():
    f = GSeries.gen("x", 5)
    assert series_reversion(f) == GSeries.gen("x", 5)


def _quad_parametrization(order):
    x = GSeries.gen("x", order)
    one = GSeries.one("x", order)
    num = x * (one + x + x * x)
    den = (one + 4 * x + x * x) ** 2
    return num / den


def test_reversion_quadrangulation_parametrization():
    h = series_reversion(_quad_parametrization(3))
    assert h.coeff(1) == 1
    assert h.coeff(2) == 7


def _tri_parametrization(order):
    # t = x (1+x) / (1+10x+x^2)^{3/2}
    x = GSeries.gen("x", order)
    one = GSeries.one("x", order)
    s = series_sqrt(one + 10 * x + x * x)
    return x * (one + x) / (s ** 3)


def test_reversion_composition_check_triangulation():
    f = _tri_parametrization(8)
    h = series_reversion(f)
    assert series_compose(f, h) == GSeries.gen("x", 8)


@given(st.lists(rationals, min_size=5, max_size=5), st.sampled_from([1, 2, -1, Q(1, 3)]))
@settings(max_examples=40, deadline=None)
def test_reversion_round_trip_property(tail, lead):
    f = GSeries.of("x", [0, lead] + list(tail))
    h = series_reversion(f)
    assert series_compose(f, h) == GSeries.gen("x", f.order)


def test_reversion_rejects_zero_linear_term():
    with pytest.raises(ValueError):
        series_reversion(GSeries.of("x", [0, 0, 1, 2]))


# -- Newton root finding ----------------------------------------------------


def test_newton_root_binomial_branches():
    order = 4
    one_plus_x = GSeries.of("x", [1, 1, 0, 0, 0])
    F = [-one_plus_x, GSeries.zero("x", order), GSeries.one("x", order)]  # y^2 - (1+x)
    plus = series_newton_root(F, 1)
    minus = series_newton_root(F, -1)
    assert [plus.coeff(i) for i in range(3)] == [1, Q(1, 2), Q(-1, 8)]
    assert [minus.coeff(i) for i in range(3)] == [-1, Q(-1, 2), Q(1, 8)]


def test_newton_root_rejects_double_root():
    order = 4
    # y^2 = 0 at x=0 has a double root at y0=0
    F = [GSeries.zero("x", order), GSeries.zero("x", order), GSeries.one("x", order)]
    with pytest.raises(ValueError):
        series_newton_root(F, 0)


@given(
    st.lists(rationals, min_size=4, max_size=4),
    st.lists(rationals, min_size=4, max_size=4),
    rationals.filter(lambda q: q != 0),
)
@settings(max_examples=40, deadline=None)
def test_newton_root_residual_property(b_tail, c_tail, y0):
    # Build F(y, x) = (y - y0 - x*b(x)) * (y - y0 + 1 + x*c(x)): a guaranteed
    # simple root at y0 with a second root bounded away from it.
    order = 12
    var = "x"

    def extend(cs):
        full = [Q(0)] + list(cs)
        full += [Q(0)] * (order + 1 - len(full))
        return GSeries.of(var, full)

    r1 = extend(b_tail) + GSeries.of(var, [y0] + [0] * order)
    r2 = extend(c_tail) + GSeries.of(var, [y0 - 1] + [0] * order)
    F = [r1 * r2, -(r1 + r2), GSeries.one(var, order)]
    y = series_newton_root(F, y0)
    residual = (F[0] + F[1] * y + F[2] * y * y).truncate(order)
    assert residual.is_zero()


# -- Lagrange interpolation -------------------------------------------------


def test_interpolate_constant():
    p = lagrange_interpolate([(0, 1), (1, 1), (2, 1)], 2)
    assert p == Poly.of([1])


def test_interpolate_parabola():
    p = lagrange_interpolate([(0, 0), (1, 1), (2, 4)], 2)
    assert p == Poly.of([0, 0, 1])


def test_interpolate_requires_enough_points():
    with pytest.raises(ValueError):
        lagrange_interpolate([(0, 0), (1, 1)], 2)
    with pytest.raises(ValueError):
        lagrange_interpolate([(0, 0), (0, 1), (1, 1)], 2)


@given(st.lists(rationals, min_size=7, max_size=7))
@settings(max_examples=40, deadline=None)
def test_interpolate_round_trip(coeffs):
    p = Poly.of(coeffs)
    pts = [(Q(k), p(Q(k))) for k in range(7)]
    assert lagrange_interpolate(pts, 6) == p


# -- canonical form ---------------------------------------------------------


@given(rationals, rationals.filter(lambda q: q != 0))
def test_rational_canonical_form(a, b):
    q = a / b
    assert q.denominator > 0
    assert Q(q.numerator, q.denominator) == q
