"""Tests for the perimeter-weighted generating functions."""

from fractions import Fraction as Q

import pytest

from hullmaps.exactalg import GSeries
from hullmaps.genfun import (
    QUAD,
    TRI,
    appendix_b_check,
    lambda_double,
    lambda_single,
    r_series,
    t_series,
    x_of_g,
    z_double_eval,
    z_single,
)
from hullmaps import refdata


# -- parametrization --------------------------------------------------------


def test_x_of_g_low_order():
    h = x_of_g(QUAD, 2)
    assert h.coeff(1) == 1 and h.coeff(2) == 7


def test_quad_parametrization_identity():
    order = 10
    h = x_of_g(QUAD, order)
    x = GSeries("g", h.coeffs, h.valuation)
    one = GSeries.one("g", order)
    g = GSeries.gen("g", order)
    lhs = x * (one + x + x * x) / ((one + 4 * x + x * x) ** 2)
    assert (lhs - g).is_zero()


def test_tri_parametrization_identity():
    from hullmaps.exactalg import series_sqrt

    order = 10
    h = x_of_g(TRI, order)
    x = GSeries("t", h.coeffs, h.valuation)
    one = GSeries.one("t", order)
    t = GSeries.gen("t", order)
    s = series_sqrt(one + 10 * x + x * x)
    lhs = x * (one + x) / (s ** 3)
    assert (lhs - t).is_zero()


# -- slice series -----------------------------------------------------------


def test_quad_series_at_zero_weight():
    for k in (1, 2, 3, 5):
        t = t_series(QUAD, k, 6)
        r = r_series(QUAD, k, 6)
        assert t.coeff(0) == 0
        assert r.coeff(0) == 1


def test_r_infinity_fixed_point():
    # for k > order the finite-k corrections are invisible: R_k = R exactly
    r = r_series(QUAD, 9, 8)
    assert [r.coeff(i) for i in range(4)] == [1, 3, 18, 135]


def test_weight_one_deformation_is_identity():
    for family, ds in ((QUAD, (2, 3, 4)), (TRI, (1, 2, 3))):
        order = 8
        for d in ds:
            lam = lambda_single(family, 1, d, order if family.is_quad else order // 2)
            for k in range(d + 1, 7):
                assert t_series(family, k, order, lam) == t_series(family, k, order)
                assert r_series(family, k, order, lam) == r_series(family, k, order)


def test_tri_t_series_is_odd_in_g():
    t = t_series(TRI, 3, 9)
    assert all(t.coeff(n) == 0 for n in range(0, t.order + 1, 2))


# -- deformation branches ---------------------------------------------------


def test_lambda_at_weight_one_is_constant():
    for family, d in ((QUAD, 4), (TRI, 3)):
        lam = lambda_single(family, 1, d, 8)
        trimmed = lam.laurent().trim()
        assert trimmed.valuation == 0
        assert trimmed == GSeries.of("x", [1] + [0] * (trimmed.order))


def test_lambda_quad_constant_term():
    for alpha in (Q(1, 2), Q(1, 3), Q(3, 4)):
        lam = lambda_single(QUAD, alpha, 3, 6)
        assert lam.product.coeff(0) == 1 - alpha * alpha
        tri = lambda_single(TRI, alpha, 3, 6)
        assert tri.product.coeff(0) == 1 - alpha


def _residual_single(family, alpha, d, order):
    from hullmaps.genfun import _rho_undeformed

    lam = lambda_single(family, alpha, d, order)
    js = (-1, 4, 1, 2) if family.is_quad else (0, 3, 1, 2)
    f = [lam.factor(d + j).truncate(order) for j in js]
    rho = _rho_undeformed(family, d, order)
    weight = alpha * alpha if family.is_quad else alpha
    return f[0] * f[1] - weight * rho * (f[2] * f[3])


def test_lambda_defining_identity():
    for d in (2, 3, 4):
        assert _residual_single(QUAD, Q(1, 2), d, 12).is_zero()
    for d in (1, 2, 4):
        assert _residual_single(TRI, Q(1, 2), d, 12).is_zero()


def test_lambda_double_reduces_to_single():
    for family in (QUAD, TRI):
        d1, d2 = (2, 4) if family.is_quad else (1, 3)
        single = lambda_single(family, Q(1, 2), d1, 10)
        double = lambda_double(family, Q(1, 2), 1, d1, d2, 10)
        shift = double.dshift - single.dshift
        assert double.product == single.product.shift(shift).truncate(double.product.order)


def test_lambda_double_unit_weights():
    lam = lambda_double(QUAD, 1, 1, 2, 3, 8)
    assert lam.laurent().trim() == GSeries.of("x", [1] + [0] * 7).trim()


def test_lambda_double_defining_identity():
    from hullmaps.genfun import _branch_from_rhs  # noqa: F401  (same route)

    family = QUAD
    a1, a2, d1, d2, order = Q(1, 2), Q(1, 3), 2, 3, 10
    inner = lambda_single(family, a1, d1, order)
    outer = lambda_double(family, a1, a2, d1, d2, order)
    js = (-1, 4, 1, 2)
    fo = [outer.factor(d2 + j).truncate(order) for j in js]
    fi = [inner.factor(d2 + j).truncate(order) for j in js]
    lhs = fo[0] * fo[1] * (fi[2] * fi[3])
    rhs = a2 * a2 * fi[0] * fi[1] * (fo[2] * fo[3])
    assert (lhs - rhs).is_zero()


def test_lambda_branch_continuity_in_alpha():
    # successive first differences of each stored coefficient stay comparable
    order = 6
    grid = [Q(n, 10) for n in range(2, 11)]
    for family, d in ((QUAD, 3), (TRI, 2)):
        rows = [lambda_single(family, a, d, order).product for a in grid]
        for j in range(order + 1):
            vals = [float(r.coeff(j)) for r in rows]
            diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
            scale = max(diffs) or 1.0
            assert all(dd <= 4 * scale + 1e-12 for dd in diffs)


# -- weighted tables --------------------------------------------------------


def test_z_quad_2_3_low_order():
    tab = z_single(QUAD, 2, 3, 3)
    assert tab.as_dict() == {2: {2: 1}, 3: {2: 15}}


def test_z_tri_1_2_g4():
    tab = z_single(TRI, 1, 2, 4)
    assert tab.as_dict()[4] == {2: 1, 1: 14}


def test_two_point_function_independent_of_d():
    expected = [1, 22, 343, 4676]
    for d in (2, 3):
        tab = z_single(QUAD, d, 4, 6)
        sums = [sum(poly.coeffs) for _, poly in tab.rows]
        assert [int(s) for s in sums] == expected


def test_z_table_invariants():
    for family, d, k, order in ((QUAD, 3, 4, 6), (TRI, 2, 3, 8)):
        tab = z_single(family, d, k, order)
        for n, poly in tab.rows:
            for l, c in enumerate(poly.coeffs):
                assert c.denominator == 1 and c >= 0
                if family.is_quad and c != 0:
                    assert l % 2 == 0, "quadrangulation perimeters are even"


def test_z_double_marginalizes_to_single():
    for family, (d1, d2, k) in ((QUAD, (2, 3, 4)), (TRI, (1, 2, 3))):
        order = 6 if family.is_quad else 8
        a = Q(1, 2)
        table_d1 = z_single(family, d1, k, order)
        table_d2 = z_single(family, d2, k, order)
        right_unit = z_double_eval(family, a, 1, d1, d2, k, order)
        left_unit = z_double_eval(family, 1, a, d1, d2, k, order)
        for n, poly in table_d1.rows:
            idx = n // family.faces_per_unit
            assert right_unit.coeff(idx) == poly(a)
        for n, poly in table_d2.rows:
            idx = n // family.faces_per_unit
            assert left_unit.coeff(idx) == poly(a)


def test_z_double_equal_distances_merge_weights():
    a1, a2 = Q(1, 2), Q(2, 3)
    table = z_single(QUAD, 2, 4, 6)
    both = z_double_eval(QUAD, a1, a2, 2, 2, 4, 6)
    for n, poly in table.rows:
        assert both.coeff(n) == poly(a1 * a2)


def test_z_range_guards():
    with pytest.raises(ValueError):
        z_single(QUAD, 1, 3, 4)
    with pytest.raises(ValueError):
        z_single(QUAD, 3, 3, 4)
    with pytest.raises(ValueError):
        z_single(TRI, 0, 2, 4)
    with pytest.raises(ValueError):
        z_single(TRI, 2, 2, 4)


# -- reference tables -------------------------------------------------------


def test_reference_check_full():
    report = appendix_b_check()
    assert report.ok, report.mismatches
    assert report.tables_checked == 12
    assert report.summary() == "12/12 tables match"


def test_reference_check_detects_perturbation():
    ref = {
        "quad": {(2, 3): {n: dict(row) for n, row in refdata.QUAD_TABLES[(2, 3)].items()}},
        "tri": {},
    }
    ref["quad"][(2, 3)][4][2] += 1
    report = appendix_b_check(ref)
    assert len(report.mismatches) == 1
    kind, d, k, n, l, expected, computed = report.mismatches[0]
    assert (d, k, n, l) == (2, 3, 4, 2)
    assert expected == computed + 1


def test_reference_alpha4_g4_coefficient():
    assert refdata.QUAD_TABLES[(2, 3)][4][4] == 1


# -- numeric consistency of the deformed family -----------------------------


def _tk_numeric(x, lam, k):
    T = x * (1 + 4 * x + x * x) / (1 + x + x * x) ** 2
    return (
        T
        * (1 - lam * x ** (k - 1))
        * (1 - lam * x ** (k + 4))
        / ((1 - lam * x ** (k + 1)) * (1 - lam * x ** (k + 2)))
    )


def _solve_lam_matching(x, k2, target):
    # T_{k2}(lam) = target is quadratic in lam; take the branch stable under
    # lam -> x^-(2 k2 + 3) / lam (the other one is the rejected branch)
    T = x * (1 + 4 * x + x * x) / (1 + x + x * x) ** 2
    V = target / T
    a, b = x ** (k2 - 1), x ** (k2 + 4)
    c, d = x ** (k2 + 1), x ** (k2 + 2)
    A = a * b - V * c * d
    B = -(a + b) + V * (c + d)
    C = 1 - V
    disc = (B * B - 4 * A * C) ** 0.5
    roots = [(-B + disc) / (2 * A), (-B - disc) / (2 * A)]
    cutoff = x ** (-(2 * k2 + 3) / 2)
    good = [r for r in roots if abs(r) < cutoff]
    assert len(good) == 1
    return good[0]


def test_deformed_family_semigroup_consistency():
    x = 0.4
    k, k2 = 5, 7
    for lam1 in (0.95, 1.0, 1.05):
        lam2 = _solve_lam_matching(x, k2 - 1, _tk_numeric(x, lam1, k - 1))
        lhs = _tk_numeric(x, lam1, k)
        rhs = _tk_numeric(x, lam2, k2)
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)
