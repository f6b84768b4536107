"""Tests for the numerical oracles (inverse Laplace, quadrature, statistics)."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hullmaps.asympt import pinf_density
from hullmaps.numlab import (
    TRANSFORM_PAIRS,
    chi_square_gof,
    compare_to_law,
    integrate,
    ks_pvalue,
    regularized_gamma_q,
    talbot_ilt,
)


def _ell_grid(n=60):
    return [0.05 + (10 - 0.05) * i / (n - 1) for i in range(n)]


def test_transform_pairs_contract():
    for pair in TRANSFORM_PAIRS:
        for ell in _ell_grid():
            got = talbot_ilt(pair.forward, ell)
            want = pair.inverse(ell)
            assert abs(got - want) <= 1e-8 * abs(want), (pair.label, ell)


def test_talbot_rejects_nonpositive_point():
    with pytest.raises(ValueError):
        talbot_ilt(lambda s: 1 / s, 0.0)


@given(
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=-3, max_value=3),
    st.sampled_from([0.1, 0.7, 2.3, 8.0]),
)
@settings(max_examples=30, deadline=None)
def test_talbot_linearity(a, b, ell):
    f = TRANSFORM_PAIRS[4]  # sigma^-3 bracket
    g = TRANSFORM_PAIRS[8]  # sigma^1 bracket
    combo = talbot_ilt(lambda s: a * f.forward(s) + b * g.forward(s), ell)
    parts = a * talbot_ilt(f.forward, ell) + b * talbot_ilt(g.forward, ell)
    scale = abs(a * f.inverse(ell)) + abs(b * g.inverse(ell)) + 1e-12
    assert abs(combo - parts) <= 1e-8 * scale


def test_integrate_exponential():
    assert abs(integrate(lambda x: math.exp(-x), 0, math.inf, tol=1e-12) - 1) < 1e-12


def test_integrate_density_normalization():
    val = integrate(lambda L: pinf_density(L, 1 / 3), 0, math.inf, tol=1e-12)
    assert abs(val - 1) < 1e-10


def test_integrate_gamma_moment():
    # E[L] for the c=1 law equals Gamma(5/2)/Gamma(3/2) = 3/2
    val = integrate(lambda L: L * (2 / math.sqrt(math.pi)) * math.sqrt(L) * math.exp(-L), 0, math.inf, tol=1e-12)
    assert abs(val - 1.5) < 1e-10


def test_integrate_additive_over_splits():
    f = lambda x: math.sin(3 * x) ** 2 * math.exp(-x / 2)
    whole = integrate(f, 0.0, 6.0, tol=1e-12)
    parts = integrate(f, 0.0, 2.5, tol=1e-12) + integrate(f, 2.5, 6.0, tol=1e-12)
    assert abs(whole - parts) < 1e-11


def test_integrate_depth_cap():
    with pytest.raises(ArithmeticError):
        integrate(lambda x: abs(x - math.pi / 7) ** -0.999, 0.0, 1.0, tol=1e-12, max_depth=6)


def _inverse_cdf_sample(c, n):
    # tabulated CDF of the limiting density + monotone interpolation
    grid = [20 * c * i / 4000 for i in range(4001)]
    cdf = [0.0]
    for lo, hi in zip(grid, grid[1:]):
        cdf.append(cdf[-1] + integrate(lambda L: pinf_density(L, c), lo, hi, tol=1e-10))
    out = []
    j = 0
    for i in range(n):
        target = (i + 0.5) / n
        while j < 4000 and cdf[j + 1] < target:
            j += 1
        t0, t1 = cdf[j], cdf[j + 1]
        frac = (target - t0) / (t1 - t0) if t1 > t0 else 0.5
        out.append(grid[j] + frac * (grid[j + 1] - grid[j]))
    return out


def test_compare_to_law_self_consistency():
    c = 1 / 3
    sample = _inverse_cdf_sample(c, 100_000)
    report = compare_to_law(sample, lambda L: pinf_density(L, c))
    assert report.ks_pvalue > 0.001
    assert abs(report.mean - 1.5 * c) < 3 * report.mean_se + 2e-3


def test_compare_to_law_half_batches_agree():
    c = 1 / 3
    sample = _inverse_cdf_sample(c, 20_000)
    first = compare_to_law(sample[0::2], lambda L: pinf_density(L, c))
    second = compare_to_law(sample[1::2], lambda L: pinf_density(L, c))
    se = math.hypot(first.mean_se, second.mean_se)
    assert abs(first.mean - second.mean) <= 3 * se + 1e-9


def test_compare_to_law_chi_square_classes():
    c = 1 / 3
    sample = _inverse_cdf_sample(c, 20_000)
    report = compare_to_law(sample, lambda L: pinf_density(L, c), class_edges=[0.1, 0.3, 0.6, 1.0, 1.6])
    assert report.chi2_pvalue is not None and report.chi2_pvalue > 0.001


def test_regularized_gamma_against_erfc():
    # Q(1/2, x) = erfc(sqrt(x))
    for x in (0.1, 0.5, 1.0, 3.0, 10.0):
        assert abs(regularized_gamma_q(0.5, x) - math.erfc(math.sqrt(x))) < 1e-12


def test_chi_square_exact_fit():
    stat, dof, p = chi_square_gof([250, 250, 250, 250], [0.25] * 4)
    assert stat == 0 and dof == 3 and abs(p - 1.0) < 1e-12


def test_ks_pvalue_limits():
    assert ks_pvalue(1e-6, 1000) > 0.999
    assert ks_pvalue(0.5, 1000) < 1e-6
