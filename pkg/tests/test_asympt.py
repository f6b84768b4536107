"""Tests for the closed-form laws and scaling-limit evaluators."""

import math

import pytest

from hullmaps import asympt
from hullmaps.asympt import (
    F_of,
    cor,
    einf_L,
    ek_L,
    ek_joint_largek,
    erfcx,
    joint_density,
    joint_laplace,
    ktau_from_zeta,
    ktau_laplace,
    lambda_scaling_double,
    lambda_scaling_single,
    lav,
    lav_cond,
    pi_poly,
    pinf_density,
    pinf_laplace,
    profile,
    ptilde1_density,
    ptilde_density,
    pu_density,
    sigma_of,
    winf,
    wk_largek,
    zeta_scaling,
)
from hullmaps.genfun import QUAD, TRI
from hullmaps.numlab import integrate, talbot_ilt

C_QUAD = 1 / 3
C_TRI = 1 / 2


# -- basic single-distance law ------------------------------------------------


def test_pinf_laplace_normalization():
    assert pinf_laplace(0.0, C_QUAD) == 1.0


def test_pinf_mean():
    for c in (C_QUAD, C_TRI):
        mean = integrate(lambda L: L * pinf_density(L, c), 0, math.inf, tol=1e-12)
        assert abs(mean - 1.5 * c) < 1e-10


def test_pinf_duality_at_point():
    got = talbot_ilt(lambda s: pinf_laplace(s, C_QUAD), 0.3)
    assert abs(got - pinf_density(0.3, C_QUAD)) < 1e-8


# -- finite-fraction law -------------------------------------------------------


def test_F_normalization_at_tau_zero():
    for u in (0.25, 0.5, 0.75):
        val = F_of(sigma_of(0.0, u, C_QUAD), u)
        assert abs(val - 1.0) < 1e-12


def test_F_constant_term_matches_reference_polynomial():
    for u in (0.2, 0.4, 0.55, 0.8):
        expected = (
            512 * u ** 6 - 3012 * u ** 5 + 7518 * u ** 4 - 10020 * u ** 3
            + 7515 * u ** 2 - 3006 * u + 501
        ) / (64 * u ** 3)
        assert abs(F_of(0.0, u) - expected) < 1e-11 * abs(expected)


def test_F_closed_form_and_taylor_agree_at_switch():
    for u in (0.3, 0.5, 0.7):
        for sig in (0.081, 0.12, -0.081):
            direct = F_of(sig, u)
            taylor = asympt._F_taylor(sig, u)
            assert abs(direct - taylor) < 1e-9 * max(1.0, abs(direct))


def test_ktau_small_u_matches_infinite_target_limit():
    # the limit is approached linearly in u
    want = pinf_laplace(1.0, C_QUAD)
    gaps = [abs(ktau_laplace(1.0, u, C_QUAD) - want) for u in (1e-3, 1e-4, 1e-5)]
    assert gaps[0] < 1e-3
    assert gaps[2] < 1e-5
    assert 5 < gaps[0] / gaps[1] < 20 and 5 < gaps[1] / gaps[2] < 20


def test_pu_density_small_u_limit():
    for L in (0.2, 0.8, 2.0):
        want = pinf_density(L, C_QUAD)
        g4 = abs(pu_density(L, 1e-4, C_QUAD) - want)
        g5 = abs(pu_density(L, 1e-5, C_QUAD) - want)
        assert g5 < 1e-4 and g5 < g4


def test_pu_density_normalization():
    for u in (1 / 8, 1 / 4, 1 / 3, 1 / 2, 2 / 3):
        total = integrate(lambda L: pu_density(L, u, C_QUAD), 0, math.inf, tol=1e-10)
        assert abs(total - 1.0) < 1e-8, u


def test_pu_density_mean():
    for u in (1 / 4, 1 / 2, 2 / 3):
        mean = integrate(lambda L: L * pu_density(L, u, C_QUAD), 0, math.inf, tol=1e-10)
        assert abs(mean - lav(u, C_QUAD)) < 1e-7


def test_duality_ktau_vs_pu_density():
    # pointwise agreement of the Talbot-inverted transform with the closed form
    for c in (C_QUAD, C_TRI):
        for u in (0.25, 0.5, 0.75):
            for i in range(20):
                L = 0.05 + (5 - 0.05) * i / 19
                got = talbot_ilt(lambda s: ktau_laplace(s, u, c), L)
                want = pu_density(L, u, c)
                assert abs(got - want) < 1e-7, (c, u, L)


def test_ptilde_is_rescaled_pu():
    u, c = 0.6, C_QUAD
    b = (1 - u) ** 2 / u ** 2
    for R in (0.1, 0.5, 2.0):
        assert abs(ptilde_density(R, u, c) - b * pu_density(b * R, u, c)) < 1e-14


def test_ptilde1_normalization_with_tail():
    # the u -> 1 law has a fat R^(-3/2) tail: integrate to X and add the
    # asymptotic tail mass 3 sqrt(c/pi) X^(-1/2) - 5 c sqrt(c/pi) X^(-3/2)
    for c in (C_QUAD, C_TRI):
        X = 1e4
        head = integrate(lambda R: ptilde1_density(R, c), 0, X, tol=1e-10)
        tail = 3 * math.sqrt(c / math.pi) / math.sqrt(X) - 5 * c * math.sqrt(c / math.pi) * X ** -1.5
        assert abs(head + tail - 1.0) < 1e-8


def test_ptilde1_is_pointwise_limit():
    c = C_QUAD
    for R in (0.05, 0.3, 1.0):
        near = ptilde_density(R, 1 - 1e-4, c)
        assert abs(near - ptilde1_density(R, c)) < 2e-3


# -- joint law -----------------------------------------------------------------


def test_joint_laplace_marginal():
    for c in (C_QUAD, C_TRI):
        for tau in (0.0, 0.7, 2.0):
            assert abs(joint_laplace(tau, 0.0, 2.0, c) - pinf_laplace(tau, c)) < 1e-13


def test_joint_laplace_mixed_moment():
    # E[L(d) L(vd)] from the mixed second derivative, Richardson-extrapolated
    for c in (C_QUAD, C_TRI):
        for v in (1.5, 2.0, 4.0):
            def mixed(h):
                vals = (
                    joint_laplace(h, h, v, c)
                    - joint_laplace(h, -h, v, c)
                    - joint_laplace(-h, h, v, c)
                    + joint_laplace(-h, -h, v, c)
                )
                return vals / (4 * h * h)

            d1, d2 = mixed(0.02), mixed(0.01)
            est = (4 * d2 - d1) / 3
            want = 0.75 * c * c * (3 + 2 / v)
            assert abs(est - want) < 1e-5 * want


def test_joint_laplace_factorizes_at_large_v():
    # asymptotic independence, approached at rate O(1/v)
    c = C_QUAD
    t1, t2 = 1.0, 2.0
    want = pinf_laplace(t1, c) * pinf_laplace(t2, c)
    assert abs(joint_laplace(t1, t2, 1e5, c) - want) < 1e-6
    assert abs(joint_laplace(t1, t2, 1e7, c) - want) < 1e-8


def test_pi_polynomials_reference_values():
    assert pi_poly(0).poly.coeffs == (0, 1)
    assert pi_poly(1).poly.coeffs == (0, 3, 0, -1)
    assert pi_poly(2).poly.coeffs == (0, 12, 0, -9, 0, 1)
    assert pi_poly(3).poly.coeffs == (0, 60, 0, -75, 0, 18, 0, -1)


def test_pi_polynomials_structure():
    for n in (4, 7, 10):
        p = pi_poly(n).poly
        assert p.degree == 2 * n + 1
        assert all(c == 0 for c in p.coeffs[0::2])  # odd parity, pi_n(0) = 0
        assert all(c.denominator == 1 for c in p.coeffs)


def _l2_cap(v, c, L1=0.0, budget=60.0):
    # far enough for both the bare Gaussian factor and the conditional scale
    return max(budget * c * (v - 1) ** 2 / (v * v), 14.0 * lav_cond(v, L1, c))


def test_joint_density_marginalizes_to_pinf():
    for c in (C_QUAD, C_TRI):
        for v in (1.5, 2.0, 4.0):
            for L1 in (0.3, 1.0):
                cap = _l2_cap(v, c, L1)
                assert joint_density(L1, cap, v, c) < 1e-8
                marg = integrate(lambda L2: joint_density(L1, L2, v, c), 0, cap, tol=1e-9)
                assert abs(marg - pinf_density(L1, c)) < 1e-6, (c, v, L1)


def test_joint_density_series_matches_nested_inversion_oracle():
    # dual-route check: the polynomial series against the independent 1-D
    # inversion of the closed slice transform, inside the series' domain
    for (L1, L2, v, c) in (
        (0.3, 0.2, 2.0, C_QUAD),
        (0.5, 0.05, 1.5, C_QUAD),
        (1.0, 0.4, 4.0, C_TRI),
        (0.2, 1.0, 2.0, C_TRI),
        (1.0, 0.75, 2.0, C_QUAD),
    ):
        a = joint_density(L1, L2, v, c, method="series")
        b = joint_density(L1, L2, v, c, method="ilt")
        assert abs(a - b) <= 1e-7 * max(abs(b), 1e-3), (L1, L2, v, c, a, b)


def test_joint_density_series_raises_outside_double_domain():
    with pytest.raises(ArithmeticError):
        # y = 12 with L2 near the conditional mean: cancellation too deep
        joint_density(1.0, 1.0, 1.5, C_QUAD, method="series")
    # the default route falls back to the inversion and stays sane
    val = joint_density(1.0, 1.0, 1.5, C_QUAD)
    ilt = joint_density(1.0, 1.0, 1.5, C_QUAD, method="ilt")
    assert val == ilt
    assert 0 < val < 1


def test_joint_density_conditional_mean():
    L1, v, c = 0.5, 2.0, C_QUAD
    cap = _l2_cap(v, c, L1, budget=80.0)
    num = integrate(lambda L2: L2 * joint_density(L1, L2, v, c), 0, cap, tol=1e-10)
    den = integrate(lambda L2: joint_density(L1, L2, v, c), 0, cap, tol=1e-10)
    assert abs(num / den - lav_cond(v, L1, c)) < 1e-6


def test_joint_density_first_moment_truncation():
    # only the first 3 series terms contribute to the first L2 moment
    L1, v, c = 0.7, 2.0, C_QUAD
    cap = _l2_cap(v, c, L1, budget=80.0)
    full = integrate(lambda L2: L2 * joint_density(L1, L2, v, c), 0, cap, tol=1e-11)
    cut = integrate(lambda L2: L2 * joint_density(L1, L2, v, c, max_terms=3), 0, cap, tol=1e-11)
    assert abs(full - cut) < 1e-10


# -- means, correlations, profiles ----------------------------------------------


def test_cor_values():
    assert abs(cor(1.0) - 2 / 3) < 1e-15
    assert abs(cor(2.0) - 1 / 3) < 1e-15
    assert abs(cor(0.5) - cor(2.0)) < 1e-15


def test_lav_endpoints():
    assert abs(lav(0.0, C_QUAD) - 1.5 * C_QUAD) < 1e-15
    assert abs(lav(1.0, C_QUAD)) < 1e-15


def test_lav_cond_boundary():
    for L1 in (0.0, 0.4, 2.0):
        assert abs(lav_cond(1.0, L1, C_QUAD) - L1) < 1e-12
    # far-separation limit forgets the conditioning: 3c/2
    assert abs(lav_cond(1e8, 0.4, C_QUAD) - 1.5 * C_QUAD) < 1e-6


def test_profile_is_global_rescaling():
    for u in (0.2, 0.5, 0.9):
        assert abs(profile(u, C_QUAD) - u * u * lav(u, C_QUAD)) < 1e-15


# -- fixed distance, far target --------------------------------------------------


def test_winf_normalization():
    for family, ds in ((QUAD, (2, 3, 7)), (TRI, (1, 2, 7))):
        for d in ds:
            assert abs(winf(family, 1.0, d) - 1.0) < 1e-12


def test_winf_derivative_matches_einf():
    h = 1e-6
    for family, ds in ((QUAD, (2, 3, 5)), (TRI, (1, 3, 5))):
        for d in ds:
            # one-sided stencil: alpha must stay in (0, 1]
            der = (3 * winf(family, 1.0, d) - 4 * winf(family, 1.0 - h, d) + winf(family, 1.0 - 2 * h, d)) / (2 * h)
            want = einf_L(family, d)
            assert abs(der - want) < 1e-5 * want


def test_einf_values():
    assert abs(einf_L(TRI, 1) - 12 / 5) < 1e-14
    assert abs(einf_L(QUAD, 2) - 2 * 9 * 20 / (3 * 5 * 7)) < 1e-12


def test_ek_limits_to_einf():
    # finite-k corrections are O(1/k): 1e-6 relative needs k = 1e7
    for family in (QUAD, TRI):
        got = ek_L(family, 3, 10 ** 7)
        want = einf_L(family, 3)
        assert abs(got - want) < 1e-6 * want


def test_ek_finite_fraction_scaling():
    k = 10 ** 4
    u = 0.5
    d = int(u * k)
    for family in (QUAD, TRI):
        got = ek_L(family, d, k) / (u * k) ** 2
        want = lav(u, float(family.c))
        assert abs(got - want) < 1e-3


def test_ek_vanishes_linearly_at_the_target():
    # decreases to 0 as d -> k-1, linearly in (k-d) with slope 15*c*k
    k = 100_000
    gap = 100
    for family in (QUAD, TRI):
        c = float(family.c)
        vals = [ek_L(family, d, k) for d in (k - 1, k - 2, k - 4)]
        assert vals[0] < vals[1] < vals[2]
        ratio = ek_L(family, k - gap, k) / (15 * c * k * gap)
        assert 0.97 < ratio < 1.01


# -- scaling branch ---------------------------------------------------------------


def test_lambda_scaling_vanishes_at_unit_weight():
    for family, ds in ((QUAD, (2, 3, 9)), (TRI, (1, 2, 9))):
        for d in ds:
            assert abs(lambda_scaling_single(family, 1.0, d)) < 1e-12


def test_wk_largek_equals_winf():
    for family, drange in ((QUAD, range(2, 7)), (TRI, range(1, 7))):
        for d in drange:
            for i in range(7):
                alpha = 0.3 + 0.1 * i
                a = wk_largek(family, alpha, d)
                b = winf(family, alpha, d)
                assert abs(a - b) < 1e-10, (family.kind, alpha, d)


def test_lambda_scaling_large_d_expansion():
    d, tau, c = 200, 1.0, C_QUAD
    got = lambda_scaling_single(QUAD, math.exp(-tau / d ** 2), d)
    s6 = math.sqrt(6)
    want = s6 * d * ((1 + c * tau) ** -0.5 - 1) + 3 * math.sqrt(1.5) * ((1 + c * tau) ** -1.5 - 1)
    assert abs(got - want) < 0.05  # next correction is O(1/d)


def test_lambda_scaling_double_reduces_to_single():
    for family in (QUAD, TRI):
        d1 = family.min_d()
        for d2 in (d1, d1 + 2, d1 + 5):
            a = lambda_scaling_double(family, 0.7, 1.0, d1, d2)
            b = lambda_scaling_single(family, 0.7, d1)
            assert abs(a - b) < 1e-12


def test_ek_joint_matches_single_at_unit_weight():
    for family in (QUAD, TRI):
        d1 = family.min_d() + 1
        for d2 in (d1, d1 + 3):
            joint = ek_joint_largek(family, 0.8, 1.0, d1, d2)
            single = wk_largek(family, 0.8, d1)
            assert abs(joint - single) < 1e-12


def test_ek_joint_merges_equal_distances():
    for family in (QUAD, TRI):
        d = family.min_d() + 2
        got = ek_joint_largek(family, 0.8, 0.9, d, d)
        want = wk_largek(family, 0.8 * 0.9, d)
        assert abs(got - want) < 1e-12


# -- scaling form and the coefficient-ratio route ---------------------------------


def test_zeta_at_tau_zero_is_u_independent():
    K = 0.7
    for family in (QUAD, TRI):
        vals = [zeta_scaling(family, 0.0, K, u) for u in (0.2, 0.35, 0.5, 0.65, 0.8)]
        spread = (max(vals) - min(vals)) / abs(vals[0])
        assert spread < 1e-10


def test_two_route_identity():
    for family in (QUAD, TRI):
        c = float(family.c)
        for tau in (0.5, 1.0, 2.0):
            for u in (0.3, 0.6):
                a = ktau_from_zeta(family, tau, u)
                b = ktau_laplace(tau, u, c)
                assert abs(a - b) < 1e-6, (family.kind, tau, u)


def test_moment_consistency_density_vs_laplace():
    u, c = 0.5, C_QUAD
    m1 = integrate(lambda L: L * pu_density(L, u, c), 0, math.inf, tol=1e-11)
    m2 = integrate(lambda L: L * L * pu_density(L, u, c), 0, math.inf, tol=1e-11)
    h = 1e-4
    d1 = -(ktau_laplace(h, u, c) - ktau_laplace(-h, u, c)) / (2 * h)
    d2 = (ktau_laplace(h, u, c) - 2 * ktau_laplace(0.0, u, c) + ktau_laplace(-h, u, c)) / (h * h)
    assert abs(d1 - m1) < 1e-5 * abs(m1)
    assert abs(d2 - m2) < 1e-5 * abs(m2)


def test_family_universality_through_c():
    # u-, v- and L-laws depend on the family only through c
    for c in (0.25, 1 / 3, 0.5):
        assert pinf_density(0.7, c) > 0
        assert pu_density(0.7, 0.4, c) > 0
        assert joint_laplace(0.3, 0.4, 2.0, c) > 0
    assert abs(ktau_laplace(1.0, 0.4, C_TRI) - ktau_from_zeta(TRI, 1.0, 0.4)) < 1e-6


# -- special function contracts ----------------------------------------------------


def test_erfcx_contract():
    # relative error <= 1e-13 against the direct expression where it is stable
    for x in (0.0, 0.3, 1.0, 3.0, 5.5):
        direct = math.exp(x * x) * math.erfc(x)
        assert abs(erfcx(x) - direct) <= 1e-13 * direct
    # the asymptotic branch agrees with the direct expression past the switch
    for x in (6.05, 6.5, 8.0):
        direct = math.exp(x * x) * math.erfc(x)
        assert abs(erfcx(x) - direct) <= 5e-13 * direct


def test_domain_guards():
    with pytest.raises(ValueError):
        pinf_density(-1.0, C_QUAD)
    with pytest.raises(ValueError):
        ktau_laplace(1.0, 1.2, C_QUAD)
    with pytest.raises(ValueError):
        joint_laplace(0.1, 0.1, 0.9, C_QUAD)
    with pytest.raises(ValueError):
        winf(QUAD, 1.2, 3)
    with pytest.raises(ValueError):
        ek_L(QUAD, 1, 5)
    with pytest.raises(ValueError):
        cor(0.0)
