"""Closed-form asymptotic laws for hull perimeters and their scaling limits.

All evaluators are stateless double-precision functions (the Hermite-type
polynomial cache is write-once).  Laplace-transform evaluators accept complex
arguments so they can be driven along inversion contours.  The two map
families share every law up to the constant ``c`` (1/3 for quadrangulations,
1/2 for triangulations); family-specific machinery enters only through the
scaling constant ``sqrt(6)`` resp. ``sqrt(8*sqrt(3))`` of the parametrization
variable at criticality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction as Q

from .exactalg import Poly
from .genfun import QUAD, TRI, Family

__all__ = [
    "pinf_laplace",
    "pinf_density",
    "F_of",
    "ktau_laplace",
    "pu_density",
    "ptilde_density",
    "ptilde1_density",
    "joint_laplace",
    "PiPolynomial",
    "pi_poly",
    "joint_density",
    "joint_slice_laplace",
    "cor",
    "lav",
    "lav_cond",
    "profile",
    "winf",
    "einf_L",
    "ek_L",
    "lambda_scaling_single",
    "wk_largek",
    "lambda_scaling_double",
    "ek_joint_largek",
    "mu_scaling",
    "nu_minus_xi",
    "zeta_scaling",
    "ktau_from_zeta",
    "erfcx",
]

SQRT_PI = math.sqrt(math.pi)


def _scale(family: Family) -> float:
    # slope of the parametrization variable at criticality
    return math.sqrt(6.0) if family.is_quad else math.sqrt(8.0 * math.sqrt(3.0))


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x^2) * erfc(x) for x >= 0."""
    if x < 0:
        raise ValueError("erfcx implemented for x >= 0 only")
    if x <= 6.0:
        return math.exp(x * x) * math.erfc(x)
    # asymptotic series 1/(x sqrt(pi)) * sum (-1)^n (2n-1)!! / (2 x^2)^n
    inv2x2 = 1.0 / (2.0 * x * x)
    term = 1.0
    acc = 1.0
    n = 0
    while True:
        n += 1
        term *= -(2 * n - 1) * inv2x2
        acc += term
        if abs(term) < 1e-18 * abs(acc) or n > 60:
            break
    return acc / (x * SQRT_PI)


# ---------------------------------------------------------------------------
# Single-distance law in the infinite-distance-to-target regime
# ---------------------------------------------------------------------------


def pinf_laplace(tau, c):
    """Laplace transform of the limiting rescaled-perimeter density."""
    return (1 + c * tau) ** -1.5


def pinf_density(L: float, c: float) -> float:
    """Limiting density of L(d) = perimeter / d^2 as d grows."""
    if L < 0 or c <= 0:
        raise ValueError("need L >= 0 and c > 0")
    return (2.0 / SQRT_PI) * math.sqrt(L) * c ** -1.5 * math.exp(-L / c)


# ---------------------------------------------------------------------------
# Finite-fraction regime: d = u*k
# ---------------------------------------------------------------------------

# Taylor data for F about sigma = 0: row j is (denominator, ascending integer
# coefficients in u of the numerator); F = sum_j sigma^j * num_j(u)/(den_j u^3).
# Generated once by symbolic expansion of the closed form below.
_F_TAYLOR = (
    (64, (501, -3006, 7515, -10020, 7518, -3012, 512)),
    (128, (-2223, 13338, -33345, 44460, -33354, 13356, -2244)),
    (256, (7305, -43830, 109575, -146100, 109596, -43872, 7344)),
    (512, (-21067, 126402, -316005, 421340, -316050, 126492, -21140)),
    (16384, (902115, -5412690, 13531725, -18042300, 13533210, -5415660, 904320)),
    (32768, (-2299341, 13796046, -34490115, 45986820, -34493118, 13802052, -2303532)),
    (32768, (2830828, -16984968, 42462420, -56616560, 42465423, -16990974, 2834832)),
    (65536, (-6792825, 40756950, -101892375, 135856500, -101898342, 40768884, -6800508)),
    (2097152, (255628269, -1533769614, 3834424035, -5112565380, 3834612990, -1534147524, 255864960)),
    (4194304, (-591685935, 3550115610, -8875289025, 11833718700, -8875662090, 3550861740, -592142980)),
    (8388608, (1351699767, -8110198602, 20275496505, -27033995340, 20276231976, -8111669544, 1352584464)),
    (16777216, (-3054366489, 18326198934, -45815497335, 61087329780, -45816945990, 18329096244, -3056082588)),
    (1073741824, (218821752175, -1312930513050, 3282326282625, -4376435043500, 3282417547890, -1313113043580, 218928469760)),
)

# The closed form cancels to O(sigma^3)/O(sigma^4) inside its brackets, so in
# double precision it loses ~|sigma|^-4 * 1e-16 near sigma = 0; below this
# radius the Taylor form is accurate to ~1e-12 and the closed form is not.
_F_SWITCH_RADIUS = 0.08


def _F_taylor(sigma, u):
    upows = [u ** i for i in range(7)]
    acc = 0.0
    for j in range(len(_F_TAYLOR) - 1, -1, -1):
        den, nums = _F_TAYLOR[j]
        cj = sum(n * p for n, p in zip(nums, upows)) / den
        acc = acc * sigma + cj
    return acc / u ** 3


def F_of(sigma, u):
    """Laplace-variable form of the finite-fraction law (complex-capable)."""
    if not isinstance(sigma, complex) and sigma <= -1:
        raise ValueError("sigma must satisfy sigma > -1")
    if abs(sigma) < _F_SWITCH_RADIUS:
        return _F_taylor(sigma, u)
    p52 = (sigma + 1) ** 2.5
    b1 = (8 * sigma ** 4 + 47 * sigma ** 3 + 90 * sigma ** 2 + 120 * sigma + 48) / (4 * p52) - 12
    b2 = (4 * sigma ** 4 + 19 * sigma ** 3 + 30 * sigma ** 2 + 68 * sigma + 32) / (4 * p52) + 3 * sigma - 8
    b3 = (
        (4 * sigma ** 5 + 16 * sigma ** 4 - 7 * sigma ** 2 - 40 * sigma - 24) / (4 * p52)
        + 3 * sigma ** 2
        - 5 * sigma
        + 6
    )
    s3 = sigma ** 3
    return (
        b1 * u ** 3 / s3
        + b2 * u * (1 - 2 * u) / s3
        + b3 * (1 - 2 * u) * (1 - u) ** 2 * (1 - 2 * u + 2 * u ** 2) / (s3 * sigma * u ** 3)
    )


def sigma_of(tau, u, c):
    return (1 - 2 * u + c * tau * (1 - u) ** 2) / (u * u)


def ktau_laplace(tau, u, c):
    """Laplace transform of the perimeter law at distance u*k (complex-capable)."""
    if not (0 < u < 1):
        raise ValueError("u must lie in (0, 1)")
    return F_of(sigma_of(tau, u, c), u)


def b_of(u: float) -> float:
    return (1 - u) ** 2 / (u * u)


def pu_density(L: float, u: float, c: float) -> float:
    """Density of L(d) at d = u*k for large k (erf-based closed form)."""
    if L < 0 or not (0 < u < 1):
        raise ValueError("need L >= 0 and 0 < u < 1")
    b = b_of(u)
    ell = L / (c * b)
    p = 2 * b * (b * b - 1) * ell * ell - (5 * b ** 3 + 3 * b + 4) * ell + 6 * (b ** 3 - 1)
    r = b * (15 * b * b - 1) * ell + 2 * (5 * b ** 3 - 1)
    bracket = (erfcx(math.sqrt(ell)) * math.sqrt(math.pi * ell) - 1.0) * p + r
    return pinf_density(L, c) * bracket / (4 * (math.sqrt(b) + b) ** 3)


def ptilde_density(R: float, u: float, c: float) -> float:
    """Density of the near-target rescaling R(d) = perimeter / (k-d)^2."""
    b = b_of(u)
    return b * pu_density(b * R, u, c)


def ptilde1_density(R: float, c: float) -> float:
    """Limit of the near-target law as d approaches k (all moments infinite)."""
    if R < 0:
        raise ValueError("need R >= 0")
    if R == 0:
        return 0.0
    return (
        2 * math.sqrt(R / (math.pi * c ** 5)) * (R + c)
        - (R / c ** 3) * (2 * R + 3 * c) * erfcx(math.sqrt(R / c))
    )


# ---------------------------------------------------------------------------
# Joint law at two distances
# ---------------------------------------------------------------------------


def joint_laplace(tau1, tau2, v, c):
    """Joint Laplace transform of (L(d), L(v d)) for v > 1 (complex-capable)."""
    if not (v > 1):
        raise ValueError("v must exceed 1")
    w1 = (1 + c * tau1) ** 0.5
    inner = (
        v * v * (1 + c * tau1) * (1 + c * tau2)
        - 2 * v * c * tau2 * (1 + c * tau1 - w1)
        + c * tau2 * (2 + c * tau1 - 2 * w1)
    )
    return v ** 3 / inner ** 1.5


@dataclass(frozen=True)
class PiPolynomial:
    """Hermite-type polynomial used by the joint-density series."""

    n: int
    poly: Poly

    def __call__(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.poly.coeffs):
            acc = acc * t + c
        return acc


_PI_CACHE: dict = {}
_PI_CACHE_LIMIT = 200


def pi_poly(n: int) -> PiPolynomial:
    """n-th Hermite-type polynomial, built by P -> P' - t P applied n+1 times."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cached = _PI_CACHE.get(n)
    if cached is not None:
        return cached
    # integer coefficient lists keep the construction fast at large n
    p = [0] * n + [1]  # t^n
    for _ in range(n + 1):
        out = [0] * (len(p) + 1)
        for i, coeff in enumerate(p):
            if coeff:
                if i >= 1:
                    out[i - 1] += i * coeff
                out[i + 1] -= coeff
        while out and out[-1] == 0:
            out.pop()
        p = out
    result = PiPolynomial(n, Poly.of([-coeff for coeff in p], "t"))
    if n <= _PI_CACHE_LIMIT:
        _PI_CACHE[n] = result
    return result


def _hermite_functions(t: float, count: int) -> list:
    """Normalized Hermite functions He_j(t) e^{-t^2/2} / sqrt(j!), j < count."""
    out = [math.exp(-0.5 * t * t)]
    if count > 1:
        out.append(t * out[0])
    for j in range(1, count - 1):
        out.append((t / math.sqrt(j + 1)) * out[j] - math.sqrt(j / (j + 1)) * out[j - 1])
    return out


_LOG_FACTORIALS = [0.0]


def _log_factorial(n: int) -> float:
    lf = _LOG_FACTORIALS
    while len(lf) <= n:
        lf.append(lf[-1] + math.log(len(lf)))
    return lf[n]


class _JointSeries:
    """Term generator for the joint-density series with the Gaussian folded in.

    Writing the n-th Hermite-type polynomial through derivatives of the
    Gaussian turns pi_n(t2) e^{-t2^2/2} into a sum of bounded normalized
    Hermite functions with log-space scalar weights; direct evaluation of
    pi_n overflows long before the terms stop mattering.  Each term also
    reports the largest magnitude met inside its alternating inner sum, from
    which the caller bounds the roundoff noise of the result.
    """

    def __init__(self, y: float, t2: float):
        self.y = y
        self.t2 = t2
        self.hhat = _hermite_functions(t2, 8)
        self.lny = math.log(y) if y > 0 else None
        self.lnt = math.log(t2) if t2 > 0 else None
        _log_factorial(8)

    def term(self, n: int):
        """Return (term value, magnitude of its largest inner contribution)."""
        hh = self.hhat
        if len(hh) < n + 2:
            self.hhat = hh = _hermite_functions(self.t2, 2 * n + 4)
        lf = _LOG_FACTORIALS
        if len(lf) <= n + 2:
            _log_factorial(n + 2)
            lf = _LOG_FACTORIALS
        base = lf[n] - math.lgamma((n + 1) / 2.0)
        if self.lny is not None:
            base += 0.5 * n * self.lny
        elif n > 0:
            return 0.0, 0.0
        total = 0.0
        absmax = 0.0
        lnt = self.lnt
        for j in range(n + 1):
            if lnt is None and j > 0:
                break
            ln_b = base - lf[n - j] - lf[j] - 0.5 * lf[j + 1]
            if lnt is not None:
                ln_b += j * lnt
            if ln_b > 700.0:
                raise ArithmeticError("joint-density series out of double-precision range")
            contrib = math.exp(ln_b) * hh[j + 1]
            if (n + j) % 2:
                contrib = -contrib
            total += contrib
            a = abs(contrib)
            if a > absmax:
                absmax = a
        return total, absmax


def joint_slice_laplace(tau1, L2: float, v: float, c: float):
    """Laplace transform (in the first variable) of the joint density at fixed L2.

    Complex-capable in tau1; inverting it numerically over tau1 -> L1 gives
    the joint density by a single 1-D inversion.
    """
    if not (v > 1):
        raise ValueError("v must exceed 1")
    if L2 < 0:
        raise ValueError("need L2 >= 0")
    w1 = (1 + c * tau1) ** 0.5
    denom = (v - 1) * w1 + 1
    z = -L2 * v * v * w1 * w1 / (c * denom * denom)
    e = cmath.exp(z) if isinstance(z, complex) else math.exp(z)
    return 2 * math.sqrt(L2 / math.pi) * (v ** 3 / c ** 1.5) * e / denom ** 3


def _joint_density_ilt(L1: float, L2: float, v: float, c: float) -> float:
    from .numlab import talbot_ilt

    if L1 == 0.0:
        return 0.0
    return talbot_ilt(lambda s: joint_slice_laplace(s, L2, v, c), L1)


def joint_density(L1: float, L2: float, v: float, c: float, max_terms=None, method: str = "auto") -> float:
    """Joint density of (L(d), L(v d)).

    The polynomial series is the primary route, summed adaptively with a
    running roundoff bound for its cancelling terms.  Deep in parameter
    corners (large L1/(c (v-1)^2) together with large L2) the alternating
    sums exhaust double precision; with ``method="auto"`` such points fall
    back to a one-dimensional numerical inversion of the closed slice
    transform, ``method="series"`` raises instead, and ``method="ilt"``
    forces the inversion route (the independent cross-check in tests).

    ``max_terms`` restricts the series to indices n < max_terms (used to
    check the moment-truncation property) and implies the series route.
    """
    if L1 < 0 or L2 < 0:
        raise ValueError("need L1, L2 >= 0")
    if not (v > 1):
        raise ValueError("v must exceed 1")
    if method not in ("auto", "series", "ilt"):
        raise ValueError("method must be auto, series, or ilt")
    if method == "ilt" and max_terms is None:
        return _joint_density_ilt(L1, L2, v, c)
    vm = (v - 1) ** 2
    y = L1 / (c * vm)
    exponent = L2 * v * v / (c * vm)
    t2 = math.sqrt(2 * exponent)
    # envelope |sum| <= exp(t2 sqrt(2y) + y - exponent): far enough out the
    # value is below any resolvable scale and the series need not run
    if exponent - t2 * math.sqrt(2 * y) - y > 300.0:
        return 0.0
    pref = pinf_density(L1, c) * (math.sqrt(2.0) / c) * v * v / vm
    limit = 500 if max_terms is None else max_terms
    series = _JointSeries(y, t2)
    acc = 0.0
    noise = 0.0
    below = 0
    for n in range(limit):
        term, absmax = series.term(n)
        acc += term
        noise += 2e-16 * absmax  # roundoff bound for the cancelling sums
        if max_terms is None:
            if abs(term) < 1e-14 * max(abs(acc), noise, 1e-300):
                below += 1
                if below >= 10:
                    break
            else:
                below = 0
    else:
        if max_terms is None:
            raise ArithmeticError("joint-density series did not converge in 500 terms")
    if max_terms is None:
        certified = noise <= 1e-8 * abs(acc) or pref * noise <= 1e-10
        if not certified:
            if method == "series":
                raise ArithmeticError(
                    "joint-density series cancellation exhausts double precision "
                    f"(y={y:.3g}, t2={t2:.3g}): parameter domain issue"
                )
            return _joint_density_ilt(L1, L2, v, c)
    return pref * acc


# ---------------------------------------------------------------------------
# Means, correlations, profiles
# ---------------------------------------------------------------------------


def cor(v: float) -> float:
    """Normalized correlation of hull perimeters at distance ratio v."""
    if v <= 0:
        raise ValueError("v must be positive")
    return 2.0 / (3.0 * max(v, 1.0 / v))


def lav(u: float, c: float) -> float:
    """Mean of L(u k) in the large-k limit."""
    return 1.5 * c * (1 + u - 3 * u ** 6 + u ** 7)


def lav_cond(v: float, L1: float, c: float) -> float:
    """Mean of L(v d) given L(d) = L1, for v > 1 (extends continuously to v=1)."""
    if L1 < 0:
        raise ValueError("need L1 >= 0")
    return (3 * c * (v - 1) ** 2 + 3 * math.sqrt(math.pi * c * L1) * (v - 1) + 2 * L1) / (2 * v * v)


def profile(u: float, c: float) -> float:
    """Mean hull perimeter at distance u*k normalized by the global scale k^2."""
    return u * u * lav(u, c)


# ---------------------------------------------------------------------------
# Fixed finite distance, infinitely far target
# ---------------------------------------------------------------------------


def winf(family: Family, alpha: float, d: int):
    """E[alpha^perimeter(d)] at infinitely large target distance."""
    if not (0 < alpha <= 1):
        raise ValueError("alpha must lie in (0, 1]")
    if d < family.min_d():
        raise ValueError(f"d must be >= {family.min_d()}")
    if family.is_quad:
        a2 = alpha * alpha
        a4 = a2 * a2
        n1 = (d - 2) ** 2 * (d + 3) ** 2 * a4 - 26 * (d - 2) * d * (d + 1) * (d + 3) * a2 + 25 * d ** 2 * (d + 1) ** 2
        d1 = d * (d + 1) * (1 - a2) + 6 * a2
        n2 = (d - 1) ** 2 * (d + 4) ** 2 * a4 - 26 * (d - 1) * (d + 1) * (d + 2) * (d + 4) * a2 + 25 * (d + 1) ** 2 * (d + 2) ** 2
        d2 = (d + 1) * (d + 2) * (1 - a2) + 6 * a2
        return 0.5 * (-math.sqrt(n1) / d1 + math.sqrt(n2) / d2)
    a = alpha
    p1 = (d - 1) * (d + 2)
    p2 = d * (d + 3)
    n1 = p1 * (p1 * (9 - a) * (1 - a) - 20 * a + 36) + 36
    n2 = p2 * (p2 * (9 - a) * (1 - a) - 20 * a + 36) + 36
    return 0.5 * (-math.sqrt(n1) / (p1 * (1 - a) + 2) + math.sqrt(n2) / (p2 * (1 - a) + 2))


def einf_L(family: Family, d: int) -> float:
    """Mean hull perimeter at distance d, infinitely far target (exact form)."""
    if d < family.min_d():
        raise ValueError(f"d must be >= {family.min_d()}")
    if family.is_quad:
        return float(Q(2 * (d + 1) ** 2 * (3 * d * d + 6 * d - 4), 3 * (2 * d + 1) * (2 * d + 3)))
    return float(Q(3 * d * (d + 1) ** 2 * (d + 2), (2 * d + 1) * (2 * d + 3)))


def _ek_quad(d: int, k: int) -> Q:
    d, k = Q(d), Q(k)
    pref = k * (k + 1) * (k + 2) / (
        2 * (k * k + 2 * k - 1) * (5 * k ** 4 + 20 * k ** 3 + 27 * k * k + 14 * k + 4)
    )
    a = (
        (d - 1) * (d + 1) * (d + 2) * (d + 4) * (2 * k + 3)
        * (
            (1 - d) * (d + 1) * (d + 2) * (d + 4) * (5 * d * d + 15 * d + 17)
            + (k + 1) ** 2 * (k + 2) ** 2 * (5 * k * k + 15 * k + 2)
            - 4
        )
        / (3 * (2 * d + 3) * (k + 1) ** 2 * (k + 2) ** 2)
    )
    b = (
        (d - 2) * d * (d + 1) * (d + 3) * (2 * k + 1)
        * (
            (2 - d) * d * (d + 1) * (d + 3) * (5 * d * d + 5 * d + 7)
            + k * k * (k + 1) ** 2 * (5 * k * k + 5 * k - 8)
            - 4
        )
        / (3 * (2 * d + 1) * k * k * (k + 1) ** 2)
    )
    return pref * (a - b)


def _ek_tri(d: int, k: int) -> Q:
    d, k = Q(d), Q(k)
    pref = k * k * (k + 1) ** 2 / (
        2 * (2 * k + 1) * (5 * k ** 6 + 15 * k ** 5 + 14 * k ** 4 + 3 * k ** 3 - k * k - 1)
    )
    a = (
        d * (d + 1) * (d + 2) * (d + 3)
        * (
            10 * (k + 1) ** 6
            - 7 * (k + 1) ** 4
            - 2 * d * (d + 1) * (d + 2) * (d + 3) * (5 * d * d + 15 * d + 14)
            - 2
        )
        / ((k + 1) ** 3 * (2 * d + 3))
    )
    b = (
        (d - 1) * d * (d + 1) * (d + 2)
        * (
            10 * k ** 6
            - 7 * k ** 4
            - 2 * (d - 1) * d * (d + 1) * (d + 2) * (5 * d * d + 5 * d + 4)
            - 2
        )
        / (k ** 3 * (2 * d + 1))
    )
    return pref * (a - b)


def ek_L(family: Family, d: int, k: int) -> float:
    """Mean hull perimeter at distance d for target distance k (exact rational)."""
    if family.is_quad:
        if not (2 <= d < k):
            raise ValueError("quadrangulations need 2 <= d < k")
        return float(_ek_quad(d, k))
    if not (1 <= d < k):
        raise ValueError("triangulations need 1 <= d < k")
    return float(_ek_tri(d, k))


# ---------------------------------------------------------------------------
# Scaling limit of the deformation branch
# ---------------------------------------------------------------------------


def lambda_scaling_single(family: Family, alpha: float, d: int) -> float:
    """Linear-response coefficient of the deformation branch at criticality.

    Vanishes at alpha = 1; the admissible branch of a quadratic equation.
    """
    if not (0 < alpha <= 1):
        raise ValueError("alpha must lie in (0, 1]")
    s = _scale(family)
    s2 = s * s
    if family.is_quad:
        if d < 1:
            raise ValueError("d must be >= 1")
        if d == 1:
            return 0.0
        prod_num = (d - 1) * (d + 4)
        prod_den = (d + 1) * (d + 2)
        rho = alpha * alpha * prod_num / prod_den
        cterm = s2 * prod_num * (1 - alpha * alpha) / (1 - rho)
    else:
        if d < 0:
            raise ValueError("d must be >= 0")
        if d == 0:
            return 0.0
        prod_num = d * (d + 3)
        prod_den = (d + 1) * (d + 2)
        rho = alpha * prod_num / prod_den
        cterm = s2 * prod_num * (1 - alpha) / (1 - rho)
    disc = s2 * (2 * d + 3) ** 2 - 4 * cterm
    if disc < 0:
        raise ArithmeticError("discriminant negative: branch selection failed")
    return 0.5 * (-s * (2 * d + 3) + math.sqrt(disc))


def wk_largek(family: Family, alpha: float, d: int) -> float:
    """Large-k limit of E[alpha^perimeter(d)] via the scaling branch."""
    if d < family.min_d():
        raise ValueError(f"d must be >= {family.min_d()}")
    s = _scale(family)
    return (
        lambda_scaling_single(family, alpha, d)
        - lambda_scaling_single(family, alpha, d - 1)
        + s
    ) / s


def _quadratic_pair(family: Family, d2: int):
    s = _scale(family)
    s2 = s * s
    if family.is_quad:
        qn = s2 * (d2 - 1) * (d2 + 4)
        qd = s2 * (d2 + 1) * (d2 + 2)
    else:
        qn = s2 * d2 * (d2 + 3)
        qd = s2 * (d2 + 1) * (d2 + 2)
    return s, s2, qn, qd


def lambda_scaling_double(family: Family, alpha1: float, alpha2: float, d1: int, d2: int) -> float:
    """Two-distance scaling branch; reduces to the single branch at alpha2=1."""
    if not (0 < alpha1 <= 1 and 0 < alpha2 <= 1):
        raise ValueError("weights must lie in (0, 1]")
    lowest = 1 if family.is_quad else 0
    if not (lowest <= d1 <= d2):
        raise ValueError("need d1 <= d2 in the family range")
    if d2 == lowest:
        return 0.0
    lam1 = lambda_scaling_single(family, alpha1, d1)
    s, s2, qn, qd = _quadratic_pair(family, d2)
    base = lam1 * lam1 + s * (2 * d2 + 3) * lam1
    weight = alpha2 * alpha2 if family.is_quad else alpha2
    rho = weight * (base + qn) / (base + qd)
    if rho == 1:
        return lam1
    cterm = (qn - rho * qd) / (1 - rho)
    disc = s2 * (2 * d2 + 3) ** 2 - 4 * cterm
    if disc < 0:
        raise ArithmeticError("discriminant negative: branch selection failed")
    return 0.5 * (-s * (2 * d2 + 3) + math.sqrt(disc))


def ek_joint_largek(family: Family, alpha1: float, alpha2: float, d1: int, d2: int) -> float:
    """Large-k limit of E[alpha1^perimeter(d1) * alpha2^perimeter(d2)]."""
    if d1 < family.min_d() or d2 < d1:
        raise ValueError("need family min <= d1 <= d2")
    s = _scale(family)
    top = lambda_scaling_double(family, alpha1, alpha2, d1, d2)
    bot = lambda_scaling_double(family, alpha1, alpha2, d1 - 1, d2 - 1)
    return (top - bot + s) / s


# ---------------------------------------------------------------------------
# Finite-fraction scaling functions and the K^3-coefficient route
# ---------------------------------------------------------------------------


def _mu_quad(tau, w):
    a = math.sqrt(1.5)
    ch = cmath.cosh(a * w)
    sh = cmath.sinh(a * w)
    coth2 = (ch / sh) ** 2
    num = 9 * w * w * ch * ch + (9 * w * w - 6 * w * cmath.sqrt(9 * w * w * coth2 + 2 * tau) + 2 * tau) * sh * sh
    den = 9 * w * w + 2 * tau * sh * sh
    return cmath.exp(math.sqrt(6) * w) * num / den


def mu_scaling(family: Family, tau, w):
    """Leading scaling value of the deformation branch at w = K*u (complex-capable)."""
    if family.is_quad:
        val = _mu_quad(tau, w)
    else:
        val = _mu_quad(1.5 * tau, 2.0 * w / 3.0 ** 0.25)
    if isinstance(w, complex) or isinstance(tau, complex):
        return val
    return val.real


def nu_minus_xi(family: Family, tau, K, u):
    """Difference of subleading branch coefficients at distances d and d-1."""
    s = _scale(family)
    m = mu_scaling(family, tau, K * u)
    e = cmath.exp(s * K * u)
    return s * ((e + 1) * (e - m) ** 3 / ((e - 1) ** 3 * (e + m)) - m)


def zeta_scaling(family: Family, tau, K, u):
    """Scaling form of the weighted slice count (complex-capable in K)."""
    s = _scale(family)
    m = mu_scaling(family, tau, K * u)
    eu = cmath.exp(s * K * u)
    ek = cmath.exp(s * K)
    val = (
        24 * s * ek * (eu + 1) * (eu - m) ** 3 * (ek + m)
        / ((eu - 1) ** 3 * (ek - m) ** 3 * (eu + m))
    )
    if isinstance(K, complex):
        return val
    return val.real


_K3_RADIUS = 0.25
_K3_NODES = 64


def _k3_coefficient(f, radius: float) -> complex:
    """Laurent coefficient of K^3 of f via Cauchy-integral circle sampling."""
    total = 0.0 + 0.0j
    for j in range(_K3_NODES):
        theta = 2.0 * math.pi * j / _K3_NODES
        K = radius * cmath.exp(1j * theta)
        total += f(K) * cmath.exp(-3j * theta)
    return total / (_K3_NODES * radius ** 3)


def ktau_from_zeta(family: Family, tau: float, u: float) -> float:
    """Finite-fraction Laplace transform via the K^3-coefficient ratio.

    Independent route cross-validating ``ktau_laplace``: extracts the cubic
    Laurent coefficient of the scaling form at tau and at 0 and returns the
    ratio.  Raises if the extraction residual exceeds 1e-7.
    """
    if not (0 < u < 1):
        raise ValueError("u must lie in (0, 1)")
    if tau < 0:
        raise ValueError("tau must be >= 0")

    def fz(t):
        return lambda K: zeta_scaling(family, t, K, u)

    num = _k3_coefficient(fz(tau), _K3_RADIUS)
    den = _k3_coefficient(fz(0.0), _K3_RADIUS)
    ratio = num.real / den.real
    num2 = _k3_coefficient(fz(tau), 0.8 * _K3_RADIUS)
    den2 = _k3_coefficient(fz(0.0), 0.8 * _K3_RADIUS)
    ratio2 = num2.real / den2.real
    residual = abs(ratio - ratio2) + abs(num.imag / den.real) + abs(num2.imag / den2.real)
    if residual > 1e-7:
        raise ArithmeticError(f"coefficient extraction residual {residual:.3e} above 1e-7")
    return ratio
