"""Perimeter-weighted slice generating functions for planar maps.

Everything is computed in exact rational arithmetic.  Both map families are
driven by a rational parametrization ``x`` of the face weight: series are
assembled in ``x`` and re-expanded in the family's natural variable (``g``
for quadrangulations; ``t = g**2`` for triangulations, whose counts involve
only even powers of ``g``).

The perimeter weight enters through a deformed branch ``lam(alpha; d)``
solving a quadratic equation in the series ring.  ``lam`` itself diverges
like ``x**-(d-1)`` (resp. ``x**-d``) at small ``x``, so we always store the
valuation-normalized product ``lam * x**(d-1)`` (resp. ``lam * x**d``),
which is an honest power series.

Weighted counts ``z_single`` are reconstructed as polynomials in the
perimeter weight by evaluating at integer weights and interpolating, which
avoids bivariate rational-function arithmetic entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Optional, Sequence

from .exactalg import (
    GSeries,
    Poly,
    lagrange_interpolate,
    series_newton_root,
    series_reversion,
    series_sqrt,
)
from . import refdata

__all__ = [
    "Family",
    "QUAD",
    "TRI",
    "LambdaBranch",
    "ZTable",
    "x_of_g",
    "t_series",
    "r_series",
    "lambda_single",
    "lambda_double",
    "z_single",
    "z_double_eval",
    "appendix_b_check",
    "CheckReport",
]


@dataclass(frozen=True)
class Family:
    """Map family descriptor.

    ``c`` is the universal constant entering all asymptotic laws;
    ``epsilon_scale`` the slope of the parametrization variable at
    criticality, ``x = 1 - epsilon_scale * eps + O(eps^2)`` where the face
    weight is ``g_crit * (1 - eps^4)``.
    """

    kind: str
    c: Q
    g_crit_tag: str
    epsilon_scale_tag: str
    series_variable: str
    faces_per_unit: int  # faces counted per power of the series variable

    def __repr__(self):
        return f"Family({self.kind})"

    @property
    def is_quad(self) -> bool:
        return self.kind == "quadrangulation"

    def epsilon_scale(self) -> float:
        return 6 ** 0.5 if self.is_quad else (8 * 3 ** 0.5) ** 0.5

    def g_crit(self) -> float:
        return 1 / 12 if self.is_quad else 1 / (2 * 3 ** 0.75)

    def min_d(self) -> int:
        # smallest distance with a non-trivial hull boundary
        return 2 if self.is_quad else 1

    def min_k(self) -> int:
        return 3 if self.is_quad else 2

    def check_dk(self, d: int, k: int) -> None:
        if k < self.min_k() or d < self.min_d() or d > k - 1:
            raise ValueError(
                f"{self.kind}: need k >= {self.min_k()} and "
                f"{self.min_d()} <= d <= k-1, got d={d}, k={k}"
            )


QUAD = Family("quadrangulation", Q(1, 3), "1/12", "sqrt(6)", "g", 1)
TRI = Family("triangulation", Q(1, 2), "1/(2*3^(3/4))", "sqrt(8*sqrt(3))", "t", 2)


def family_by_name(name: str) -> Family:
    key = name.lower()
    if key in ("quad", "quadrangulation", "q"):
        return QUAD
    if key in ("tri", "triangulation", "t"):
        return TRI
    raise ValueError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# Parametrization series
# ---------------------------------------------------------------------------


def _weight_of_x(family: Family, order: int) -> GSeries:
    """The face-weight variable as a series in x."""
    x = GSeries.gen("x", order)
    one = GSeries.one("x", order)
    if family.is_quad:
        return x * (one + x + x * x) / ((one + 4 * x + x * x) ** 2)
    s = series_sqrt(one + 10 * x + x * x)
    return x * (one + x) / (s ** 3)


def x_of_g(family: Family, order: int) -> GSeries:
    """Parametrization series x(g) (quadrangulations) or x(t) (triangulations).

    Returned in the family's series variable; zero constant term; satisfies
    the defining identity to the stored order.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    f = _weight_of_x(family, order)
    h = series_reversion(f)
    return GSeries(family.series_variable, h.coeffs, h.valuation)


def _x_in_internal(family: Family, order: int) -> GSeries:
    """x(weight) tagged with variable 'x' swapped out for composition use."""
    h = x_of_g(family, order)
    return GSeries("v", h.coeffs, h.valuation)


def _to_family_variable(family: Family, series_x: GSeries, order: int) -> GSeries:
    """Re-expand an x-series in the family variable."""
    from .exactalg import series_compose

    sub = _x_in_internal(family, order)
    relabeled = GSeries("v", series_x.coeffs, series_x.valuation)
    acc = series_compose(relabeled, sub)
    return GSeries(family.series_variable, acc.coeffs, acc.valuation)


# ---------------------------------------------------------------------------
# Deformation branches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaBranch:
    """The deformation branch normalized so that lam(1; d) = 1.

    ``product`` is the power series ``lam * x**dshift`` in the internal
    variable x, where ``dshift = d-1`` for quadrangulations and ``d`` for
    triangulations (0 at the conventional smallest distance, where the branch
    is the constant series 1).
    """

    family: Family
    alpha: tuple
    d: tuple
    dshift: int
    product: GSeries

    def laurent(self) -> GSeries:
        """lam itself as a Laurent series (valuation offset -dshift)."""
        return self.product.shift(-self.dshift)

    def factor(self, exponent: int) -> GSeries:
        """The series 1 - lam * x**exponent (requires exponent >= dshift)."""
        if exponent < self.dshift:
            raise ValueError("factor would be a genuine Laurent series")
        one = GSeries.one("x", self.product.order + (exponent - self.dshift))
        return one - self.product.shift(exponent - self.dshift)


def _rho_undeformed(family: Family, d: int, order: int) -> GSeries:
    """Ratio of undeformed boundary factors entering the branch equation."""
    x = GSeries.gen("x", order)
    one = GSeries.one("x", order)

    def f(j: int) -> GSeries:
        return one - (x ** (d + j) if d + j > 0 else one)

    if family.is_quad:
        num = f(-1) * f(4)
        den = f(1) * f(2)
    else:
        num = f(0) * f(3)
        den = f(1) * f(2)
    return num / den


def _branch_from_rhs(family: Family, rhs: GSeries, order: int) -> GSeries:
    """Solve (1-m)(1-m x^s) = rhs * (1-m x^a)(1-m x^b) for the series m.

    ``rhs`` is a power series in x; the quadratic has a simple root at x = 0
    with m(0) = 1 - rhs(0), which is the branch continuous in the weight.
    """
    one = GSeries.one("x", order)
    x = GSeries.gen("x", order)
    if family.is_quad:
        xs, xa, xb = x ** 5, x ** 2, x ** 3
    else:
        xs, xa, xb = x ** 3, x, x ** 2
    # F(m) = (1-m)(1-m x^s) - rhs (1-m x^a)(1-m x^b), by powers of m
    F0 = one - rhs
    F1 = -(one + xs) + rhs * (xa + xb)
    F2 = xs * (one - rhs)
    seed = 1 - rhs.coeff(0)
    return series_newton_root([F0, F1, F2], seed)


def lambda_single(family: Family, alpha, d: int, order: int) -> LambdaBranch:
    """Deformation branch for a single distance, normalized at weight 1.

    Defined for d >= 2 (quadrangulations) / d >= 1 (triangulations); the
    conventional cases d = 1 / d = 0 return the constant branch 1 (the hull
    boundary there is reduced to the origin vertex).
    """
    alpha = Q(alpha)
    if alpha <= 0:
        raise ValueError("weight must be positive")
    lowest = 1 if family.is_quad else 0
    if d < lowest:
        raise ValueError(f"d must be >= {lowest} for {family.kind}")
    dshift = d - 1 if family.is_quad else d
    if d == lowest:
        return LambdaBranch(family, (alpha,), (d,), 0, GSeries.one("x", order))
    rho = _rho_undeformed(family, d, order)
    weight = alpha * alpha if family.is_quad else alpha
    m = _branch_from_rhs(family, weight * rho, order)
    return LambdaBranch(family, (alpha,), (d,), dshift, m)


def lambda_double(
    family: Family, alpha1, alpha2, d1: int, d2: int, order: int
) -> LambdaBranch:
    """Two-distance deformation branch, continuous through alpha2 = 1.

    At alpha2 = 1 it reduces to ``lambda_single(family, alpha1, d1)``.
    """
    alpha1, alpha2 = Q(alpha1), Q(alpha2)
    if alpha1 <= 0 or alpha2 <= 0:
        raise ValueError("weights must be positive")
    lowest = 1 if family.is_quad else 0
    if not (lowest <= d1 <= d2):
        raise ValueError(f"need {lowest} <= d1 <= d2, got d1={d1}, d2={d2}")
    inner = lambda_single(family, alpha1, d1, order)
    if d2 == lowest:
        # both distances at the convention point: constant branch
        return LambdaBranch(family, (alpha1, alpha2), (d1, d2), 0, GSeries.one("x", order))
    dshift2 = d2 - 1 if family.is_quad else d2
    js = (-1, 4, 1, 2) if family.is_quad else (0, 3, 1, 2)
    f = [inner.factor(d2 + j).truncate(order) for j in js]
    rho = f[0] * f[1] / (f[2] * f[3])
    weight = alpha2 * alpha2 if family.is_quad else alpha2
    m = _branch_from_rhs(family, weight * rho, order)
    return LambdaBranch(family, (alpha1, alpha2), (d1, d2), dshift2, m)


# ---------------------------------------------------------------------------
# Slice series
# ---------------------------------------------------------------------------


def _tk_x(family: Family, k: int, lam: Optional[LambdaBranch], order: int) -> GSeries:
    """T_k (quadrangulations) or the isoslice T_k (triangulations) in x.

    For triangulations the closed form carries a sqrt(x) prefactor; here we
    return the series divided by that prefactor (the public ``t_series``
    reinstates it as an odd g-series).
    """
    x = GSeries.gen("x", order)
    one = GSeries.one("x", order)
    if family.is_quad:
        pref = x * (one + 4 * x + x * x) / ((one + x + x * x) ** 2)
        js_num, js_den = (-1, 4), (1, 2)
    else:
        root = series_sqrt(one + 10 * x + x * x)
        pref = series_sqrt(root) / series_sqrt((one + x) ** 3)
        js_num, js_den = (0, 3), (1, 2)

    def factor(j: int) -> GSeries:
        if lam is None:
            e = k + j
            return (one - x ** e) if e > 0 else GSeries.zero("x", order)
        return lam.factor(k + j).truncate(order)

    num = factor(js_num[0]) * factor(js_num[1])
    den = factor(js_den[0]) * factor(js_den[1])
    return (pref * num / den).truncate(order)


def _rk_x(family: Family, k: int, lam: Optional[LambdaBranch], order: int) -> GSeries:
    """R_k in x (slice generating function with boundary lengths <= k)."""
    x = GSeries.gen("x", order)
    one = GSeries.one("x", order)
    if family.is_quad:
        pref = (one + 4 * x + x * x) / (one + x + x * x)
        js_num, js_den = (0, 3), (1, 2)
    else:
        pref = series_sqrt(one + 10 * x + x * x) / (one + x)
        js_num, js_den = (0, 2), (1, 1)

    def factor(j: int) -> GSeries:
        if lam is None:
            e = k + j
            return (one - x ** e) if e > 0 else GSeries.zero("x", order)
        return lam.factor(k + j).truncate(order)

    num = factor(js_num[0]) * factor(js_num[1])
    den = factor(js_den[0]) * factor(js_den[1])
    return (pref * num / den).truncate(order)


def _interleave_odd(series_t: GSeries, order_g: int) -> GSeries:
    """Turn sum a_i t^i into the odd series sum a_i g^(2i+1)."""
    coeffs = [Q(0)] * (order_g + 1)
    for i in range(series_t.valuation, series_t.order + 1):
        n = 2 * i + 1
        if 0 <= n <= order_g:
            coeffs[n] = series_t.coeff(i)
    return GSeries.of("g", coeffs)


def t_series(family: Family, k: int, order: int, lam: Optional[LambdaBranch] = None) -> GSeries:
    """Slice series T_k, orders measured in the face weight g.

    Quadrangulations: a g-series.  Triangulations: an odd g-series (isoslices
    have an odd number of triangles).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if lam is not None and lam.family is not family:
        raise ValueError("deformation branch belongs to a different family")
    if family.is_quad:
        tx = _tk_x(family, k, lam, order)
        return _to_family_variable(family, tx, order)
    t_order = max((order - 1) // 2, 1)
    tx = _tk_x(family, k, lam, t_order)
    tt = _to_family_variable(family, tx, t_order)
    # reinstate the sqrt(x) prefactor: sqrt(x(t)) = sqrt(t) * sqrt(x(t)/t)
    xt = x_of_g(TRI, t_order)
    ratio = GSeries("t", xt.coeffs, xt.valuation).shift(-1).trim()
    tt = tt * series_sqrt(ratio)
    return _interleave_odd(tt, order)


def r_series(family: Family, k: int, order: int, lam: Optional[LambdaBranch] = None) -> GSeries:
    """Slice series R_k in the family variable (g, or t = g^2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if lam is not None and lam.family is not family:
        raise ValueError("deformation branch belongs to a different family")
    internal_order = order if family.is_quad else order // 2
    rx = _rk_x(family, k, lam, internal_order)
    return _to_family_variable(family, rx, internal_order)


def _z_eval_x(family: Family, branch_d, branch_dm, k: int, order: int) -> GSeries:
    """Z as an x-series from the two deformation branches (d and d-1)."""
    if family.is_quad:
        top = _tk_x(family, k, branch_d, order)
        bot = _tk_x(family, k - 1, branch_dm, order)
    else:
        top = _rk_x(family, k, branch_d, order)
        bot = _rk_x(family, k - 1, branch_dm, order)
    return top - bot


def _z_series_at_weight(family: Family, alpha, d: int, k: int, internal_order: int) -> GSeries:
    bd = lambda_single(family, alpha, d, internal_order)
    bdm = lambda_single(family, alpha, d - 1, internal_order)
    zx = _z_eval_x(family, bd, bdm, k, internal_order)
    return _to_family_variable(family, zx, internal_order)


# ---------------------------------------------------------------------------
# Weighted count tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZTable:
    """Exact hull-perimeter counts: coefficient of alpha^L g^N.

    ``rows`` maps the face count N to a Poly in the perimeter weight whose
    alpha^L coefficient is the number of k-pointed-rooted maps with N faces
    and hull perimeter L at distance d.
    """

    family: Family
    d: int
    k: int
    order: int
    rows: tuple  # ((N, Poly), ...) sorted by N, zero rows omitted

    def coeff(self, n_faces: int, perimeter: int) -> int:
        for n, poly in self.rows:
            if n == n_faces:
                if perimeter > poly.degree:
                    return 0
                c = poly.coeffs[perimeter]
                if c.denominator != 1:
                    raise AssertionError("non-integer count in ZTable")
                return int(c)
        return 0

    def as_dict(self) -> dict:
        return {
            n: {l: int(c) for l, c in enumerate(poly.coeffs) if c != 0}
            for n, poly in self.rows
        }

    def to_json_dict(self) -> dict:
        return {
            "family": self.family.kind,
            "d": self.d,
            "k": self.k,
            "order": self.order,
            "coefficients": [
                {
                    "N": n,
                    "terms": [
                        {"L": l, "count": int(c)}
                        for l, c in enumerate(poly.coeffs)
                        if c != 0
                    ],
                }
                for n, poly in self.rows
            ],
        }

    def to_csv_rows(self):
        for n, poly in self.rows:
            for l, c in enumerate(poly.coeffs):
                if c != 0:
                    yield (self.family.kind, self.d, self.k, n, l, int(c))


def _perimeter_degree_bound(family: Family, n_faces: int) -> int:
    # each boundary step consumes at least one distinct face (two steps per
    # face for quadrangulations given even perimeters)
    if family.is_quad:
        return 2 * n_faces
    return (3 * n_faces + 1) // 2


def z_single(family: Family, d: int, k: int, order: int) -> ZTable:
    """Exact perimeter-weighted table of k-pointed-rooted maps.

    ``order`` is the truncation order in the face weight g for both families.
    """
    family.check_dk(d, k)
    internal_order = order if family.is_quad else order // 2
    if internal_order < 1:
        raise ValueError("order too small for this family")
    max_bound = _perimeter_degree_bound(family, order)
    nodes = [Q(j + 1) for j in range(max_bound + 1)]
    evaluations = [_z_series_at_weight(family, a, d, k, internal_order) for a in nodes]

    rows = []
    for idx in range(internal_order + 1):
        n_faces = idx * family.faces_per_unit
        bound = _perimeter_degree_bound(family, n_faces)
        pts = [(nodes[j], evaluations[j].coeff(idx)) for j in range(bound + 1)]
        poly = lagrange_interpolate(pts, bound)
        if not poly.is_zero():
            rows.append((n_faces, poly))
    return ZTable(family, d, k, order, tuple(rows))


def z_double_eval(
    family: Family, alpha1, alpha2, d1: int, d2: int, k: int, order: int
) -> GSeries:
    """Exact series at numeric weights (alpha1, alpha2) for distances d1 <= d2."""
    family.check_dk(d1, k)
    family.check_dk(d2, k)
    if d1 > d2:
        raise ValueError("need d1 <= d2")
    internal_order = order if family.is_quad else order // 2
    bd = lambda_double(family, alpha1, alpha2, d1, d2, internal_order)
    bdm = lambda_double(family, alpha1, alpha2, d1 - 1, d2 - 1, internal_order)
    zx = _z_eval_x(family, bd, bdm, k, internal_order)
    return _to_family_variable(family, zx, internal_order)


# ---------------------------------------------------------------------------
# Reference-table verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    tables_checked: int
    mismatches: tuple  # (family_kind, d, k, N, L, expected, computed)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if self.ok:
            return f"{self.tables_checked}/{self.tables_checked} tables match"
        return (
            f"{self.tables_checked - len(set((m[0], m[1], m[2]) for m in self.mismatches))}"
            f"/{self.tables_checked} tables match; {len(self.mismatches)} coefficient mismatches"
        )


def _diff_tables(reference: dict, table: ZTable) -> list:
    out = []
    computed = table.as_dict()
    keys = set(reference) | set(computed)
    for n in sorted(keys):
        ref_row = reference.get(n, {})
        got_row = computed.get(n, {})
        for l in sorted(set(ref_row) | set(got_row)):
            e = ref_row.get(l, 0)
            c = got_row.get(l, 0)
            if e != c:
                out.append((table.family.kind, table.d, table.k, n, l, e, c))
    return out


def appendix_b_check(reference: Optional[dict] = None) -> CheckReport:
    """Recompute the twelve built-in tables and diff against the transcription.

    ``reference`` overrides the built-in data (used by the harness self-test).
    """
    mismatches = []
    count = 0
    ref_quad = refdata.QUAD_TABLES if reference is None else reference.get("quad", {})
    ref_tri = refdata.TRI_TABLES if reference is None else reference.get("tri", {})
    for (d, k), ref in sorted(ref_quad.items()):
        count += 1
        mismatches += _diff_tables(ref, z_single(QUAD, d, k, refdata.QUAD_ORDER))
    for (d, k), ref in sorted(ref_tri.items()):
        count += 1
        mismatches += _diff_tables(ref, z_single(TRI, d, k, refdata.TRI_ORDER))
    return CheckReport(count, tuple(mismatches))
