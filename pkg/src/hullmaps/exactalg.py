"""Exact arithmetic substrate: rationals, dense polynomials, truncated power series.

Coefficients are ``fractions.Fraction`` (always reduced, positive denominator),
or ``Poly`` when a series carries polynomial coefficients.  A ``GSeries`` is a
truncated (Laurent-capable) power series

    sum_{n = valuation}^{order}  coeffs[n - valuation] * X^n  +  O(X^{order+1})

in a single named variable.  Truncation is tracked explicitly: every binary
operation computes the order to which the result is actually reliable (min of
the operand orders, adjusted for valuations) and never silently extends a
series.  This makes precision loss an error of bookkeeping rather than a
silent wrong answer.

All values are immutable; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

Q = Fraction

CoefT = Union[Fraction, "Poly"]


def _is_zero(c: CoefT) -> bool:
    if isinstance(c, Poly):
        return c.is_zero()
    return c == 0


# ---------------------------------------------------------------------------
# Dense univariate polynomials with exact coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Dense polynomial; ``coeffs[i]`` is the coefficient of ``var**i``.

    Trailing zeros are trimmed; the zero polynomial has ``coeffs == ()`` and
    degree -1.
    """

    coeffs: tuple
    var: str = "alpha"

    @staticmethod
    def of(values: Sequence, var: str = "alpha") -> "Poly":
        cs = [Q(v) for v in values]
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs), var)

    @staticmethod
    def const(value, var: str = "alpha") -> "Poly":
        return Poly.of([value], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, point):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.var != self.var and self.coeffs and other.coeffs:
                raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")
            return other
        return Poly.of([other], self.var)

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [Q(0)] * (n - len(self.coeffs))
        for i, c in enumerate(o.coeffs):
            a[i] += c
        return Poly.of(a, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            q = Q(other)
            return Poly.of([c * q for c in self.coeffs], self.var)
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return Poly((), self.var)
        out = [Q(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Poly.of(out, self.var)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.is_zero()
            return self.coeffs == (Q(other),)
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.var))

    def derivative(self) -> "Poly":
        return Poly.of([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*{self.var}")
            else:
                parts.append(f"{c}*{self.var}^{i}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GSeries:
    """Truncated series in ``var``: coefficients for X^valuation .. X^order."""

    var: str
    coeffs: tuple
    valuation: int = 0

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("GSeries needs at least one stored coefficient")

    @staticmethod
    def of(var: str, values: Sequence, valuation: int = 0) -> "GSeries":
        return GSeries(var, tuple(v if isinstance(v, Poly) else Q(v) for v in values), valuation)

    @staticmethod
    def zero(var: str, order: int, valuation: int = 0) -> "GSeries":
        return GSeries(var, (Q(0),) * (order - valuation + 1), valuation)

    @staticmethod
    def one(var: str, order: int) -> "GSeries":
        return GSeries(var, (Q(1),) + (Q(0),) * order, 0)

    @staticmethod
    def gen(var: str, order: int) -> "GSeries":
        """The series X + O(X^{order+1})."""
        cs = [Q(0)] * (order + 1)
        cs[1] = Q(1)
        return GSeries(var, tuple(cs), 0)

    @property
    def order(self) -> int:
        return self.valuation + len(self.coeffs) - 1

    def coeff(self, n: int) -> CoefT:
        """Coefficient of X^n; raises if n exceeds the stored order."""
        if n > self.order:
            raise ValueError(f"coefficient of {self.var}^{n} beyond stored order {self.order}")
        if n < self.valuation:
            return Q(0)
        return self.coeffs[n - self.valuation]

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def true_valuation(self):
        """Index of the first nonzero stored coefficient, or None if all zero."""
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return self.valuation + i
        return None

    def _check(self, other: "GSeries"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def truncate(self, order: int) -> "GSeries":
        if order > self.order:
            raise ValueError("cannot extend a series by truncation")
        if order < self.valuation:
            return GSeries(self.var, (Q(0),), order)
        return GSeries(self.var, self.coeffs[: order - self.valuation + 1], self.valuation)

    def shift(self, n: int) -> "GSeries":
        """Multiply by X^n (exact; adjusts valuation)."""
        return GSeries(self.var, self.coeffs, self.valuation + n)

    def trim(self) -> "GSeries":
        """Drop leading stored zeros, raising the valuation accordingly."""
        tv = self.true_valuation()
        if tv is None:
            return GSeries(self.var, (Q(0),), self.order)
        return GSeries(self.var, self.coeffs[tv - self.valuation :], tv)

    def map_coeffs(self, fn: Callable) -> "GSeries":
        return GSeries(self.var, tuple(fn(c) for c in self.coeffs), self.valuation)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GSeries.of(self.var, [other] + [0] * self.order) if self.order >= 0 else GSeries.of(self.var, [other])
        self._check(other)
        order = min(self.order, other.order)
        val = min(self.valuation, other.valuation)
        out = [Q(0)] * (order - val + 1)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                n = src.valuation + i
                if n <= order:
                    out[n - val] = out[n - val] + c
        return GSeries(self.var, tuple(out), val)

    def __neg__(self):
        return GSeries(self.var, tuple(-c for c in self.coeffs), self.valuation)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Q(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __radd__(self, other):
        return self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return GSeries(self.var, tuple(c * other for c in self.coeffs), self.valuation)
        self._check(other)
        # a = A + O(X^{Na+1}) with A starting at val_a: the product is reliable
        # up to min(Na + val_b, Nb + val_a).
        order = min(self.order + other.valuation, other.order + self.valuation)
        val = self.valuation + other.valuation
        out = [Q(0)] * (order - val + 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            na = self.valuation + i
            for j, b in enumerate(other.coeffs):
                n = na + other.valuation + j
                if n > order:
                    break
                if not _is_zero(b):
                    out[n - val] = out[n - val] + a * b
        return GSeries(self.var, tuple(out), val)

    __rmul__ = __mul__

    def inverse(self) -> "GSeries":
        """Multiplicative inverse 1/self, reliable to the matching order."""
        t = self.trim()
        if t.is_zero():
            raise ZeroDivisionError("division by series that is zero to stored order")
        v = t.valuation
        rel = len(t.coeffs) - 1  # relative order of the unit part
        lead = t.coeffs[0]
        if isinstance(lead, Poly):
            raise TypeError("cannot invert a series with polynomial leading coefficient")
        inv0 = 1 / lead
        out = [Q(0)] * (rel + 1)
        out[0] = inv0
        # b * out = 1: convolution recurrence
        for n in range(1, rel + 1):
            s = Q(0)
            for k in range(1, n + 1):
                s += t.coeffs[k] * out[n - k]
            out[n] = -inv0 * s
        return GSeries(self.var, tuple(out), -v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Q(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return GSeries(self.var, tuple(c / q for c in self.coeffs), self.valuation)
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = GSeries.one(self.var, self.order - self.valuation)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, GSeries):
            return NotImplemented
        if self.var != other.var:
            return False
        lo = min(self.valuation, other.valuation)
        hi = min(self.order, other.order)
        return all(self.coeff(n) == other.coeff(n) for n in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.var, self.coeffs, self.valuation))

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            n = self.valuation + i
            cs = f"({c})" if isinstance(c, Poly) else str(c)
            parts.append(cs if n == 0 else f"{cs}*{self.var}^{n}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.order + 1})"


# ---------------------------------------------------------------------------
# Series operations
# ---------------------------------------------------------------------------


def series_arith(a: GSeries, b: GSeries, op: str) -> GSeries:
    """Dispatch add/sub/mul/div on two series (same variable)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def series_compose(f: GSeries, h: GSeries) -> GSeries:
    """f(h) for h with valuation >= 1; Horner over the stored coefficients."""
    if f.valuation < 0:
        raise ValueError("composition needs a non-Laurent outer series")
    tv = h.true_valuation()
    if tv is not None and tv < 1:
        raise ValueError("inner series must have zero constant term")
    order = min(f.order, h.order)
    acc = GSeries.zero(h.var, order)
    for c in reversed(f.coeffs):
        acc = acc * h
        if acc.order > order:
            acc = acc.truncate(order)
        acc = acc + GSeries.of(h.var, [c] + [0] * order)
    if f.valuation:
        acc = acc * (h.truncate(order) ** f.valuation)
    return acc.truncate(order)


def series_sqrt(a: GSeries) -> GSeries:
    """Square root of a series with constant term 1."""
    a = a.trim()
    if a.valuation != 0 or a.coeff(0) != 1:
        raise ValueError("series_sqrt requires constant term 1")
    order = a.order
    s = GSeries.one(a.var, order)
    # Newton: s <- (s + a/s)/2, doubling correct order each pass
    known = 0
    while known < order:
        s = (s + a / s) * Q(1, 2)
        s = s.truncate(order)
        known = max(2 * known + 1, 1)
    return s


def series_reversion(f: GSeries) -> GSeries:
    """h with f(h(X)) = X to the stored order; f(0) = 0, f'(0) != 0."""
    if f.valuation < 0 or (f.valuation == 0 and not _is_zero(f.coeff(0))):
        raise ValueError("reversion requires zero constant term")
    c1 = f.coeff(1)
    if _is_zero(c1):
        raise ValueError("reversion requires nonzero linear coefficient")
    order = f.order
    h = GSeries.of(f.var, [0, 1 / c1] + [0] * (order - 1))
    # Newton iteration h <- h - (f(h) - X)/f'(h)
    fp = _series_derivative(f)
    X = GSeries.gen(f.var, order)
    for _ in range(order.bit_length() + 1):
        r = (series_compose(f, h) - X).trim()
        if r.is_zero():
            break
        # r has true valuation >= 2 and it doubles per pass, which keeps the
        # correction reliable to `order` despite fp having one order less.
        h = (h - r / series_compose(fp, h)).truncate(order)
    r = series_compose(f, h) - X
    if not r.is_zero():
        raise ArithmeticError("reversion failed to converge to stored order")
    return h


def _series_derivative(f: GSeries) -> GSeries:
    out = []
    for i, c in enumerate(f.coeffs):
        n = f.valuation + i
        out.append(n * c)
    if f.valuation == 0:
        out = out[1:] or [Q(0)]
        return GSeries(f.var, tuple(out), 0)
    return GSeries(f.var, tuple(out), f.valuation - 1)


def series_newton_root(F: Sequence[GSeries], y0) -> GSeries:
    """Unique series root y(X) of F(y, X) = 0 with y(0) = y0.

    ``F`` is given as coefficients of powers of y: F = sum_j F[j] * y^j where
    each F[j] is a GSeries in X.  Requires a simple root at X = 0, i.e.
    F(y0, 0) = 0 and dF/dy(y0, 0) != 0.
    """
    if not F:
        raise ValueError("empty polynomial")
    var = F[0].var
    order = min(f.order for f in F)
    y0 = Q(y0)

    def ev(cs: Sequence[GSeries], y: GSeries) -> GSeries:
        acc = GSeries.zero(var, order)
        for c in reversed(cs):
            acc = (acc * y + c).truncate(order)
        return acc

    dF = [j * F[j] for j in range(1, len(F))]
    y = GSeries.of(var, [y0] + [0] * order)
    f0 = ev(F, y)
    if not _is_zero(f0.coeff(0)):
        raise ValueError("F(y0, 0) != 0: bad seed")
    d0 = ev(dF, y)
    if _is_zero(d0.coeff(0)):
        raise ValueError("dF/dy(y0, 0) = 0: root at X=0 is not simple")
    for _ in range(order.bit_length() + 2):
        r = ev(F, y)
        if r.is_zero():
            break
        y = (y - r / ev(dF, y)).truncate(order)
    if not ev(F, y).is_zero():
        raise ArithmeticError("Newton iteration failed to reach stored order")
    return y


def lagrange_interpolate(points: Sequence[tuple], degree_bound: int, var: str = "alpha") -> Poly:
    """Exact interpolating polynomial through ``points`` (abscissae distinct).

    Needs at least ``degree_bound + 1`` points; uses exactly that many.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    pts = [(Q(x), Q(y) if not isinstance(y, Poly) else y) for x, y in points]
    if len(pts) < degree_bound + 1:
        raise ValueError(f"need {degree_bound + 1} points, got {len(pts)}")
    pts = pts[: degree_bound + 1]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissae")
    result = Poly((), var)
    for i, (xi, yi) in enumerate(pts):
        basis = Poly.of([1], var)
        denom = Q(1)
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = basis * Poly.of([-xj, 1], var)
            denom *= xi - xj
        result = result + basis * (yi / denom)
    return result
