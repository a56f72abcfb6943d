"""Rational functions over the exact rationals with Laurent expansions,
vanishing orders and residues at rational points and at infinity.

Residues at infinity are always computed through the explicit coordinate
change w = 1/z (so f dz pulls back to -f(1/w) w^{-2} dw), never through
the residue theorem; that keeps the total-residue check an actual test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .poly import Polynomial, series_div
from .scalars import Q, QZERO


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(point):
    return point is INFINITY


@dataclass(frozen=True)
class LaurentExpansion:
    """Truncated Laurent expansion around a point (or infinity, in w = 1/z).

    coefficients[k] is the coefficient of order leading_order + k; the
    first coefficient is nonzero unless the function is identically zero.
    truncation_order is the last order covered (inclusive).
    """

    at: object
    leading_order: int
    coefficients: tuple
    truncation_order: int

    @property
    def is_zero(self):
        return not self.coefficients

    def coefficient(self, order):
        if self.is_zero:
            return QZERO
        if order > self.truncation_order:
            raise ValueError(f"expansion truncated below order {order}")
        if order < self.leading_order:
            return QZERO
        return self.coefficients[order - self.leading_order]


class RationalFunction:
    """Quotient of polynomials in canonical form: gcd-reduced, monic
    denominator.  Equality, hashing and arithmetic are exact."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Polynomial):
            num = Polynomial.const(num) if not isinstance(num, (list, tuple)) else Polynomial(num)
        if den is None:
            den = Polynomial((1,))
        elif not isinstance(den, Polynomial):
            den = Polynomial.const(den) if not isinstance(den, (list, tuple)) else Polynomial(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Polynomial((1,))
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lead = den.lead()
        if lead != 1:
            inv = 1 / lead
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c):
        return cls(Polynomial.const(c))

    @classmethod
    def x(cls):
        return cls(Polynomial.x())

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return f"RationalFunction({self.num!r})"
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __add__(self, other):
        other = _coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        other = _coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def scale(self, c):
        return RationalFunction(self.num.scale(c), self.den)

    def derivative(self):
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, a):
        d = self.den.eval(a)
        if not d:
            raise ZeroDivisionError(f"pole at {a}")
        return self.num.eval(a) / d


def _coerce(value):
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.const(value)


def laurent_expand(f, at, terms):
    """Laurent expansion of f around a rational point or INFINITY.

    Returns `terms` coefficients starting at the leading order.  At
    INFINITY the local coordinate is w = 1/z and orders are w-orders.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if f.is_zero():
        return LaurentExpansion(at, 0, (), terms - 1)
    if is_infinity(at):
        lead = f.den.degree - f.num.degree
        nrev = list(f.num.reversed_coeffs())
        drev = list(f.den.reversed_coeffs())
        coeffs = series_div(nrev, drev, terms)
        return LaurentExpansion(at, lead, tuple(coeffs), lead + terms - 1)
    a = Q(at)
    vn = f.num.valuation_at(a)
    vd = f.den.valuation_at(a)
    lead = vn - vd
    nser = f.num.taylor_at(a, vn + terms)[vn:]
    dser = f.den.taylor_at(a, vd + terms)[vd:]
    coeffs = series_div(nser, dser, terms)
    return LaurentExpansion(at, lead, tuple(coeffs), lead + terms - 1)


def order_at(f, at):
    """Vanishing order of f at a point (math.inf for the zero function)."""
    if f.is_zero():
        return math.inf
    if is_infinity(at):
        return f.den.degree - f.num.degree
    a = Q(at)
    return f.num.valuation_at(a) - f.den.valuation_at(a)


def residue_form(f, at):
    """Residue of the 1-form f dz at a rational point or at INFINITY."""
    if f.is_zero():
        return QZERO
    if is_infinity(at):
        # f dz = -f(1/w) w^{-2} dw; leading w-order of the pulled-back form
        lead = f.den.degree - f.num.degree - 2
        if lead >= 0:
            return QZERO
        need = -lead
        nrev = list(f.num.reversed_coeffs())
        drev = list(f.den.reversed_coeffs())
        coeffs = series_div(nrev, drev, need)
        return -coeffs[need - 1]
    a = Q(at)
    vn = f.num.valuation_at(a)
    vd = f.den.valuation_at(a)
    lead = vn - vd
    if lead >= 0:
        return QZERO
    need = -lead
    nser = f.num.taylor_at(a, vn + need)[vn:]
    dser = f.den.taylor_at(a, vd + need)[vd:]
    coeffs = series_div(nser, dser, need)
    return coeffs[need - 1]


def rational_poles(f):
    """Finite poles of f with multiplicities, {point: order}.

    Requires the denominator to split into rational linear factors;
    raises ValueError otherwise (pole locations would be irrational).
    """
    out = {}
    den = f.den
    if den.degree <= 0:
        return out
    for root in _rational_roots(den):
        mult = den.valuation_at(root)
        out[root] = mult
        for _ in range(mult):
            den = den // Polynomial.linear(root)
    if den.degree > 0:
        raise ValueError("denominator has non-rational roots")
    return out


def residue_sum_check(f):
    """Global residue check: finite residues of f dz plus the residue at
    INFINITY sum to zero.  Both sides are computed independently."""
    total = residue_form(f, INFINITY)
    for point in rational_poles(f):
        total += residue_form(f, point)
    return total == 0


def _rational_roots(poly):
    """All rational roots of a nonzero polynomial, via the rational root
    bound on a primitive integer model."""
    roots = []
    cs = list(poly.coeffs)
    # strip the root at zero first
    while cs and not cs[0]:
        if 0 not in roots:
            roots.append(QZERO)
        cs.pop(0)
    if len(cs) <= 1:
        return roots
    lcm = 1
    for c in cs:
        d = int(c.denominator)
        lcm = lcm * d // math.gcd(lcm, d)
    ints = [int(c * lcm) for c in cs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    tail, lead = abs(ints[0]), abs(ints[-1])
    stripped = Polynomial(cs)
    for p in _divisors(tail):
        for q in _divisors(lead):
            for cand in (Q(p, q), Q(-p, q)):
                if cand not in roots and not stripped.eval(cand):
                    roots.append(cand)
    return roots


def _divisors(n):
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
        if d > 10**6:
            raise ValueError("coefficient too large to factor for rational root search")
    return sorted(out)
