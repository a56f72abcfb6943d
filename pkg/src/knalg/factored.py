"""Rational functions kept in factored form poly(z) * prod_i (z - a_i)^{e_i}.

Every object this library manipulates (basis elements, their products,
derivatives, cocycle integrands) has all finite poles at known rational
points, so keeping the pole factors explicit makes orders and residues
cheap: no gcd reduction and no root finding, just short series products.
Sums do not stay in this class; higher layers carry tuples of terms.
"""
from __future__ import annotations

import math

from .poly import Polynomial, binom_series, series_mul
from .ratfun import INFINITY, LaurentExpansion, RationalFunction
from .scalars import Q, QONE, QZERO


def qpow(base, exponent):
    if exponent >= 0:
        return base**exponent
    return (QONE / base) ** (-exponent)


class PoleProduct:
    """poly * prod (z - a)^e with integer exponents of either sign.

    The polynomial part is never factored; orders at the marked points
    still come out right because valuations of the polynomial are added
    to the stored exponents.  A zero polynomial part means the zero
    function.
    """

    __slots__ = ("poly", "factors")

    def __init__(self, poly, factors=()):
        if not isinstance(poly, Polynomial):
            poly = Polynomial.const(poly)
        items = dict(factors) if not isinstance(factors, dict) else factors
        if poly.is_zero():
            self.poly = poly
            self.factors = ()
            return
        self.poly = poly
        self.factors = tuple(sorted((Q(a), int(e)) for a, e in items.items() if e))

    def is_zero(self):
        return self.poly.is_zero()

    def __eq__(self, other):
        if not isinstance(other, PoleProduct):
            return NotImplemented
        return self.poly == other.poly and self.factors == other.factors

    def __hash__(self):
        return hash((self.poly, self.factors))

    def __repr__(self):
        fac = "".join(f"*(z-{a})^{e}" for a, e in self.factors)
        return f"PoleProduct({self.poly!r}{fac})"

    def exponent(self, a):
        a = Q(a)
        for point, e in self.factors:
            if point == a:
                return e
        return 0

    def __mul__(self, other):
        if not isinstance(other, PoleProduct):
            return self.scale(other)
        merged = dict(self.factors)
        for a, e in other.factors:
            merged[a] = merged.get(a, 0) + e
        return PoleProduct(self.poly * other.poly, merged)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        return PoleProduct(self.poly.scale(Q(c)), dict(self.factors))

    def __neg__(self):
        return self.scale(-1)

    def derivative(self):
        """d/dz, closed in this class:

        (p * prod(z-a)^e)' = q * prod(z-a)^{e-1} with
        q = p' * prod(z-a) + p * sum_i e_i * prod_{j!=i}(z-a_j).
        """
        if not self.factors:
            return PoleProduct(self.poly.derivative())
        full = Polynomial((1,))
        for a, _ in self.factors:
            full = full * Polynomial.linear(a)
        q = self.poly.derivative() * full
        for i, (a, e) in enumerate(self.factors):
            part = Polynomial.const(Q(e))
            for j, (b, _) in enumerate(self.factors):
                if j != i:
                    part = part * Polynomial.linear(b)
            q = q + self.poly * part
        return PoleProduct(q, {a: e - 1 for a, e in self.factors})

    def order_at(self, at):
        if self.is_zero():
            return math.inf
        if at is INFINITY:
            total = sum(e for _, e in self.factors)
            return -self.poly.degree - total
        a = Q(at)
        return self.poly.valuation_at(a) + self.exponent(a)

    def _unit_series_at(self, a, count):
        """Series of t^{-order} * f(a + t): starts with a nonzero constant."""
        v = self.poly.valuation_at(a)
        series = list(self.poly.taylor_at(a, v + count)[v:])
        while len(series) < count:
            series.append(QZERO)
        prefactor = QONE
        for b, e in self.factors:
            if b == a:
                continue
            prefactor *= qpow(a - b, e)
            series = series_mul(series, binom_series(QONE / (a - b), e, count), count)
        return [prefactor * c for c in series]

    def _unit_series_at_infinity(self, count):
        """Series in w of w^{-order_infinity} * f(1/w)."""
        series = list(self.poly.reversed_coeffs())
        series = series[:count] + [QZERO] * max(0, count - len(series))
        for a, e in self.factors:
            series = series_mul(series, binom_series(-a, e, count), count)
        return series

    def laurent_at(self, at, terms):
        if terms < 1:
            raise ValueError("terms must be >= 1")
        if self.is_zero():
            return LaurentExpansion(at, 0, (), terms - 1)
        lead = self.order_at(at)
        if at is INFINITY:
            series = self._unit_series_at_infinity(terms)
        else:
            series = self._unit_series_at(Q(at), terms)
        return LaurentExpansion(at, lead, tuple(series), lead + terms - 1)

    def residue_at(self, at):
        """Residue of the 1-form f dz at a rational point or at INFINITY."""
        if self.is_zero():
            return QZERO
        if at is INFINITY:
            # f dz = -w^{-2} f(1/w) dw = -w^{ord - 2} S(w) dw with S(0) != 0,
            # so the residue is -S[1 - ord]
            idx = 1 - self.order_at(INFINITY)
            if idx < 0:
                return QZERO
            return -self._unit_series_at_infinity(idx + 1)[idx]
        a = Q(at)
        lead = self.order_at(a)
        if lead >= 0:
            return QZERO
        return self._unit_series_at(a, -lead)[-lead - 1]

    def eval(self, a):
        a = Q(a)
        value = self.poly.eval(a)
        for b, e in self.factors:
            base = a - b
            if not base:
                if e < 0:
                    raise ZeroDivisionError(f"pole at {a}")
                return QZERO
            value *= qpow(base, e)
        return value

    def to_rational(self):
        num = self.poly
        den = Polynomial((1,))
        for a, e in self.factors:
            fac = Polynomial.linear(a) ** abs(e)
            if e > 0:
                num = num * fac
            else:
                den = den * fac
        return RationalFunction(num, den)


def terms_residue_at(terms, at):
    """Residue at one point of a sum of PoleProduct terms."""
    total = QZERO
    for term in terms:
        total += term.residue_at(at)
    return total


def terms_scale(terms, c):
    return tuple(term.scale(c) for term in terms)


def terms_derivative(terms):
    return tuple(term.derivative() for term in terms)


def terms_mul(left, right):
    return tuple(a * b for a in left for b in right)


def terms_to_rational(terms):
    total = RationalFunction.const(0)
    for term in terms:
        total = total + term.to_rational()
    return total
