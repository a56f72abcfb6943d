"""Exact arithmetic layer: polynomials, rational functions, factored
pole products.  Residues and expansions are checked against sympy and
against hand-computed values."""
import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from knalg.factored import PoleProduct, qpow, terms_to_rational
from knalg.poly import Polynomial, binom_series, series_div, series_mul
from knalg.ratfun import (
    INFINITY,
    RationalFunction,
    laurent_expand,
    order_at,
    rational_poles,
    residue_form,
    residue_sum_check,
)
from knalg.scalars import Q

Z = sympy.Symbol("z")

small_q = st.builds(Q, st.integers(-9, 9), st.integers(1, 6))
small_poly = st.builds(lambda cs: Polynomial(cs), st.lists(small_q, min_size=0, max_size=5))
nonzero_poly = small_poly.filter(lambda p: not p.is_zero())


def to_sympy_poly(p):
    return sum(sympy.Rational(str(c)) * Z**k for k, c in enumerate(p.coeffs))


def to_sympy_rf(f):
    return to_sympy_poly(f.num) / to_sympy_poly(f.den)


class TestPolynomial:
    def test_basic(self):
        z = Polynomial.x()
        p = (z - 1) * (z + 1)
        assert p == Polynomial((-1, 0, 1))
        assert p.eval(Q(3)) == 8
        assert p.derivative() == Polynomial((0, 2))
        assert (z**3).degree == 3
        assert Polynomial(()).degree == -1

    @given(small_poly, small_poly, small_q)
    def test_mul_eval(self, p, q, a):
        assert (p * q).eval(a) == p.eval(a) * q.eval(a)

    @given(small_poly, nonzero_poly)
    def test_divmod_roundtrip(self, p, d):
        quo, rem = divmod(p, d)
        assert quo * d + rem == p
        assert rem.degree < d.degree or rem.is_zero()

    @given(nonzero_poly, small_q, st.integers(1, 6))
    def test_taylor_shift(self, p, a, count):
        # p(a + t) truncated: evaluating both sides at small t agrees
        shifted = p.taylor_at(a, count)
        assert len(shifted) == count
        full = p.taylor_at(a, p.degree + 1)
        assert Polynomial(full).eval(Q(1, 7)) == p.eval(a + Q(1, 7))

    @given(nonzero_poly, small_q)
    def test_valuation(self, p, a):
        v = p.valuation_at(a)
        assert p.taylor_at(a, v + 1)[v] != 0
        for k in range(v):
            assert p.taylor_at(a, v)[k] == 0

    @given(small_poly, nonzero_poly)
    def test_gcd_divides(self, p, q):
        g = p.gcd(q)
        if not p.is_zero():
            assert (p % g).is_zero()
        assert (q % g).is_zero()


class TestSeries:
    @given(st.lists(small_q, min_size=1, max_size=5), st.lists(small_q, min_size=1, max_size=5))
    def test_div_mul_roundtrip(self, a, b):
        if b[0] == 0:
            b[0] = Q(1)
        n = max(len(a), len(b))
        quo = series_div(a, b, n)
        back = series_mul(quo, b, n)
        padded = (a + [Q(0)] * n)[:n]
        assert back == padded

    @given(small_q, st.integers(0, 5))
    def test_binom_nonneg_matches_pow(self, c, e):
        got = binom_series(c, e, e + 2)
        want = Polynomial((1, c)) ** e
        padded = list(want.coeffs) + [Q(0)] * (e + 2)
        assert got == padded[: e + 2]

    @given(small_q.filter(bool), st.integers(-5, -1), st.integers(1, 6))
    def test_binom_negative_inverts(self, c, e, n):
        got = binom_series(c, e, n)
        inv = binom_series(c, -e, n)
        prod = series_mul(got, inv, n)
        assert prod[0] == 1 and all(x == 0 for x in prod[1:])


class TestRationalFunction:
    def test_canonical(self):
        z = Polynomial.x()
        f = RationalFunction(z * z - 1, z - 1)
        assert f == RationalFunction(z + 1)
        assert f.den == Polynomial((1,))
        g = RationalFunction(Polynomial((1,)), z.scale(Q(2)))
        assert g.den == z and g.num == Polynomial((Q(1, 2),))

    def test_field_ops(self):
        f = RationalFunction.x()
        g = (f - 1) / (f + 1)
        h = (f + 1) / (f - 1)
        assert g * h == RationalFunction.const(1)
        assert g + (-g) == RationalFunction.const(0)
        assert (1 / g) == h

    @given(small_poly, nonzero_poly, small_poly, nonzero_poly)
    @settings(max_examples=30)
    def test_add_eval(self, a, b, c, d):
        f = RationalFunction(a, b)
        g = RationalFunction(c, d)
        s = f + g
        pt = Q(10, 7)
        if b.eval(pt) and d.eval(pt) and s.den.eval(pt):
            assert s.eval(pt) == f.eval(pt) + g.eval(pt)

    def test_derivative_quotient_rule(self):
        z = RationalFunction.x()
        f = (z * z + 1) / (z - 2)
        want = ((z * z - 4 * z - 1)) / ((z - 2) * (z - 2))
        assert f.derivative() == want


class TestLaurentAndResidues:
    def test_expand_at_zero(self):
        z = Polynomial.x()
        f = RationalFunction(Polynomial((1,)), z * (z - 1))
        exp = laurent_expand(f, 0, 3)
        assert exp.leading_order == -1
        assert exp.coefficients == (Q(-1), Q(-1), Q(-1))
        assert exp.coefficient(-1) == -1
        assert exp.coefficient(-5) == 0
        with pytest.raises(ValueError):
            exp.coefficient(5)

    def test_expand_at_infinity(self):
        z = Polynomial.x()
        f = RationalFunction(Polynomial((1,)), z - 1)  # 1/(z-1) = w/(1-w)
        exp = laurent_expand(f, INFINITY, 3)
        assert exp.leading_order == 1
        assert exp.coefficients == (Q(1), Q(1), Q(1))

    def test_orders(self):
        z = Polynomial.x()
        f = RationalFunction((z - 1) * (z - 1), z)
        assert order_at(f, 1) == 2
        assert order_at(f, 0) == -1
        assert order_at(f, 5) == 0
        assert order_at(f, INFINITY) == -1
        assert order_at(RationalFunction.const(0), 3) == math.inf

    def test_residues_simple(self):
        z = Polynomial.x()
        f = RationalFunction(Polynomial((1,)), z * (z - 1))
        assert residue_form(f, 0) == -1
        assert residue_form(f, 1) == 1
        assert residue_form(f, INFINITY) == 0
        assert residue_form(RationalFunction(Polynomial((1,)), z), INFINITY) == -1

    def test_higher_order_pole(self):
        # res_0 z^-3 (1+z)^5 dz = C(5,2) = 10
        z = Polynomial.x()
        f = RationalFunction((z + 1) ** 5, z**3)
        assert residue_form(f, 0) == 10
        assert residue_sum_check(f)

    def test_rational_poles(self):
        z = Polynomial.x()
        f = RationalFunction(Polynomial((1,)), (z - 1) ** 2 * (z + Q(1, 2)))
        poles = rational_poles(f)
        assert poles == {Q(1): 2, Q(-1, 2): 1}
        g = RationalFunction(Polynomial((1,)), z * z - 2)
        with pytest.raises(ValueError):
            rational_poles(g)

    @given(
        st.lists(small_q, min_size=1, max_size=3).filter(lambda cs: any(cs)),
        st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3),
    )
    @settings(max_examples=40, deadline=None)
    def test_residue_theorem(self, num_coeffs, pole_spec):
        den = Polynomial((1,))
        for root, mult in pole_spec:
            den = den * Polynomial.linear(Q(root)) ** mult
        f = RationalFunction(Polynomial(num_coeffs), den)
        assert residue_sum_check(f)

    def test_against_sympy(self):
        z = Polynomial.x()
        cases = [
            RationalFunction((z + 2) ** 3, (z**2) * (z - 1) ** 4),
            RationalFunction(Polynomial((Q(1, 3), 0, 2)), (z - Q(1, 2)) ** 3 * (z + 3)),
            RationalFunction(z**5, (z - 1) * (z + 1) ** 2),
        ]
        for f in cases:
            expr = to_sympy_rf(f)
            for point in rational_poles(f):
                want = sympy.residue(expr, Z, sympy.Rational(str(point)))
                assert sympy.Rational(str(residue_form(f, point))) == want
            exp = laurent_expand(f, INFINITY, 4)
            w = sympy.Symbol("w")
            series = sympy.series(expr.subs(Z, 1 / w), w, 0, exp.truncation_order + 1).removeO()
            for k in range(exp.leading_order, exp.truncation_order + 1):
                assert sympy.Rational(str(exp.coefficient(k))) == series.coeff(w, k)


pole_points = st.lists(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3).filter(bool)),
    min_size=0,
    max_size=3,
    unique_by=lambda t: t[0],
)


class TestPoleProduct:
    def make(self, poly, spec):
        return PoleProduct(poly, {Q(a): e for a, e in spec})

    @given(nonzero_poly, pole_points)
    @settings(max_examples=40, deadline=None)
    def test_to_rational_and_eval(self, poly, spec):
        pp = self.make(poly, spec)
        f = pp.to_rational()
        pt = Q(22, 7)
        assert pp.eval(pt) == f.eval(pt)

    @given(nonzero_poly, pole_points)
    @settings(max_examples=40, deadline=None)
    def test_derivative_matches(self, poly, spec):
        pp = self.make(poly, spec)
        assert pp.derivative().to_rational() == pp.to_rational().derivative()

    @given(nonzero_poly, pole_points, nonzero_poly, pole_points)
    @settings(max_examples=30, deadline=None)
    def test_mul_matches(self, p1, s1, p2, s2):
        a = self.make(p1, s1)
        b = self.make(p2, s2)
        assert (a * b).to_rational() == a.to_rational() * b.to_rational()

    @given(nonzero_poly, pole_points)
    @settings(max_examples=40, deadline=None)
    def test_orders_and_residues_match_ratfun(self, poly, spec):
        pp = self.make(poly, spec)
        f = pp.to_rational()
        assert pp.order_at(INFINITY) == order_at(f, INFINITY)
        assert pp.residue_at(INFINITY) == residue_form(f, INFINITY)
        for a, _ in spec:
            assert pp.order_at(Q(a)) == order_at(f, Q(a))
            assert pp.residue_at(Q(a)) == residue_form(f, Q(a))

    @given(nonzero_poly, pole_points, st.integers(1, 4))
    @settings(max_examples=30, deadline=None)
    def test_laurent_matches_ratfun(self, poly, spec, terms):
        pp = self.make(poly, spec)
        f = pp.to_rational()
        for at in [Q(a) for a, _ in spec] + [INFINITY, Q(9)]:
            mine = pp.laurent_at(at, terms)
            ref = laurent_expand(f, at, terms)
            assert mine.leading_order == ref.leading_order
            assert mine.coefficients == ref.coefficients

    def test_qpow(self):
        assert qpow(Q(2, 3), 2) == Q(4, 9)
        assert qpow(Q(2, 3), -2) == Q(9, 4)
        assert qpow(Q(5), 0) == 1

    def test_zero(self):
        pp = PoleProduct(Polynomial(()), {Q(1): -2})
        assert pp.is_zero()
        assert pp.factors == ()
        assert pp.order_at(Q(1)) == math.inf
        assert pp.residue_at(Q(1)) == 0

    def test_terms_sum(self):
        z = Polynomial.x()
        a = PoleProduct(Polynomial((1,)), {Q(0): -1})
        b = PoleProduct(Polynomial((1,)), {Q(1): -1})
        total = terms_to_rational((a, b))
        assert total == RationalFunction(z.scale(Q(2)) - 1, z * (z - 1))
