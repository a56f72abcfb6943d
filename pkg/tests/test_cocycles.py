"""Geometric cocycles: frozen one-point values against the partial
fraction oracle, cocycle identity, locality, coboundaries, invariance."""
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from knalg.basis import Geometry, KNExpansion, a_function, e_field, form_from_rational, make_basis
from knalg.cocycles import (
    FUNCTION_SECTOR,
    MIXED_SECTOR,
    VECTOR_SECTOR,
    AffineConnection,
    DOpElement,
    LocalityWindow,
    ProjectiveConnection,
    check_L_invariance,
    check_cocycle_identity,
    check_locality,
    coboundary_equivalent,
    cocycle_A,
    cocycle_L,
    cocycle_mix,
    dop_bracket,
    dop_cocycle,
    find_coboundary,
)
from knalg.ratfun import RationalFunction
from knalg.scalars import Q
from knalg.structure import bracket_form

G1 = Geometry((Q(0),))
G2 = Geometry((Q(0), Q(1)))

Z = sympy.Symbol("z")


def to_sympy(form):
    rf = form.to_rational()
    num = sum(sympy.Rational(str(c)) * Z**k for k, c in enumerate(rf.num.coeffs))
    den = sum(sympy.Rational(str(c)) * Z**k for k, c in enumerate(rf.den.coeffs))
    return num / den


def partial_fraction_residue_sum(expr, points):
    """Independent oracle: expand in partial fractions with sympy and
    read off the coefficients of 1/(z - P) over the marked points."""
    total = sympy.Integer(0)
    marked = [sympy.Rational(str(p)) for p in points]
    for term in sympy.Add.make_args(sympy.apart(sympy.together(expr), Z)):
        c, rest = term.as_coeff_Mul()
        base, exp = rest.as_base_exp()
        if exp == -1 and base.is_polynomial(Z) and sympy.degree(base, Z) == 1:
            lead = base.coeff(Z, 1)
            root = -base.coeff(Z, 0) / lead
            if root in marked:
                total += c / lead
    return total


def oracle_cocycle_A(g, h):
    expr = to_sympy(g) * sympy.diff(to_sympy(h), Z)
    return partial_fraction_residue_sum(expr, g.geometry.punctures)


def oracle_cocycle_L(e, f, r_expr=0):
    ee, ff = to_sympy(e), to_sympy(f)
    expr = (
        sympy.diff(ee, Z, 3) * ff - ee * sympy.diff(ff, Z, 3)
    ) / 2 - r_expr * (sympy.diff(ee, Z) * ff - ee * sympy.diff(ff, Z))
    return partial_fraction_residue_sum(expr, e.geometry.punctures)


def oracle_cocycle_mix(e, g, t_expr=0):
    ee, gg = to_sympy(e), to_sympy(g)
    expr = ee * sympy.diff(gg, Z, 2) + t_expr * ee * sympy.diff(gg, Z)
    return partial_fraction_residue_sum(expr, e.geometry.punctures)


class TestOnePointValues:
    def test_function_cocycle(self):
        for n in range(-6, 7):
            for m in range(-6, 7):
                got = cocycle_A(a_function(G1, n, 1), a_function(G1, m, 1))
                want = m if n + m == 0 else 0
                assert got == want
                assert sympy.Rational(str(got)) == oracle_cocycle_A(
                    a_function(G1, n, 1), a_function(G1, m, 1)
                )

    def test_vector_cocycle(self):
        for n in range(-6, 7):
            e, f = e_field(G1, n, 1), e_field(G1, -n, 1)
            got = cocycle_L(e, f)
            assert got == n**3 - n
            assert sympy.Rational(str(got)) == oracle_cocycle_L(e, f)
        assert cocycle_L(e_field(G1, 2, 1), e_field(G1, 3, 1)) == 0

    def test_mixing_cocycle(self):
        for n in range(-6, 7):
            e, g = e_field(G1, n, 1), a_function(G1, -n, 1)
            got = cocycle_mix(e, g)
            assert got == n * (n + 1)
            assert sympy.Rational(str(got)) == oracle_cocycle_mix(e, g)
        assert cocycle_mix(e_field(G1, 0, 1), a_function(G1, -1, 1)) == 0

    def test_trivial_values(self):
        one = form_from_rational(G2, 0, 1)
        g = a_function(G2, -2, 1)
        assert cocycle_A(g, one) == 0
        assert cocycle_A(g, g) == 0
        e = e_field(G2, -1, 2)
        assert cocycle_L(e, e) == 0
        assert cocycle_mix(e, one) == 0


class TestConnections:
    def test_projective_validation(self):
        z = RationalFunction.x()
        ProjectiveConnection(G2, 1 / (z * (z - 1)))
        with pytest.raises(ValueError):
            ProjectiveConnection(G2, 1 / (z - 5))

    def test_affine_infinity_pole(self):
        z = RationalFunction.x()
        AffineConnection(G2, z)
        AffineConnection(G2, 1 / z + 3)
        with pytest.raises(ValueError):
            AffineConnection(G2, z * z)

    def test_connection_terms_against_oracle(self):
        z = RationalFunction.x()
        conn_r = ProjectiveConnection(G1, 2 / (z * z) + 1)
        conn_t = AffineConnection(G1, 3 / z)
        for n in (-2, 0, 1, 3):
            e, f = e_field(G1, n, 1), e_field(G1, -n - 1, 1)
            got = cocycle_L(e, f, conn_r)
            want = oracle_cocycle_L(e, f, 2 / Z**2 + 1)
            assert sympy.Rational(str(got)) == want
            g = a_function(G1, -n, 1)
            got = cocycle_mix(e, g, conn_t)
            assert sympy.Rational(str(got)) == oracle_cocycle_mix(e, g, 3 / Z)


small_coeff = st.builds(Q, st.integers(-5, 5), st.integers(1, 3))


def expansions(lam, geom, npts):
    idx = st.tuples(st.integers(-3, 3), st.integers(1, npts))
    return st.builds(
        lambda d: KNExpansion(lam, geom, d).to_form(),
        st.dictionaries(idx, small_coeff, min_size=1, max_size=2),
    )


def dop_elements(geom, npts):
    return st.builds(DOpElement, expansions(0, geom, npts), expansions(-1, geom, npts))


class TestCocycleIdentity:
    def test_vector_triples_one_point(self):
        fields = [e_field(G1, n, 1) for n in range(-2, 3)]
        triples = [(x, y, z) for x in fields for y in fields for z in fields]
        assert check_cocycle_identity(cocycle_L, bracket_form, triples)

    @given(dop_elements(G2, 2), dop_elements(G2, 2), dop_elements(G2, 2))
    @settings(max_examples=20, deadline=None)
    def test_dop_triples(self, x, y, z):
        zrf = RationalFunction.x()
        proj = ProjectiveConnection(G2, 1 / zrf)
        aff = AffineConnection(G2, 2 / (zrf - 1))

        def gamma(a, b):
            return dop_cocycle(a, b, proj, aff)

        assert check_cocycle_identity(gamma, dop_bracket, [(x, y, z)])

    @given(dop_elements(G1, 1), dop_elements(G1, 1))
    @settings(max_examples=20, deadline=None)
    def test_dop_antisymmetry(self, x, y):
        assert dop_cocycle(x, y) == -dop_cocycle(y, x)

    @given(expansions(-1, G2, 2), expansions(-1, G2, 2))
    @settings(max_examples=20, deadline=None)
    def test_vector_antisymmetry(self, e, f):
        conn = ProjectiveConnection(G2, RationalFunction.const(3))
        assert cocycle_L(e, f, conn) == -cocycle_L(f, e, conn)

    @given(expansions(0, G2, 2), expansions(0, G2, 2))
    @settings(max_examples=20, deadline=None)
    def test_function_antisymmetry(self, g, h):
        assert cocycle_A(g, h) == -cocycle_A(h, g)


class TestLocality:
    def test_one_point_windows(self):
        assert check_locality(G1, cocycle_A, (0, 0), (-5, 5)) == LocalityWindow(0, 0)
        assert check_locality(G1, cocycle_L, (-1, -1), (-5, 5)) == LocalityWindow(0, 0)
        assert check_locality(G1, cocycle_mix, (-1, 0), (-5, 5)) == LocalityWindow(0, 0)

    def test_two_point_windows_finite(self):
        for gamma, weights in (
            (cocycle_A, (0, 0)),
            (cocycle_L, (-1, -1)),
            (cocycle_mix, (-1, 0)),
        ):
            win = check_locality(G2, gamma, weights, (-5, 5))
            assert win is not None
            assert win.M2 <= 0 <= win.M1 or win.M2 <= win.M1


class TestCoboundary:
    def test_projective_shift_is_coboundary(self):
        conn = ProjectiveConnection(G1, RationalFunction.const(5))

        def with_r(e, f):
            return cocycle_L(e, f, conn)

        phi = find_coboundary(G1, VECTOR_SECTOR, with_r, cocycle_L, (-4, 4))
        assert phi is not None
        assert phi.get((-2, 1)) == 5
        assert coboundary_equivalent(G1, VECTOR_SECTOR, with_r, cocycle_L, phi, (-4, 4))

    def test_affine_shift_is_coboundary(self):
        conn = AffineConnection(G1, RationalFunction.const(7))

        def with_t(e, g):
            return cocycle_mix(e, g, conn)

        phi = find_coboundary(G1, MIXED_SECTOR, with_t, cocycle_mix, (-4, 4))
        assert phi is not None
        assert phi.get((-1, 1)) == 7
        assert coboundary_equivalent(G1, MIXED_SECTOR, with_t, cocycle_mix, phi, (-4, 4))

    def test_rescaled_cocycle_is_not(self):
        def doubled(g, h):
            return 2 * cocycle_A(g, h)

        assert find_coboundary(G1, FUNCTION_SECTOR, doubled, cocycle_A, (-3, 3)) is None

    def test_identity_trivial(self):
        assert coboundary_equivalent(G1, VECTOR_SECTOR, cocycle_L, cocycle_L, {}, (-3, 3))


class TestLInvariance:
    def test_derivation_holds_literal_fails(self):
        samples = []
        for n in (-1, 0, 1):
            for a in (-2, 1):
                for b in (-1, 2):
                    samples.append((e_field(G1, n, 1), a_function(G1, a, 1), a_function(G1, b, 1)))
        report = check_L_invariance(samples)
        assert report.derivation
        assert not report.literal
        assert report.witness is not None

    def test_two_point_samples(self):
        samples = [
            (e_field(G2, n, p), a_function(G2, a, r), a_function(G2, b, s))
            for n, a, b in ((-2, 1, 1), (0, -1, 1), (1, -2, 2))
            for p in (1, 2)
            for r in (1, 2)
            for s in (1, 2)
        ]
        assert check_L_invariance(samples).derivation

    def test_zero_field(self):
        zero = form_from_rational(G1, -1, 0)
        report = check_L_invariance([(zero, a_function(G1, 1, 1), a_function(G1, -1, 1))])
        assert report.derivation and report.literal
