"""Casimir solvers and Delta-operator commutation checks."""

import pytest

from knalg.affine import GL1, identity_matrix
from knalg.basis import Geometry, KNExpansion
from knalg.casimir import (
    CASIMIR,
    FAIL,
    INCONCLUSIVE,
    PASS,
    SEMI_CASIMIR,
    CasimirCandidate,
    DeltaOperator,
    casimir_solve,
    check_delta_commutation,
    check_pairwise_scalar,
    gamma_extend,
    lam_weight,
    mixing_gamma_geometric,
    tail_blind,
    wedge_mixing_gamma,
)
from knalg.scalars import Q
from knalg.sugawara import sugawara_context
from knalg.wedge import RepresentationData, WedgeMonomial, WedgeVector, enumerate_monomials

G1 = Geometry((Q(0),))
REP1 = RepresentationData.fundamental(G1, GL1, 1)
ONE1 = identity_matrix(1, GL1)


def diag_gamma(k, m):
    return Q(1) if k == m else Q(0)


def triangular_gamma(k, m):
    if k == m:
        return Q(k)
    if m == k - 1:
        return Q(1)
    return Q(0)


class TestSolve:
    def test_generic_diagonal_kernel(self):
        report = casimir_solve(diag_gamma, (-3, 3))
        assert report.degenerate == ()
        assert len(report.candidates) == 1
        cand = report.candidates[0]
        assert cand.kind == CASIMIR
        assert cand.coefficients == ((0, Q(1)),)
        assert all(cand.coefficient(n) == 0 for n in range(-3, 0))

    def test_triangular_kernel(self):
        report = casimir_solve(triangular_gamma, (-3, 3))
        assert len(report.candidates) == 1
        cand = report.candidates[0]
        a0 = cand.coefficient(0)
        assert a0 != 0
        assert all(cand.coefficient(n) == 0 for n in range(-3, 0))
        assert cand.coefficient(1) == -a0
        assert cand.coefficient(2) == a0 / 2
        assert cand.coefficient(3) == -a0 / 6

    def test_geometric_diagonal_values(self):
        gamma = mixing_gamma_geometric(G1)
        for k in range(-4, 5):
            assert gamma(k, k) == -Q(k) * Q(k + 1)
            for m in range(-4, 5):
                if m != k:
                    assert gamma(k, m) == 0

    def test_geometric_kernel_dimension_two(self):
        gamma = mixing_gamma_geometric(G1)
        report = casimir_solve(gamma, (-3, 3))
        assert report.degenerate == (-1,)
        assert len(report.candidates) == 2
        support = set()
        for cand in report.candidates:
            support |= {k for k, _v in cand.coefficients}
        assert support == {-1, 0}

    def test_wedge_gamma_matches_geometric_up_to_scale(self):
        geo = mixing_gamma_geometric(G1)
        wed = wedge_mixing_gamma(REP1)
        for k in range(-3, 4):
            for m in range(-3, 4):
                assert wed(k, m) == Q(-1, 2) * geo(k, m)

    def test_wedge_kernel_matches(self):
        report = casimir_solve(wedge_mixing_gamma(REP1), (-2, 2))
        assert report.degenerate == (-1,)
        assert len(report.candidates) == 2


class TestExtend:
    def test_graded_zero_mode_is_fixed_point(self):
        gamma = mixing_gamma_geometric(G1)
        cand = gamma_extend({0: Q(1)}, gamma, 4)
        assert cand.kind == SEMI_CASIMIR
        assert cand.coefficients == ((0, Q(1)),)
        assert cand.window == (0, 4)

    def test_triangular_forward_substitution(self):
        cand = gamma_extend({0: Q(1)}, triangular_gamma, 3)
        assert cand.coefficient(0) == 1
        assert cand.coefficient(1) == -1
        assert cand.coefficient(2) == Q(1, 2)
        assert cand.coefficient(3) == Q(-1, 6)

    def test_singular_diagonal_reported(self):
        def bad(k, m):
            if k == 2 and m == 2:
                return Q(0)
            return triangular_gamma(k, m)

        with pytest.raises(ValueError, match="k = 2"):
            gamma_extend({0: Q(1)}, bad, 3)

    def test_singular_diagonal_with_zero_rhs_skipped(self):
        def sparse(k, m):
            if k == 2:
                return Q(0)
            return diag_gamma(k, m)

        cand = gamma_extend({0: Q(1), -2: Q(5)}, sparse, 3)
        assert cand.coefficient(-2) == 5
        assert cand.coefficient(2) == 0

    def test_rejects_positive_prescription(self):
        with pytest.raises(ValueError):
            gamma_extend({1: Q(1)}, diag_gamma, 3)

    def test_rejects_empty_prescription(self):
        with pytest.raises(ValueError):
            gamma_extend({0: Q(0)}, diag_gamma, 3)


def sample_vectors(charges=(0,), depth=2):
    out = []
    for charge in charges:
        for d in range(0, depth + 1):
            for mono in enumerate_monomials(charge, -d):
                out.append(WedgeVector.monomial(mono))
    return out


@pytest.fixture(scope="module")
def ctx():
    return sugawara_context(REP1)


class TestDeltaCommutation:
    def test_zero_mode_semi_casimir(self, ctx):
        cand = gamma_extend({0: Q(1)}, wedge_mixing_gamma(REP1), 16)
        delta = DeltaOperator(ctx, cand)
        report = check_delta_commutation(
            delta,
            ONE1,
            [(-1, 1), (-2, 1), (-3, 1)],
            sample_vectors((0, 1), 2),
            expect_zero=True,
        )
        assert report.status == PASS

    def test_kernel_candidate_all_scalars(self, ctx):
        cand = CasimirCandidate.from_map(CASIMIR, (-1, 8), {-1: Q(1)})
        delta = DeltaOperator(ctx, cand)
        report = check_delta_commutation(
            delta, ONE1, [(k, 1) for k in range(-2, 3)], sample_vectors((0,), 2)
        )
        assert report.status == PASS

    def test_scalar_obstruction_identity(self, ctx):
        e = KNExpansion.basis(G1, -1, 2, 1)
        delta = DeltaOperator(ctx, e)
        report = check_delta_commutation(
            delta, ONE1, [(-2, 1)], sample_vectors((0, -1), 1)
        )
        assert report.status == PASS

    def test_non_casimir_fails_zero_expectation(self, ctx):
        e = KNExpansion.basis(G1, -1, 2, 1)
        delta = DeltaOperator(ctx, e)
        report = check_delta_commutation(
            delta, ONE1, [(-2, 1)], sample_vectors((0,), 1), expect_zero=True
        )
        assert report.status == FAIL

    def test_short_window_inconclusive(self, ctx):
        cand = CasimirCandidate.from_map(SEMI_CASIMIR, (0, 0), {0: Q(1)})
        delta = DeltaOperator(ctx, cand)
        report = check_delta_commutation(
            delta, ONE1, [(-1, 1)], sample_vectors((0,), 2)
        )
        assert report.status == INCONCLUSIVE
        assert report.details

    def test_raw_expansion_is_exact(self, ctx):
        delta = DeltaOperator(ctx, KNExpansion.basis(G1, -1, 0, 1))
        report = check_delta_commutation(
            delta, ONE1, [(-1, 1)], sample_vectors((0,), 2)
        )
        assert report.status == PASS

    def test_lam_weight(self):
        assert lam_weight(ONE1) == 1
        assert lam_weight(identity_matrix(3, "GL")) == 1


class TestPairwise:
    def test_graded_pair_shares_scalar(self, ctx):
        gamma = wedge_mixing_gamma(REP1)
        d1 = DeltaOperator(ctx, gamma_extend({0: Q(1)}, gamma, 8))
        d2 = DeltaOperator(ctx, gamma_extend({-1: Q(1)}, gamma, 8))
        report = check_pairwise_scalar(d1, d2, sample_vectors((0, 1), 2))
        assert report.status == PASS
        assert report.scalar == 0

    def test_opposite_pair_scalar(self, ctx):
        gamma = wedge_mixing_gamma(REP1)
        d1 = DeltaOperator(ctx, gamma_extend({-1: Q(1)}, gamma, 8))
        d2 = DeltaOperator(ctx, KNExpansion.basis(G1, -1, 1, 1))
        report = check_pairwise_scalar(d1, d2, sample_vectors((0,), 2))
        assert report.status == PASS

    def test_short_window_inconclusive(self, ctx):
        d1 = DeltaOperator(ctx, CasimirCandidate.from_map(CASIMIR, (0, 0), {0: Q(1)}))
        d2 = DeltaOperator(ctx, KNExpansion.basis(G1, -1, -1, 1))
        report = check_pairwise_scalar(d1, d2, sample_vectors((0,), 2))
        assert report.status == INCONCLUSIVE


def test_tail_blind_bounds():
    vac = WedgeVector.monomial(WedgeMonomial.vacuum(0))
    assert tail_blind(0, (vac,), 1)
    deep = WedgeVector.monomial(enumerate_monomials(0, -2)[0])
    assert not tail_blind(0, (deep,), 1)
    assert tail_blind(8, (deep,), 1)


def test_delta_rejects_zero_field(ctx):
    with pytest.raises(ValueError):
        DeltaOperator(ctx, KNExpansion.zero(G1, -1))
