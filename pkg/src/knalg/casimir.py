"""Casimir and semi-casimir operators on wedge sectors.

A completed vector field e = sum a_k e_k determines the operator
Delta_e = e^ - T[e], the difference between the geometric action and
the Sugawara action.  Delta_e commutes with a current x(A) up to the
scalar lam(x) gamma(e, A) built from the mixed cocycle of the module,
so e is a casimir exactly when sum_m a_m gamma(A_{-k}, e_m) = 0 for
every k != 0, and a semi-casimir when the k > 0 half holds.  The
solvers below work in a finite index window; every operator check
reports INCONCLUSIVE whenever coefficients outside the window could
still change the answer on the sampled vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .affine import CurrentElement, DgElement, identity_matrix
from .basis import KNExpansion
from .cocycles import gamma_mix_basis
from .linsolve import nullspace
from .scalars import Q, QZERO
from .sugawara import (
    annihilation_threshold,
    apply_T_of_field,
    sugawara_annihilation_threshold,
)
from .wedge import WedgeVector, _basis_current_op, _basis_field_op, extract_cocycle, wedge_apply

CASIMIR = "CASIMIR"
SEMI_CASIMIR = "SEMI_CASIMIR"

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CasimirCandidate:
    """A truncated completed vector field: coefficients a_k over the
    window, stored sparsely as sorted (k, value) pairs."""

    kind: str
    window: tuple
    coefficients: tuple

    @classmethod
    def from_map(cls, kind, window, coeffs):
        items = tuple(
            (k, Q(v)) for k, v in sorted(coeffs.items()) if Q(v) != 0
        )
        return cls(kind, (int(window[0]), int(window[1])), items)

    def coefficient(self, k):
        for kk, v in self.coefficients:
            if kk == k:
                return v
        return QZERO

    def expansion(self, geom, p=1):
        return KNExpansion(-1, geom, {(k, p): v for k, v in self.coefficients})


@dataclass(frozen=True)
class SolveReport:
    """Kernel basis of the truncated system plus the window degrees
    whose diagonal entry gamma(A_{-k}, e_k) vanishes (the equations
    that fail to pin down their own coefficient)."""

    candidates: tuple
    degenerate: tuple


def mixing_gamma_geometric(geom, p=1, connection=None):
    """gamma(A_{-k}, e_m) from the local mixed cocycle of function and
    vector field, evaluated on basis elements at the point p."""

    def gamma(k, m):
        return -gamma_mix_basis(geom, m, p, -k, p, connection)

    return gamma


@lru_cache(maxsize=None)
def wedge_mixing_gamma(rep, charge=0, p=1):
    """gamma(A_{-k}, e_m) carried by the module itself: the scalar
    defect of [identity current at A_{-k}, field e_m].

    The sector matters: the per-sector regularization shifts the mixed
    cocycle by a coboundary that cancels between two functions but not
    between a field and a function, so each charge has its own values.
    """
    geom = rep.geometry
    one = identity_matrix(rep.size, rep.tag)
    zero_field = KNExpansion.zero(geom, -1)

    @lru_cache(maxsize=None)
    def gamma(k, m):
        current = DgElement(
            CurrentElement.monomial(geom, one, -k, p), zero_field
        )
        field = DgElement(
            CurrentElement.zero(geom, rep.tag, rep.size),
            KNExpansion.basis(geom, -1, m, p),
        )
        return extract_cocycle(current, field, rep, charge, checks=2)

    return gamma


def casimir_solve(gamma, window):
    """Kernel of the truncated system sum_m a_m gamma(A_{-k}, e_m) = 0
    over all k != 0 in the window, with unknowns a_m in the window."""
    lo, hi = window
    cols = list(range(lo, hi + 1))
    rows = []
    for k in cols:
        if k == 0:
            continue
        rows.append([gamma(k, m) for m in cols])
    degenerate = tuple(k for k in cols if k != 0 and gamma(k, k) == 0)
    candidates = []
    for vec in nullspace(rows):
        coeffs = {m: c for m, c in zip(cols, vec) if c != 0}
        candidates.append(CasimirCandidate.from_map(CASIMIR, window, coeffs))
    return SolveReport(tuple(candidates), degenerate)


def gamma_extend(coeffs, gamma, hi):
    """Extend prescribed coefficients a_m, m <= 0, to a semi-casimir
    candidate: forward substitution through the k > 0 equations, whose
    matrix is triangular with diagonal gamma(A_{-k}, e_k)."""
    a = {}
    for k, v in coeffs.items():
        if k > 0:
            raise ValueError("prescribed coefficients must have degree <= 0")
        if Q(v) != 0:
            a[int(k)] = Q(v)
    if not a:
        raise ValueError("nothing to extend")
    lo = min(a)
    for k in range(1, hi + 1):
        diag = gamma(k, k)
        rhs = QZERO
        for m in range(lo, k):
            am = a.get(m)
            if am:
                rhs -= am * gamma(k, m)
        if diag == 0:
            if rhs != 0:
                raise ValueError(
                    f"degenerate positive diagonal at k = {k}: "
                    "the extension equation has no solution"
                )
            continue
        value = rhs / diag
        if value:
            a[k] = value
    return CasimirCandidate.from_map(SEMI_CASIMIR, (lo, hi), a)


class DeltaOperator:
    """Delta_e = e^ - T[e] for a finite completed field e.

    A raw expansion is taken as exact (window_top is None: there is
    nothing above it to truncate).  A solved candidate knows its
    coefficients only up to the window bound, so checks against it
    must confirm the samples are blind to anything beyond.
    """

    def __init__(self, ctx, e, p=1):
        window_top = None
        if isinstance(e, CasimirCandidate):
            window_top = e.window[1]
            e = e.expansion(ctx.rep.geometry, p)
        if e.weight != -1:
            raise ValueError("Delta takes a weight -1 expansion")
        if not e.coeffs:
            raise ValueError("Delta needs a nonzero field")
        self.ctx = ctx
        self.e = e
        self.window_top = window_top

    def conclusive_on(self, vectors):
        return self.window_top is None or tail_blind(
            self.window_top, vectors, self.ctx.rep.block_size
        )

    def field_action(self, v):
        out = WedgeVector.zero(v.charge)
        for (k, p), c in sorted(self.e.coeffs.items()):
            op = _basis_field_op(self.ctx.rep, k, p)
            out = out + wedge_apply(op, v).scale(c)
        return out

    def apply(self, v):
        return self.field_action(v) - apply_T_of_field(self.ctx, self.e, v)


def tail_blind(window_top, vectors, block):
    """True when every basis operator (field or Sugawara mode) of
    degree above the window annihilates all the given vectors, so the
    truncation cannot affect results computed on them."""
    needed = 0
    for v in vectors:
        needed = max(
            needed,
            annihilation_threshold(v, block),
            sugawara_annihilation_threshold(v, block),
        )
    return window_top >= needed - 1


@dataclass(frozen=True)
class CommutationReport:
    status: str
    details: tuple


def lam_weight(x):
    """lam(x) = tr(x) / size, the coefficient of the scalar obstruction."""
    return x.trace() / Q(x.size)


def check_delta_commutation(delta, x, a_indices, samples, mixing=None, expect_zero=False):
    """[Delta_e, x(A_{k,p})] on each sample: equal to the scalar
    lam(x) gamma(e, A) predicted by the mixed cocycle, or exactly zero
    when expect_zero is set (the semi-casimir requirement on negative
    degrees).  Exact, or INCONCLUSIVE when the window is too short for
    the samples."""
    ctx = delta.ctx
    rep = ctx.rep
    details = []
    status = PASS
    for k, p in a_indices:
        op = _basis_current_op(rep, x, k, p)
        for v in samples:
            xav = wedge_apply(op, v)
            if not delta.conclusive_on((v, xav)):
                status = INCONCLUSIVE if status != FAIL else status
                details.append(f"window too short for A_({k},{p}) sample")
                continue
            got = delta.apply(xav) - wedge_apply(op, delta.apply(v))
            if expect_zero:
                scalar = QZERO
            else:
                gamma = mixing or wedge_mixing_gamma(rep, v.charge)
                scalar = QZERO
                for (m, _mp), am in delta.e.coeffs.items():
                    scalar += am * (-gamma(-k, m))
                scalar *= lam_weight(x)
            if got != v.scale(scalar):
                status = FAIL
                details.append(
                    f"A_({k},{p}): commutator is not {scalar} * id on a sample"
                )
    return CommutationReport(status, tuple(details))


@dataclass(frozen=True)
class PairwiseReport:
    status: str
    scalar: object
    details: tuple


def check_pairwise_scalar(d1, d2, samples):
    """[Delta(e), Delta(f)] must act as one shared scalar on every
    sample vector; returns the scalar or FAIL, with INCONCLUSIVE when
    either window is too short for some sample."""
    scalar = None
    details = []
    status = PASS
    for v in samples:
        d2v = d2.apply(v)
        d1v = d1.apply(v)
        vectors = (v, d1v, d2v)
        if not (d1.conclusive_on(vectors) and d2.conclusive_on(vectors)):
            status = INCONCLUSIVE if status != FAIL else status
            details.append("window too short for a sample")
            continue
        w = d1.apply(d2v) - d2.apply(d1v)
        if v.is_zero():
            continue
        mono = next(iter(v.terms))
        s = w.coefficient(mono) / v.coefficient(mono)
        if w != v.scale(s):
            status = FAIL
            details.append("commutator is not scalar on a sample")
            continue
        if scalar is None:
            scalar = s
        elif s != scalar:
            status = FAIL
            details.append(f"scalar mismatch: {s} != {scalar}")
    return PairwiseReport(status, scalar, tuple(details))
