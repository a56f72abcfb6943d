"""Sugawara operators on wedge sectors.

The quadratic current expression T = (1/2) sum :u_i(n,p) u^i(m,s):
omega^{n,p} omega^{m,s}, expanded over quadratic differentials, has
modes L_{k,r} whose coefficients are triple-product residues
l_{(k,r)}^{(n,p)(m,s)}.  Order counting at the marked points and at
infinity confines the nonzero coefficients to k <= n+m <= k+C with
C = 2 + floor(-2/N); annihilation of any given wedge vector by all
operators of sufficiently high degree makes the remaining sum finite.

The rescaled modes L* = -1/(2(c + kappa)) sum :uu: l represent the
vector field algebra; for reductive gl(l) the abelian and traceless
parts are handled by separate context parts and summed, T = T0 + T1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .affine import (
    GL,
    GL1,
    SL,
    CurrentElement,
    DgElement,
    MatrixElement,
    dual_basis_pair,
    identity_matrix,
)
from .basis import KNExpansion, e_field, omega_form
from .cocycles import gamma_A_basis
from .factored import terms_mul, terms_residue_at
from .ratfun import INFINITY
from .scalars import Q, QZERO
from .structure import lie_basis
from .wedge import WedgeVector, _basis_current_op, extract_cocycle, wedge_apply


class CriticalLevelError(Exception):
    """c + kappa = 0: the Sugawara rescaling does not exist."""


def coefficient_window(geom, k):
    """The band k <= n+m <= k+C outside which every triple residue
    vanishes, by counting orders at the marked points (lower end) and
    at infinity (upper end)."""
    return (k, k + 2 + (-2) // geom.npoints)


@lru_cache(maxsize=None)
def sugawara_coeff(geom, k, r, n, p, m, s):
    """Sum over the marked points of res(omega^{n,p} omega^{m,s}
    e_{k,r}); zero outside the order-counting window, which is checked
    before any residue work."""
    lo, hi = coefficient_window(geom, k)
    if not lo <= n + m <= hi:
        return QZERO
    product = terms_mul(
        terms_mul(omega_form(geom, n, p).terms, omega_form(geom, m, s).terms),
        e_field(geom, k, r).terms,
    )
    total = QZERO
    for point in geom.punctures:
        total += terms_residue_at(product, point)
    assert total + terms_residue_at(product, INFINITY) == 0
    return total


def normal_order(n, m):
    """Standard normal ordering on a pair of current degrees: keep for
    n <= m, swap otherwise.  Returns (swapped?, first degree, second)."""
    if n <= m:
        return (False, n, m)
    return (True, m, n)


@dataclass(frozen=True)
class SugawaraPart:
    """One summand of the reductive split: a subalgebra with dual
    bases for the trace form and its own level and kappa."""

    basis: tuple
    duals: tuple
    level: object
    kappa: object

    def __post_init__(self):
        object.__setattr__(self, "level", Q(self.level))
        object.__setattr__(self, "kappa", Q(self.kappa))
        if self.level + self.kappa == 0:
            raise CriticalLevelError(
                f"critical level: c = {self.level}, kappa = {self.kappa}"
            )

    @property
    def prefactor(self):
        return Q(-1, 2) / (self.level + self.kappa)


@dataclass(frozen=True)
class SugawaraContext:
    rep: object
    parts: tuple


def probe_level(rep, x, y, charge=0):
    """Empirical level: the scalar defect on the pair (x (x) A_{1,1},
    y (x) A_{-1,1}) divided by tr(xy) and by the function-cocycle
    value, oriented so that the classical free boson has level one."""
    geom = rep.geometry
    trace = x.mul(y).trace()
    if not trace:
        raise ValueError("probe pair needs tr(xy) != 0")
    zero_field = KNExpansion.zero(geom, -1)
    got = extract_cocycle(
        DgElement(CurrentElement.monomial(geom, x, 1, 1), zero_field),
        DgElement(CurrentElement.monomial(geom, y, -1, 1), zero_field),
        rep,
        charge,
        checks=2,
    )
    return got / (trace * (-gamma_A_basis(geom, 1, 1, -1, 1)))


def _retag(x, tag):
    return x if x.tag == tag else MatrixElement(x.entries, tag)


def sugawara_context(rep, level=None, charge=0):
    """Build the context for the representation's algebra: abelian
    part for gl(1), traceless part for sl(l), both for gl(l).  Levels
    are probed from the representation unless given."""
    size = rep.size
    parts = []
    if rep.tag in (GL1, GL):
        one = identity_matrix(size, rep.tag)
        c = probe_level(rep, one, one, charge) if level is None else Q(level)
        parts.append(SugawaraPart((one,), (one.scale(Q(1, size)),), c, QZERO))
    if rep.tag == SL or (rep.tag == GL and size > 1):
        basis, duals = dual_basis_pair(SL, size)
        basis = tuple(_retag(x, rep.tag) for x in basis)
        duals = tuple(_retag(x, rep.tag) for x in duals)
        h = basis[-1]
        c = probe_level(rep, h, h, charge) if level is None else Q(level)
        parts.append(SugawaraPart(basis, duals, c, Q(size)))
    return SugawaraContext(rep, tuple(parts))


def annihilation_threshold(v, block):
    """Smallest m0 such that every current or field operator of degree
    >= m0 maps v to zero: each occupant can only move to rows at least
    m*block - (block-1) above the lowest occupant, and once those are
    all inside the occupied tail nothing survives (degrees >= 1 have
    no diagonal)."""
    worst = 0
    for mono in v.terms:
        ts = mono.tail_start
        jmin = mono.occupancy[0] if mono.occupancy else ts
        worst = max(worst, (ts + block - 2 - jmin) // block + 1)
    return worst


def sugawara_annihilation_threshold(v, block):
    """L*_k v = 0 once k >= 2*m0 - 1: every normally ordered pair with
    n + m >= k has its first-acting factor of degree >= m0."""
    return 2 * annihilation_threshold(v, block) - 1


def apply_sugawara(ctx, k, r, v):
    """L*_{k,r} v: the finite normally ordered double sum with the
    -1/(2(c+kappa)) rescaling, summed over the reductive split."""
    rep = ctx.rep
    geom = rep.geometry
    if v.is_zero():
        return v
    block = rep.block_size
    mth = annihilation_threshold(v, block)
    lo, hi = coefficient_window(geom, k)
    out = WedgeVector.zero(v.charge)
    for part in ctx.parts:
        acc = WedgeVector.zero(v.charge)
        for total in range(lo, hi + 1):
            for n in range(total - mth + 1, mth):
                m = total - n
                for p in geom.point_indices():
                    for s in geom.point_indices():
                        coeff = sugawara_coeff(geom, k, r, n, p, m, s)
                        if not coeff:
                            continue
                        for u, udual in zip(part.basis, part.duals):
                            swapped, _, _ = normal_order(n, m)
                            if swapped:
                                first = _basis_current_op(rep, u, n, p)
                                second = _basis_current_op(rep, udual, m, s)
                            else:
                                first = _basis_current_op(rep, udual, m, s)
                                second = _basis_current_op(rep, u, n, p)
                            got = wedge_apply(first, v)
                            if got.is_zero():
                                continue
                            got = wedge_apply(second, got)
                            if got.is_zero():
                                continue
                            acc = acc + got.scale(coeff)
        out = out + acc.scale(part.prefactor)
    return out


def apply_T_of_field(ctx, e, v):
    """T[e] v = sum a_{k,r} L*_{k,r} v for e = sum a_{k,r} e_{k,r}."""
    if e.weight != -1:
        raise ValueError("T[] takes a weight -1 expansion")
    out = WedgeVector.zero(v.charge)
    for (k, r), a in sorted(e.coeffs.items()):
        out = out + apply_sugawara(ctx, k, r, v).scale(a)
    return out


def current_action(rep, x, A, v):
    """x(A) v for a weight-0 expansion A."""
    out = WedgeVector.zero(v.charge)
    for (n, p), c in A.coeffs.items():
        op = _basis_current_op(rep, x, n, p)
        out = out + wedge_apply(op, v).scale(c)
    return out


def check_fundamental(ctx, e, x, A, samples):
    """[T[e], x(A)] = x(e.A), checked exactly on every sample vector.
    e is a weight -1 expansion, A a weight 0 expansion."""
    rep = ctx.rep
    geom = rep.geometry
    lie = KNExpansion.zero(geom, 0)
    for (k, q), c in e.coeffs.items():
        for (n, p), a in A.coeffs.items():
            lie = lie + lie_basis(geom, 0, k, q, n, p).scale(c * a)
    for v in samples:
        xa = current_action(rep, x, A, v)
        lhs = apply_T_of_field(ctx, e, xa) - current_action(
            rep, x, A, apply_T_of_field(ctx, e, v)
        )
        rhs = current_action(rep, x, lie, v)
        if not (lhs - rhs).is_zero():
            return False
    return True
