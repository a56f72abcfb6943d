"""Fermion (semi-infinite wedge) representations.

Sections of a trivial rank-r bundle are spanned by psi_{n,j,p} =
A_{n,p} (x) e_j; tensoring with a finite-dimensional g-module V gives
quadruples (n, p, j, a) enumerated linearly in ascending lexicographic
order.  Currents and vector fields act on sections as banded infinite
matrices, and on the semi-infinite wedge space by the Leibniz rule
with the diagonal part regularized against each charge sector's own
vacuum.  The failure of the regularized action to be a representation
is a scalar per sector; extract_cocycle measures it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .affine import GL, GL1, SL, MatrixElement, dg_bracket, matrix_basis
from .basis import INFINITY, a_function, e_field, expand_in_basis
from .scalars import Q, QONE, QZERO
from .structure import lie_basis, measure_bounds, multiply_basis


class CentralDefectError(Exception):
    """The commutator defect of the regularized action failed to be a
    scalar on a charge sector; this breaks the central-extension
    property and indicates a real bug."""


def linear_index(n, p, j, a, shape):
    """Position of the quadruple (n, p, j, a) in ascending
    lexicographic order; blocks of size N*r*dimV per degree n."""
    npoints, rank, dimv = shape
    if not (1 <= p <= npoints and 0 <= j < rank and 1 <= a <= dimv):
        raise ValueError(f"index ({n},{p},{j},{a}) out of range for shape {shape}")
    block = npoints * rank * dimv
    return n * block + ((p - 1) * rank + j) * dimv + (a - 1)


def linear_index_inverse(M, shape):
    npoints, rank, dimv = shape
    block = npoints * rank * dimv
    n, rest = divmod(M, block)
    pj, a1 = divmod(rest, dimv)
    p1, j = divmod(pj, rank)
    return (n, p1 + 1, j, a1 + 1)


def _basis_coordinates(tag, size, x):
    """Coordinates of x in matrix_basis(tag, size)."""
    if tag in (GL, GL1):
        return tuple(x.entries[i][j] for i in range(size) for j in range(size))
    coords = [x.entries[i][j] for i in range(size) for j in range(size) if i != j]
    partial = QZERO
    for i in range(size - 1):
        partial = partial + x.entries[i][i]
        coords.append(partial)
    return tuple(coords)


@dataclass(frozen=True)
class RepresentationData:
    """A finite-dimensional g-module (images of the standard matrix
    basis) together with the bundle rank and an optional logarithmic
    connection form (an r x r matrix of weight-1 elements with at most
    simple poles at the marked points and at infinity)."""

    geometry: object
    tag: str
    size: int
    rank: int
    dim_v: int
    tau_images: tuple
    connection_form: object = None

    def __post_init__(self):
        base = matrix_basis(self.tag, self.size)
        if len(self.tau_images) != len(base):
            raise ValueError("one image per basis matrix required")
        for img in self.tau_images:
            if img.size != self.dim_v:
                raise ValueError("image size must be dim_v")
        for x in base:
            for y in base:
                lhs = self.tau(x.bracket(y))
                rhs = self.tau(x).bracket(self.tau(y))
                if lhs.entries != rhs.entries:
                    raise ValueError("tau is not a Lie algebra homomorphism")
        if self.connection_form is not None:
            rows = self.connection_form
            if len(rows) != self.rank or any(len(r) != self.rank for r in rows):
                raise ValueError("connection form must be rank x rank")
            for row in rows:
                for w in row:
                    if w.weight != 1:
                        raise ValueError("connection entries must have weight 1")
                    for q in self.geometry.punctures:
                        if w.exact_function_order_at(q) < -1:
                            raise ValueError("connection pole order exceeds 1")
                    ordinf = w.exact_function_order_at(INFINITY)
                    if ordinf is not math.inf and ordinf - 2 < -1:
                        raise ValueError("connection pole order exceeds 1 at infinity")

    @classmethod
    def fundamental(cls, geometry, tag, size, rank=1, connection_form=None):
        base = matrix_basis(tag, size)
        return cls(geometry, tag, size, rank, size, tuple(base), connection_form)

    def tau(self, x):
        coords = _basis_coordinates(self.tag, self.size, x)
        acc = None
        for c, img in zip(coords, self.tau_images):
            term = img.scale(c)
            acc = term if acc is None else acc + term
        return acc

    @property
    def shape(self):
        return (self.geometry.npoints, self.rank, self.dim_v)

    @property
    def block_size(self):
        npoints, rank, dimv = self.shape
        return npoints * rank * dimv


def section_basis(geom, rep, n, j, p):
    """The vector-valued function psi_{n,j,p}: on a trivial bundle this
    is A_{n,p} in slot j.  The defining asymptotics are asserted: order
    n + 1 - delta_{p,q} at P_q with unit leading coefficient at P_p,
    and order -nN - N + 1 at infinity."""
    if not (0 <= j < rep.rank):
        raise ValueError("component index out of range")
    base = a_function(geom, n, p)
    out = tuple(base if i == j else base.scale(0) for i in range(rep.rank))
    npoints = geom.npoints
    for q in range(1, npoints + 1):
        want = n + 1 - (1 if q == p else 0)
        assert out[j].exact_function_order_at(geom.point(q)) == want
    assert out[j].exact_function_order_at(INFINITY) == -n * npoints - npoints + 1
    return out


@dataclass(frozen=True)
class WedgeMonomial:
    """psi_{N_0} ^ psi_{N_1} ^ ... with N_k strictly increasing and
    N_k = k + charge for all k past the stored prefix.  The prefix is
    trimmed so its last entry differs from the tail value."""

    charge: int
    occupancy: tuple = ()

    def __post_init__(self):
        occ = tuple(self.occupancy)
        while occ and occ[-1] == len(occ) - 1 + self.charge:
            occ = occ[:-1]
        object.__setattr__(self, "occupancy", occ)
        for k in range(1, len(occ)):
            if occ[k - 1] >= occ[k]:
                raise ValueError("occupancy must be strictly increasing")
        if occ and occ[-1] >= len(occ) + self.charge:
            raise ValueError("occupancy incompatible with the tail")
        assert self.degree <= 0

    @classmethod
    def vacuum(cls, charge=0):
        return cls(charge, ())

    @property
    def tail_start(self):
        return len(self.occupancy) + self.charge

    @property
    def degree(self):
        m = self.charge
        return sum(v - k - m for k, v in enumerate(self.occupancy))

    def occupied(self, index):
        return index >= self.tail_start or index in self.occupancy

    def replace(self, old, new):
        """Substitute occupant old by new, returning (sign, monomial);
        None if old is absent or new already occupied."""
        if not self.occupied(old) or (new != old and self.occupied(new)):
            return None
        if new == old:
            return 1, self
        occ = list(self.occupancy)
        top = max(old, new)
        if top >= self.tail_start:
            occ.extend(range(self.tail_start, top + 1))
        lo, hi = min(old, new), max(old, new)
        crossings = sum(1 for v in occ if lo < v < hi)
        occ.remove(old)
        occ.append(new)
        occ.sort()
        return (-1 if crossings % 2 else 1), WedgeMonomial(self.charge, tuple(occ))

    def __repr__(self):
        return f"WedgeMonomial(charge={self.charge}, occupancy={list(self.occupancy)})"


def monomial_degree(phi):
    return phi.degree


def _partitions(d, cap=None):
    """Nonincreasing positive integer tuples summing to d."""
    if d == 0:
        yield ()
        return
    if cap is None or cap > d:
        cap = d
    for first in range(cap, 0, -1):
        for rest in _partitions(d - first, first):
            yield (first,) + rest


def enumerate_monomials(charge, degree):
    """All monomials of the given charge and degree; for degree -d the
    deficits N_k - k - m form a partition of d, so the count is the
    partition number p(d) independent of the block size."""
    if degree > 0:
        return []
    out = []
    for part in _partitions(-degree):
        occ = tuple(i + charge - part[i] for i in range(len(part)))
        out.append(WedgeMonomial(charge, occ))
    return out


class WedgeVector:
    """Finite rational combination of monomials of one common charge."""

    __slots__ = ("charge", "terms")

    def __init__(self, charge, terms):
        self.charge = charge
        clean = {}
        for mono, c in terms.items():
            if mono.charge != charge:
                raise ValueError("charge mixing in a wedge vector")
            c = Q(c)
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def zero(cls, charge=0):
        return cls(charge, {})

    @classmethod
    def monomial(cls, mono, coeff=QONE):
        return cls(mono.charge, {mono: Q(coeff)})

    def coefficient(self, mono):
        return self.terms.get(mono, QZERO)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.charge != other.charge:
            raise ValueError("charge mixing in a wedge vector")
        merged = dict(self.terms)
        for mono, c in other.terms.items():
            merged[mono] = merged.get(mono, QZERO) + c
        return WedgeVector(self.charge, merged)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Q(c)
        return WedgeVector(self.charge, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, WedgeVector):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "WedgeVector(0)"
        bits = ", ".join(f"{c}*{m!r}" for m, c in sorted(
            self.terms.items(), key=lambda kv: kv[0].occupancy))
        return f"WedgeVector({bits})"


class BandedOperator:
    """Infinite matrix with finitely many diagonals, built lazily one
    column at a time.  Every produced column is checked to stay inside
    the band [M + band_lo, M + band_hi]."""

    __slots__ = ("band_lo", "band_hi", "_column_fn", "_cache")

    def __init__(self, band_lo, band_hi, column_fn):
        if band_lo > band_hi:
            raise ValueError("empty band")
        self.band_lo = band_lo
        self.band_hi = band_hi
        self._column_fn = column_fn
        self._cache = {}

    def column(self, M):
        got = self._cache.get(M)
        if got is None:
            raw = self._column_fn(M)
            got = tuple((row, c) for row, c in raw if c)
            for row, _ in got:
                assert self.band_lo <= row - M <= self.band_hi, "band violated"
            self._cache[M] = got
        return got

    def diagonal(self, M):
        for row, c in self.column(M):
            if row == M:
                return c
        return QZERO

    @classmethod
    def zero(cls):
        return cls(0, 0, lambda M: ())

    @classmethod
    def unit(cls, I, J, coeff=QONE):
        """The matrix unit E_{IJ} scaled by coeff."""
        delta = I - J
        c = Q(coeff)
        return cls(min(delta, 0), max(delta, 0), lambda M: ((I, c),) if M == J else ())

    def scale(self, c):
        c = Q(c)
        if not c:
            return BandedOperator.zero()
        return BandedOperator(
            self.band_lo, self.band_hi,
            lambda M: tuple((row, c * v) for row, v in self.column(M)),
        )

    @classmethod
    def combine(cls, ops):
        ops = [op for op in ops if op is not None]
        if not ops:
            return cls.zero()
        if len(ops) == 1:
            return ops[0]
        lo = min(op.band_lo for op in ops)
        hi = max(op.band_hi for op in ops)

        def col(M):
            acc = {}
            for op in ops:
                for row, c in op.column(M):
                    acc[row] = acc.get(row, QZERO) + c
            return tuple(sorted(acc.items()))

        return cls(lo, hi, col)

    def __add__(self, other):
        return BandedOperator.combine([self, other])


@lru_cache(maxsize=None)
def _grading_bounds(geom):
    return measure_bounds(geom, (-3, 3))


def matrix_of_current(x, A, rep):
    """The banded matrix of x (x) A on sections: (A psi_{n,p,j}) (x)
    tau(x) v_a, columns expanded through the cached structure tables."""
    if x.size != rep.size or x.tag != rep.tag:
        raise ValueError("matrix does not live in the representation's algebra")
    if A.weight != 0 or A.geometry != rep.geometry:
        raise ValueError("current needs a weight-0 element on the same geometry")
    tx = rep.tau(x)
    aexp = expand_in_basis(A)
    if not aexp.coeffs or tx.is_zero():
        return BandedOperator.zero()
    geom = rep.geometry
    shape = rep.shape
    block = rep.block_size
    amin, amax = aexp.min_degree(), aexp.max_degree()
    kbound = _grading_bounds(geom)[0]
    lo = amin * block - (block - 1)
    hi = (amax + kbound) * block + (block - 1)

    def col(M):
        n, p, j, a = linear_index_inverse(M, shape)
        prod = {}
        for (k, q), c in aexp.coeffs.items():
            for key, v in multiply_basis(geom, k, q, n, p).coeffs.items():
                prod[key] = prod.get(key, QZERO) + c * v
        out = []
        for (n2, p2), c in prod.items():
            for b in range(rep.dim_v):
                coeff = c * tx.entries[b][a - 1]
                if coeff:
                    out.append((linear_index(n2, p2, j, b + 1, shape), coeff))
        return sorted(out)

    return BandedOperator(lo, hi, col)


def matrix_of_field(e, rep):
    """The banded matrix of the covariant derivative along e:
    nabla_e psi = (e . psi) + <e, omega> psi componentwise."""
    if e.weight != -1 or e.geometry != rep.geometry:
        raise ValueError("field needs a weight -1 element on the same geometry")
    geom = rep.geometry
    eexp = expand_in_basis(e)
    gexp = None
    if rep.connection_form is not None:
        gexp = [
            [expand_in_basis(e * w) for w in row] for row in rep.connection_form
        ]
    degs = list(eexp.degrees())
    if gexp is not None:
        for row in gexp:
            degs.extend(d for g in row for d in g.degrees())
    if not degs:
        return BandedOperator.zero()
    shape = rep.shape
    block = rep.block_size
    _, _, mbound = _grading_bounds(geom)
    kbound = _grading_bounds(geom)[0]
    lo = min(degs) * block - (block - 1)
    hi = (max(degs) + max(kbound, mbound)) * block + (block - 1)

    def col(M):
        n, p, j, a = linear_index_inverse(M, shape)
        out = []
        lie = {}
        for (k, q), c in eexp.coeffs.items():
            for key, v in lie_basis(geom, 0, k, q, n, p).coeffs.items():
                lie[key] = lie.get(key, QZERO) + c * v
        for (n2, p2), c in lie.items():
            out.append((linear_index(n2, p2, j, a, shape), c))
        if gexp is not None:
            for i in range(rep.rank):
                prod = {}
                for (k, q), c in gexp[i][j].coeffs.items():
                    for key, v in multiply_basis(geom, k, q, n, p).coeffs.items():
                        prod[key] = prod.get(key, QZERO) + c * v
                for (n2, p2), c in prod.items():
                    out.append((linear_index(n2, p2, i, a, shape), c))
        acc = {}
        for row, c in out:
            acc[row] = acc.get(row, QZERO) + c
        return tuple(sorted(acc.items()))

    return BandedOperator(lo, hi, col)


@lru_cache(maxsize=None)
def _basis_current_op(rep, x, n, p):
    return matrix_of_current(x, a_function(rep.geometry, n, p), rep)


@lru_cache(maxsize=None)
def _basis_field_op(rep, n, p):
    return matrix_of_field(e_field(rep.geometry, n, p), rep)


def matrix_of_dg(x, rep):
    """Banded matrix of the non-central part of a current plus vector
    field element."""
    ops = []
    for (n, p), mat in x.current.components.items():
        ops.append(_basis_current_op(rep, mat, n, p))
    for (n, p), c in x.vector_field.coeffs.items():
        ops.append(_basis_field_op(rep, n, p).scale(c))
    return BandedOperator.combine(ops)


def wedge_apply(op, v):
    """Leibniz action of a banded operator on a wedge vector.  Each
    off-diagonal matrix unit moves one occupant with the permutation
    sign; the diagonal acts by the eigenvalue regularized against the
    sector vacuum: [index occupied] - [index >= charge]."""
    acc = {}
    reach = -min(op.band_lo, 0)
    for mono, coeff in v.terms.items():
        m = mono.charge
        occupants = list(mono.occupancy)
        occupants.extend(range(mono.tail_start, mono.tail_start + reach))
        for J in occupants:
            for row, c in op.column(J):
                if row == J:
                    continue
                hit = mono.replace(J, row)
                if hit is None:
                    continue
                sign, swapped = hit
                acc[swapped] = acc.get(swapped, QZERO) + coeff * c * sign
        dsum = QZERO
        for I in mono.occupancy:
            if I < m:
                dsum += op.diagonal(I)
        for I in range(m, mono.tail_start):
            if I not in mono.occupancy:
                dsum -= op.diagonal(I)
        if dsum:
            acc[mono] = acc.get(mono, QZERO) + coeff * dsum
    return WedgeVector(v.charge, acc)


def _defect_apply(op_x, op_y, op_xy, v):
    xy = wedge_apply(op_x, wedge_apply(op_y, v))
    yx = wedge_apply(op_y, wedge_apply(op_x, v))
    return xy - yx - wedge_apply(op_xy, v)


def extract_cocycle(x, y, rep, charge=0, checks=5):
    """The scalar by which [r(X), r(Y)] - r([X, Y]) acts on the charge
    sector; verified on the vacuum and on other monomials, raising
    CentralDefectError if the defect fails to be scalar."""
    op_x = matrix_of_dg(x, rep)
    op_y = matrix_of_dg(y, rep)
    op_xy = matrix_of_dg(dg_bracket(x, y), rep)
    vac = WedgeMonomial.vacuum(charge)
    vvac = WedgeVector.monomial(vac)
    got = _defect_apply(op_x, op_y, op_xy, vvac)
    scalar = got.coefficient(vac)
    if not (got - vvac.scale(scalar)).is_zero():
        raise CentralDefectError("defect not scalar on the vacuum")
    done = 0
    degree = -1
    while done < checks:
        for mono in enumerate_monomials(charge, degree):
            probe = WedgeVector.monomial(mono)
            got = _defect_apply(op_x, op_y, op_xy, probe)
            if not (got - probe.scale(scalar)).is_zero():
                raise CentralDefectError(
                    f"defect not scalar: monomial {mono!r} disagrees with the vacuum"
                )
            done += 1
            if done >= checks:
                break
        degree -= 1
    return scalar
