"""The three geometric 2-cocycles (function, vector field, mixing),
evaluated as residue sums over the marked points, plus the checks that
make them useful: the cocycle identity, locality windows, coboundary
equivalence, and the two readings of L-invariance.

Conventions.  Integration over the separating cycle is the sum of the
residues at the marked points; each evaluation also verifies that this
matches minus the residue at infinity.  The connections R and T are
chart data in the affine coordinate: rational functions with poles only
at the marked points (T additionally with at most a first-order pole at
infinity, which for a rational function means numerator degree at most
denominator degree plus one).  R = T = 0 is admissible in this chart
and is the default.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .basis import FormElement, make_basis
from .factored import terms_derivative, terms_mul, terms_scale
from .linsolve import solve
from .ratfun import INFINITY, RationalFunction, order_at, rational_poles
from .scalars import Q, QZERO
from .structure import bracket_basis, lie_basis, lie_derivative_form

FUNCTION_SECTOR = "FUNCTION"
VECTOR_SECTOR = "VECTOR"
MIXED_SECTOR = "MIXED"


def _validated_connection(geom, value, max_infinity_pole=None):
    if not isinstance(value, RationalFunction):
        value = RationalFunction.const(value)
    allowed = set(geom.punctures)
    for pole in rational_poles(value):
        if pole not in allowed:
            raise ValueError(f"connection has a pole at {pole}, not a marked point")
    if max_infinity_pole is not None and not value.is_zero():
        if order_at(value, INFINITY) < -max_infinity_pole:
            raise ValueError(f"connection pole order at infinity exceeds {max_infinity_pole}")
    return value


@dataclass(frozen=True)
class ProjectiveConnection:
    geometry: object
    value: RationalFunction = field(default_factory=lambda: RationalFunction.const(0))

    def __post_init__(self):
        object.__setattr__(self, "value", _validated_connection(self.geometry, self.value))

    def terms(self):
        from .basis import form_from_rational

        return form_from_rational(self.geometry, 0, self.value).terms


@dataclass(frozen=True)
class AffineConnection:
    geometry: object
    value: RationalFunction = field(default_factory=lambda: RationalFunction.const(0))

    def __post_init__(self):
        object.__setattr__(
            self, "value", _validated_connection(self.geometry, self.value, max_infinity_pole=1)
        )

    def terms(self):
        from .basis import form_from_rational

        return form_from_rational(self.geometry, 0, self.value).terms


def _contour_sum(geom, terms):
    """Sum of residues over the marked points, verified against minus
    the residue at infinity."""
    total = QZERO
    for point in geom.punctures:
        for t in terms:
            total += t.residue_at(point)
    at_inf = QZERO
    for t in terms:
        at_inf += t.residue_at(INFINITY)
    assert total + at_inf == 0, "residue sum over all points must vanish"
    return total


def cocycle_A(g, h):
    """gamma(g, h) = (1/2pi i) \\oint g dh for two functions."""
    if g.weight != 0 or h.weight != 0:
        raise ValueError("function cocycle takes two weight-0 elements")
    if g.geometry != h.geometry:
        raise ValueError("geometry mismatch")
    return _contour_sum(g.geometry, terms_mul(g.terms, terms_derivative(h.terms)))


def cocycle_L(e, f, connection=None):
    """gamma(e, f) = oint( (e~''' f~ - e~ f~''')/2 - R (e~' f~ - e~ f~') ) dz."""
    if e.weight != -1 or f.weight != -1:
        raise ValueError("vector field cocycle takes two weight -1 elements")
    if e.geometry != f.geometry:
        raise ValueError("geometry mismatch")
    et, ft = e.terms, f.terms
    d1e, d1f = terms_derivative(et), terms_derivative(ft)
    d3e = terms_derivative(terms_derivative(d1e))
    d3f = terms_derivative(terms_derivative(d1f))
    half = Q(1, 2)
    terms = terms_scale(terms_mul(d3e, ft), half) + terms_scale(terms_mul(et, d3f), -half)
    if connection is not None and not connection.value.is_zero():
        rt = connection.terms()
        diff = terms_mul(d1e, ft) + terms_scale(terms_mul(et, d1f), -1)
        terms = terms + terms_scale(terms_mul(rt, diff), -1)
    return _contour_sum(e.geometry, terms)


def cocycle_mix(e, g, connection=None):
    """gamma(e, g) = oint( e~ g'' + T e~ g' ) dz for a vector field and a
    function; the extension to (g, e) ordering is minus this value."""
    if e.weight != -1 or g.weight != 0:
        raise ValueError("mixing cocycle takes a vector field and a function")
    if e.geometry != g.geometry:
        raise ValueError("geometry mismatch")
    d1g = terms_derivative(g.terms)
    terms = terms_mul(e.terms, terms_derivative(d1g))
    if connection is not None and not connection.value.is_zero():
        terms = terms + terms_mul(connection.terms(), terms_mul(e.terms, d1g))
    return _contour_sum(e.geometry, terms)


@dataclass(frozen=True)
class DOpElement:
    """Element (g, e) of the differential operator algebra of degree at
    most one: a function plus a vector field."""

    function: FormElement
    vector_field: FormElement

    def __post_init__(self):
        if self.function.weight != 0 or self.vector_field.weight != -1:
            raise ValueError("need a weight-0 and a weight -1 component")
        if self.function.geometry != self.vector_field.geometry:
            raise ValueError("geometry mismatch")


def dop_bracket(x, y):
    """[(g1,e1),(g2,e2)] = (e1.g2 - e2.g1, [e1,e2])."""
    from .structure import bracket_form

    fun = lie_derivative_form(x.vector_field, y.function) - lie_derivative_form(y.vector_field, x.function)
    return DOpElement(fun, bracket_form(x.vector_field, y.vector_field))


def dop_cocycle(x, y, projective=None, affine=None):
    """The full local cocycle of the degree-one operator algebra: the
    function and vector parts plus the antisymmetrized mixing part."""
    return (
        cocycle_A(x.function, y.function)
        + cocycle_L(x.vector_field, y.vector_field, projective)
        + cocycle_mix(x.vector_field, y.function, affine)
        - cocycle_mix(y.vector_field, x.function, affine)
    )


@lru_cache(maxsize=None)
def gamma_A_basis(geom, n, p, m, r):
    return cocycle_A(make_basis(geom, 0, n, p), make_basis(geom, 0, m, r))


@lru_cache(maxsize=None)
def gamma_L_basis(geom, n, p, m, r, connection=None):
    return cocycle_L(make_basis(geom, -1, n, p), make_basis(geom, -1, m, r), connection)


@lru_cache(maxsize=None)
def gamma_mix_basis(geom, n, p, m, r, connection=None):
    return cocycle_mix(make_basis(geom, -1, n, p), make_basis(geom, 0, m, r), connection)


def check_cocycle_identity(gamma, bracket, triples):
    """True iff gamma([x,y],z) + gamma([y,z],x) + gamma([z,x],y) = 0 for
    every sampled triple."""
    for x, y, z in triples:
        total = gamma(bracket(x, y), z) + gamma(bracket(y, z), x) + gamma(bracket(z, x), y)
        if total != 0:
            return False
    return True


@dataclass(frozen=True)
class LocalityWindow:
    M1: int
    M2: int

    def __post_init__(self):
        if self.M2 > self.M1:
            raise ValueError("window must satisfy M2 <= M1")


def _support_bounds(geom, gamma, weights, window):
    lo, hi = window
    lam1, lam2 = weights
    found = []
    for n in range(lo, hi + 1):
        for p in geom.point_indices():
            f = make_basis(geom, lam1, n, p)
            for m in range(lo, hi + 1):
                for r in geom.point_indices():
                    if gamma(f, make_basis(geom, lam2, m, r)):
                        found.append(n + m)
    if not found:
        return None
    return (max(found), min(found))


def check_locality(geom, gamma, weights, window, growth=2):
    """Tightest total-degree window [M2, M1] supporting the cocycle on
    basis pairs, with the stability assertion that scanning a larger
    index window finds nothing new.  None if the cocycle vanishes on the
    whole scan."""
    lo, hi = window
    small = _support_bounds(geom, gamma, weights, (lo, hi))
    large = _support_bounds(geom, gamma, weights, (lo - growth, hi + growth))
    assert small == large, "locality window must be stable under window growth"
    if small is None:
        return None
    return LocalityWindow(*small)


def _sector_pairs(geom, sector, window):
    lo, hi = window
    degrees = [(n, p) for n in range(lo, hi + 1) for p in geom.point_indices()]
    if sector == VECTOR_SECTOR:
        for n, p in degrees:
            for m, r in degrees:
                yield (-1, n, p), (-1, m, r)
    elif sector == FUNCTION_SECTOR:
        for n, p in degrees:
            for m, r in degrees:
                yield (0, n, p), (0, m, r)
    elif sector == MIXED_SECTOR:
        for n, p in degrees:
            for m, r in degrees:
                yield (-1, n, p), (0, m, r)
    else:
        raise ValueError(f"unknown sector {sector!r}")


def _sector_bracket(geom, left, right):
    """Basis bracket inside a sector, as an expansion in the target
    weight: [e,e] -> weight -1, [e,A] -> weight 0, [A,A] -> 0."""
    lam1, n, p = left
    lam2, m, r = right
    if lam1 == -1 and lam2 == -1:
        return bracket_basis(geom, n, p, m, r)
    if lam1 == -1 and lam2 == 0:
        return lie_basis(geom, 0, n, p, m, r)
    if lam1 == 0 and lam2 == 0:
        return None
    raise ValueError("unsupported sector pair")


def coboundary_equivalent(geom, sector, gamma1, gamma2, phi, window):
    """Whether gamma1 - gamma2 equals the coboundary of phi on all basis
    pairs of the sector within the window.  phi is a map from basis
    indices (n, p) of the bracket target to rationals; missing indices
    count as zero."""
    for left, right in _sector_pairs(geom, sector, window):
        f = make_basis(geom, *left)
        g = make_basis(geom, *right)
        diff = gamma1(f, g) - gamma2(f, g)
        br = _sector_bracket(geom, left, right)
        want = QZERO
        if br is not None:
            for key, c in br.coeffs.items():
                want += c * Q(phi.get(key, 0))
        if diff != want:
            return False
    return True


def find_coboundary(geom, sector, gamma1, gamma2, window):
    """Solve for a linear functional phi with gamma1 - gamma2 = phi o
    bracket on the sector's window pairs.  Returns the phi dict, or None
    when the difference is not a coboundary there."""
    pairs = list(_sector_pairs(geom, sector, window))
    unknowns = []
    seen = {}
    rows = []
    rhs = []
    for left, right in pairs:
        br = _sector_bracket(geom, left, right)
        row = {}
        if br is not None:
            for key, c in br.coeffs.items():
                if key not in seen:
                    seen[key] = len(unknowns)
                    unknowns.append(key)
                row[seen[key]] = c
        rows.append(row)
        f = make_basis(geom, *left)
        g = make_basis(geom, *right)
        rhs.append(gamma1(f, g) - gamma2(f, g))
    ncols = len(unknowns)
    dense = []
    for row in rows:
        out = [QZERO] * ncols
        for j, c in row.items():
            out[j] = c
        dense.append(out)
    x = solve(dense, rhs)
    if x is None:
        return None
    return {key: x[j] for key, j in seen.items() if x[j]}


@dataclass(frozen=True)
class LInvarianceReport:
    """Two readings of invariance of a function-pair cocycle under the
    vector field action: the derivation identity c(e.A, B) + c(A, e.B)
    = 0, and the literal identity c(e.A, B) = c(A, e.B).  Both are
    evaluated and reported; nothing is decided silently."""

    derivation: bool
    literal: bool
    witness: object = None


def check_L_invariance(samples, gamma=cocycle_A):
    derivation = True
    literal = True
    witness = None
    for e, a, b in samples:
        ea = lie_derivative_form(e, a)
        eb = lie_derivative_form(e, b)
        left = gamma(ea, b)
        right = gamma(a, eb)
        if left + right != 0:
            derivation = False
            witness = witness or (e, a, b, "derivation")
        if left != right:
            literal = False
            witness = witness or (e, a, b, "literal")
    return LInvarianceReport(derivation, literal, witness)
