"""Graded bases of meromorphic tensor fields on the sphere, holomorphic
away from N marked points and infinity.

For weight lam and N distinct finite points P_1..P_N the degree-n basis
element attached to the point P_p is

    f_{n,p} = c * (z - P_p)^{n - lam} * prod_{i != p} (z - P_i)^{n + 1 - lam},
    c chosen so the leading coefficient at P_p is 1.

These satisfy ord_{P_i} f_{n,p} = (n + 1 - lam) - delta_{i,p} and carry
form order -N(n+1-lam) + 1 - 2*lam at infinity, which makes the pairing
below dual: <f^lam_{n,p}, f^{1-lam}_{m,r}> = delta_{n,-m} delta_{p,r}.

Weights lam=0 (functions) and lam=-1 (vector fields) are indexed
directly; the conventional weight 1 and 2 families are indexed with the
opposite sign of n, see omega_form and quadratic_form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .factored import PoleProduct, qpow, terms_mul, terms_to_rational
from .poly import Polynomial
from .ratfun import INFINITY, RationalFunction, order_at, rational_poles
from .scalars import Q, QONE, QZERO


@dataclass(frozen=True)
class Geometry:
    """N distinct finite marked points; infinity is the implicit out-point."""

    punctures: tuple

    def __post_init__(self):
        pts = tuple(Q(a) for a in self.punctures)
        if not pts:
            raise ValueError("need at least one marked point")
        if len(set(pts)) != len(pts):
            raise ValueError("marked points must be distinct")
        object.__setattr__(self, "punctures", pts)

    @property
    def npoints(self):
        return len(self.punctures)

    def point(self, p):
        """1-based access, matching the index convention of the basis."""
        if not 1 <= p <= len(self.punctures):
            raise IndexError(f"point index {p} out of range 1..{len(self.punctures)}")
        return self.punctures[p - 1]

    def point_indices(self):
        return range(1, len(self.punctures) + 1)


class FormElement:
    """A weight-lam tensor field f(z) (dz)^lam, stored as a sum of
    factored pole products in the affine chart.  All finite poles sit at
    the marked points by construction."""

    __slots__ = ("weight", "geometry", "terms")

    def __init__(self, weight, geometry, terms):
        self.weight = int(weight)
        self.geometry = geometry
        self.terms = tuple(t for t in terms if not t.is_zero())

    def is_zero(self):
        return not self.terms or self.to_rational().is_zero()

    def __eq__(self, other):
        """Equality as functions (not as term lists)."""
        if not isinstance(other, FormElement):
            return NotImplemented
        if self.weight != other.weight or self.geometry != other.geometry:
            return False
        return self.to_rational() == other.to_rational()

    def __hash__(self):
        return hash((self.weight, self.geometry, self.to_rational()))

    def __repr__(self):
        return f"FormElement(weight={self.weight}, {self.to_rational()!r})"

    def __add__(self, other):
        if self.weight != other.weight or self.geometry != other.geometry:
            raise ValueError("can only add forms of equal weight on the same geometry")
        return FormElement(self.weight, self.geometry, self.terms + other.terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Q(c)
        if not c:
            return FormElement(self.weight, self.geometry, ())
        return FormElement(self.weight, self.geometry, tuple(t.scale(c) for t in self.terms))

    def __mul__(self, other):
        if not isinstance(other, FormElement):
            return self.scale(other)
        if self.geometry != other.geometry:
            raise ValueError("mismatched geometries")
        return FormElement(
            self.weight + other.weight, self.geometry, terms_mul(self.terms, other.terms)
        )

    def __rmul__(self, other):
        return self.scale(other)

    def eval(self, a):
        total = QZERO
        for t in self.terms:
            total += t.eval(a)
        return total

    def to_rational(self):
        return terms_to_rational(self.terms)

    def function_order_at(self, at):
        """Order of the coefficient function.  Exact for single-term
        elements; for sums a guaranteed lower bound (cancellation can
        only raise the order)."""
        if not self.terms:
            return math.inf
        if len(self.terms) == 1:
            return self.terms[0].order_at(at)
        return min(t.order_at(at) for t in self.terms)

    def form_order_at(self, at):
        """Order as a tensor: at infinity (dz)^lam contributes -2*lam."""
        base = self.function_order_at(at)
        if at is INFINITY and base is not math.inf:
            return base - 2 * self.weight
        return base

    def exact_function_order_at(self, at):
        """Order with cancellation between terms taken into account."""
        if len(self.terms) <= 1:
            return self.function_order_at(at)
        return order_at(self.to_rational(), at)


def basis_order_at_infinity(geom, lam, n):
    """Form order at infinity of the degree-n basis element."""
    return -geom.npoints * (n + 1 - lam) + 1 - 2 * lam


@lru_cache(maxsize=None)
def make_basis(geom, lam, n, p):
    """The degree-n weight-lam basis element attached to marked point p."""
    points = geom.punctures
    pp = geom.point(p)
    c = QONE
    factors = {pp: n - lam}
    for i, pi in enumerate(points, start=1):
        if i == p:
            continue
        factors[pi] = n + 1 - lam
        c *= qpow(pp - pi, -(n + 1 - lam))
    element = FormElement(lam, geom, (PoleProduct(Polynomial.const(c), factors),))
    term = element.terms[0]
    for i, pi in enumerate(points, start=1):
        want = (n + 1 - lam) - (1 if i == p else 0)
        assert term.order_at(pi) == want, f"order at P_{i} off for (lam={lam}, n={n}, p={p})"
    assert term.order_at(INFINITY) - 2 * lam == basis_order_at_infinity(geom, lam, n)
    assert term.laurent_at(pp, 1).coefficients[0] == 1, "leading coefficient must be 1"
    return element


def a_function(geom, n, p):
    """Weight 0 basis element A_{n,p}."""
    return make_basis(geom, 0, n, p)


def e_field(geom, n, p):
    """Weight -1 basis element e_{n,p}."""
    return make_basis(geom, -1, n, p)


def omega_form(geom, n, p):
    """Weight 1 element omega^{n,p}, dual to A_{n,p}: indexed as f^1_{-n,p}."""
    return make_basis(geom, 1, -n, p)


def quadratic_form(geom, n, p):
    """Weight 2 element Omega^{n,p}, dual to e_{n,p}: indexed as f^2_{-n,p}."""
    return make_basis(geom, 2, -n, p)


def kn_pairing(f, g):
    """Pairing of a weight-lam and a weight-(1-lam) element: the sum of
    the residues of f*g dz over the marked points.  Every call also
    checks that this equals minus the residue at infinity, which is the
    arithmetic's own consistency certificate (all poles are accounted
    for and residues were computed right)."""
    if f.weight + g.weight != 1:
        raise ValueError("pairing needs weights summing to 1")
    if f.geometry != g.geometry:
        raise ValueError("mismatched geometries")
    product = terms_mul(f.terms, g.terms)
    total = QZERO
    for point in f.geometry.punctures:
        for term in product:
            total += term.residue_at(point)
    at_inf = QZERO
    for term in product:
        at_inf += term.residue_at(INFINITY)
    assert total + at_inf == 0, "residue sum over all points must vanish"
    return total


def expansion_window(f):
    """Degree window [n_min, n_max] outside which every basis coefficient
    of f vanishes.  Uses per-term order bounds, so the window is safe
    (possibly slightly wide) even when terms cancel."""
    if not f.terms:
        return (0, -1)
    lam = f.weight
    nn = f.geometry.npoints
    n_min = min(f.function_order_at(pt) for pt in f.geometry.punctures) + lam
    o_inf = f.form_order_at(INFINITY)
    n_max = lam + (-o_inf - 2 * lam) // nn
    return (n_min, n_max)


class KNExpansion:
    """An element written in the graded basis: weight, geometry and a
    map (n, p) -> coefficient with only nonzero entries stored."""

    __slots__ = ("weight", "geometry", "coeffs")

    def __init__(self, weight, geometry, coeffs):
        self.weight = int(weight)
        self.geometry = geometry
        self.coeffs = {k: Q(v) for k, v in coeffs.items() if v}

    @classmethod
    def zero(cls, geom, lam):
        return cls(lam, geom, {})

    @classmethod
    def basis(cls, geom, lam, n, p):
        geom.point(p)
        return cls(lam, geom, {(n, p): QONE})

    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def coefficient(self, n, p):
        return self.coeffs.get((n, p), QZERO)

    def degrees(self):
        return sorted({n for n, _ in self.coeffs})

    def min_degree(self):
        return min(n for n, _ in self.coeffs)

    def max_degree(self):
        return max(n for n, _ in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, KNExpansion):
            return NotImplemented
        return (
            self.weight == other.weight
            and self.geometry == other.geometry
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.weight, self.geometry, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        body = ", ".join(f"({n},{p}): {c}" for (n, p), c in sorted(self.coeffs.items()))
        return f"KNExpansion(weight={self.weight}, {{{body}}})"

    def __add__(self, other):
        if self.weight != other.weight or self.geometry != other.geometry:
            raise ValueError("mismatched expansions")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, QZERO) + v
        return KNExpansion(self.weight, self.geometry, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Q(c)
        return KNExpansion(self.weight, self.geometry, {k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def to_form(self):
        terms = []
        for (n, p), c in sorted(self.coeffs.items()):
            for t in make_basis(self.geometry, self.weight, n, p).terms:
                terms.append(t.scale(c))
        return FormElement(self.weight, self.geometry, terms)


def expand_in_basis(f, verify=False):
    """Write a form element in the graded basis of its weight.  The
    coefficient of f_{n,p} is the pairing with the dual element
    f^{1-lam}_{-n,p}.  With verify=True the expansion is resummed and
    compared with f as a rational function."""
    lam = f.weight
    geom = f.geometry
    coeffs = {}
    n_min, n_max = expansion_window(f)
    for n in range(n_min, n_max + 1):
        for p in geom.point_indices():
            c = kn_pairing(f, make_basis(geom, 1 - lam, -n, p))
            if c:
                coeffs[(n, p)] = c
    result = KNExpansion(lam, geom, coeffs)
    if verify:
        assert result.to_form().to_rational() == f.to_rational(), "expansion must resum to f"
    return result


def form_from_rational(geom, lam, rf):
    """Interpret a rational function as a weight-lam element.  Its finite
    poles must lie at the marked points."""
    if not isinstance(rf, RationalFunction):
        rf = RationalFunction.const(rf)
    if rf.is_zero():
        return FormElement(lam, geom, ())
    allowed = set(geom.punctures)
    factors = {}
    den = rf.den
    for pole, mult in rational_poles(rf).items():
        if pole not in allowed:
            raise ValueError(f"pole at {pole} is not a marked point")
        factors[pole] = -mult
        for _ in range(mult):
            den = den // Polynomial.linear(pole)
    assert den.degree == 0 and den.lead() == 1
    return FormElement(lam, geom, (PoleProduct(rf.num, factors),))
