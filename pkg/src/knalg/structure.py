"""Products, brackets and module actions in the graded basis, the
measured almost-grading bounds, and the triangular decompositions.

Degree conventions.  All three operations send degrees (n, m) into the
window [n+m, n+m+bound] with leading terms

    A_{n,p} . A_{m,r}   = d_pr A_{n+m,p}       + higher,
    [e_{n,p}, e_{m,r}]  = d_pr (m-n) e_{n+m,p} + higher,
    e_{n,p} . f_{m,r}   = d_pr (m + lam*n) f_{n+m,p} + higher,

where d_pr is the Kronecker delta.  The lower edge n+m is exact on the
sphere and asserted on every expansion; the upper bounds (K, L, M) are
measured per geometry and checked for stability under window growth.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .basis import (
    FormElement,
    KNExpansion,
    basis_order_at_infinity,
    expand_in_basis,
    make_basis,
)
from .factored import terms_derivative, terms_mul, terms_scale

FUNCTION_PRODUCT = "FUNCTION_PRODUCT"
VECTOR_BRACKET = "VECTOR_BRACKET"
FIELD_ON_FORM = "FIELD_ON_FORM"

STANDARD = "STANDARD"
ENLARGED_STAR = "ENLARGED_STAR"
DEPTH = "DEPTH"


def bracket_form(e, f):
    """[e, f] as a vector field: (e~ f~' - f~ e~') d/dz."""
    if e.weight != -1 or f.weight != -1:
        raise ValueError("bracket takes two vector fields")
    if e.geometry != f.geometry:
        raise ValueError("geometry mismatch")
    terms = terms_mul(e.terms, terms_derivative(f.terms)) + terms_scale(
        terms_mul(f.terms, terms_derivative(e.terms)), -1
    )
    return FormElement(-1, e.geometry, terms)


def lie_derivative_form(e, f):
    """Action of the vector field e on a weight-lam element:
    (e~ g' + lam e~' g)(dz)^lam."""
    if e.weight != -1:
        raise ValueError("first argument must be a vector field")
    if e.geometry != f.geometry:
        raise ValueError("geometry mismatch")
    lam = f.weight
    terms = terms_mul(e.terms, terms_derivative(f.terms))
    if lam:
        terms = terms + terms_scale(terms_mul(terms_derivative(e.terms), f.terms), lam)
    return FormElement(lam, e.geometry, terms)


def multiply(a, b):
    """Product of two functions, expanded in the weight-0 basis."""
    if a.weight != 0 or b.weight != 0:
        raise ValueError("multiply takes two weight-0 elements")
    return expand_in_basis(a * b)


def bracket(e, f):
    """Lie bracket of two vector fields, expanded in the weight -1 basis."""
    return expand_in_basis(bracket_form(e, f))


def lie_derivative(e, f):
    """e acting on f, expanded in the basis of f's weight."""
    return expand_in_basis(lie_derivative_form(e, f))


def _checked(result, n, p, m, r, leading):
    """Almost-grading postconditions shared by the cached tables: support
    starts exactly at n+m, and the degree-(n+m) coefficient is the
    predicted leading term."""
    if not result.is_zero():
        assert result.min_degree() >= n + m, "term below degree n+m: almost-grading violated"
    for s in result.geometry.point_indices():
        want = leading if (p == r and s == p) else 0
        assert result.coefficient(n + m, s) == want, "leading term mismatch"
    return result


@lru_cache(maxsize=None)
def multiply_basis(geom, n, p, m, r):
    result = multiply(make_basis(geom, 0, n, p), make_basis(geom, 0, m, r))
    return _checked(result, n, p, m, r, 1)


@lru_cache(maxsize=None)
def bracket_basis(geom, n, p, m, r):
    result = bracket(make_basis(geom, -1, n, p), make_basis(geom, -1, m, r))
    return _checked(result, n, p, m, r, m - n)


@lru_cache(maxsize=None)
def lie_basis(geom, lam, n, p, m, r):
    result = lie_derivative(make_basis(geom, -1, n, p), make_basis(geom, lam, m, r))
    return _checked(result, n, p, m, r, m + lam * n)


def _table_entry(kind, geom, lam, n, p, m, r):
    if kind == FUNCTION_PRODUCT:
        return multiply_basis(geom, n, p, m, r)
    if kind == VECTOR_BRACKET:
        return bracket_basis(geom, n, p, m, r)
    if kind == FIELD_ON_FORM:
        return lie_basis(geom, lam, n, p, m, r)
    raise ValueError(f"unknown table kind {kind!r}")


@dataclass(frozen=True)
class StructureTable:
    """All products/brackets/actions with both degrees in a window,
    together with the measured upper bound of the almost-grading."""

    kind: str
    geometry: object
    window: tuple
    measured_bound: int
    module_weight: int = 0

    def entry(self, n, p, m, r):
        result = _table_entry(self.kind, self.geometry, self.module_weight, n, p, m, r)
        if not result.is_zero():
            assert result.max_degree() <= n + m + self.measured_bound
        return result

    def pairs(self):
        lo, hi = self.window
        for n in range(lo, hi + 1):
            for p in self.geometry.point_indices():
                for m in range(lo, hi + 1):
                    for r in self.geometry.point_indices():
                        yield n, p, m, r


def build_table(geom, kind, window, module_weight=0):
    lo, hi = window
    if lo > hi:
        raise ValueError("empty degree window")
    bound = 0
    for n in range(lo, hi + 1):
        for p in geom.point_indices():
            for m in range(lo, hi + 1):
                for r in geom.point_indices():
                    result = _table_entry(kind, geom, module_weight, n, p, m, r)
                    if not result.is_zero():
                        bound = max(bound, result.max_degree() - (n + m))
    return StructureTable(kind, geom, (lo, hi), bound, module_weight)


def measure_bounds(geom, window, growth=2):
    """Measured (K, L, M) over the window, with the stability assertion
    that growing the window by `growth` does not grow any bound."""
    lo, hi = window
    out = []
    for kind in (FUNCTION_PRODUCT, VECTOR_BRACKET, FIELD_ON_FORM):
        small = build_table(geom, kind, (lo, hi)).measured_bound
        large = build_table(geom, kind, (lo - growth, hi + growth)).measured_bound
        assert small == large, f"bound for {kind} not stable under window growth"
        out.append(small)
    return tuple(out)


@dataclass(frozen=True)
class TriangularSplit:
    variant: str
    plus: KNExpansion
    zero: KNExpansion
    minus: KNExpansion


def _membership(geom, lam, n, variant, bound=None, depth=None):
    if variant == STANDARD:
        if bound is None:
            raise ValueError("STANDARD split needs the measured bound")
        if n >= 1:
            return "plus"
        if n <= -bound - 1:
            return "minus"
        return "zero"
    if variant == ENLARGED_STAR:
        if lam not in (0, -1):
            raise ValueError("ENLARGED_STAR is defined for weights 0 and -1")
        # plus: regular at every marked point; minus: regular at infinity
        # (elements regular everywhere are constants / global fields:
        # they are put in plus, and minus is the set complement)
        if n >= lam:
            return "plus"
        if basis_order_at_infinity(geom, lam, n) >= 0:
            return "minus"
        return "zero"
    if variant == DEPTH:
        if depth is None:
            raise ValueError("DEPTH split needs the depth parameter")
        if lam == 0:
            if depth < 1:
                raise ValueError("function depth split needs depth >= 1")
            cut = depth
        elif lam == -1:
            if depth < 0:
                raise ValueError("vector field depth split needs depth >= 0")
            cut = depth + 1
        else:
            raise ValueError("DEPTH split is defined for weights 0 and -1")
        if n >= 1:
            return "plus"
        if basis_order_at_infinity(geom, lam, n) >= cut:
            return "minus"
        return "zero"
    raise ValueError(f"unknown split variant {variant!r}")


def triangular_split(x, variant, bound=None, depth=None):
    """Split an expansion into plus/zero/minus parts.  STANDARD cuts by
    degree using the measured bound; ENLARGED_STAR extends plus by the
    elements regular at the marked points and minus by those regular at
    infinity; DEPTH cuts minus by vanishing order at infinity."""
    parts = {"plus": {}, "zero": {}, "minus": {}}
    for (n, p), c in x.coeffs.items():
        side = _membership(x.geometry, x.weight, n, variant, bound, depth)
        parts[side][(n, p)] = c
    split = TriangularSplit(
        variant,
        KNExpansion(x.weight, x.geometry, parts["plus"]),
        KNExpansion(x.weight, x.geometry, parts["zero"]),
        KNExpansion(x.weight, x.geometry, parts["minus"]),
    )
    assert split.plus + split.zero + split.minus == x, "split must recombine"
    return split


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    witness: object

    def __bool__(self):
        return self.closed


def closure_check(geom, kind, variant, part, window, bound=None, depth=None):
    """Whether the selected part is closed under the operation, sampled
    over a degree window.  Returns the first offending pair as witness
    when it is not (the critical strips are generally not closed)."""
    if kind == FUNCTION_PRODUCT:
        lam = 0
    elif kind == VECTOR_BRACKET:
        lam = -1
    else:
        raise ValueError("closure check covers function products and vector brackets")
    lo, hi = window
    members = [
        (n, p)
        for n in range(lo, hi + 1)
        for p in geom.point_indices()
        if _membership(geom, lam, n, variant, bound, depth) == part
    ]
    for n, p in members:
        for m, r in members:
            result = _table_entry(kind, geom, lam, n, p, m, r)
            for h, s in result.support():
                if _membership(geom, lam, h, variant, bound, depth) != part:
                    return ClosureReport(False, ((n, p), (m, r), (h, s)))
    return ClosureReport(True, None)
