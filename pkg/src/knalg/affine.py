"""Matrix current algebra over the function algebra and its central
extensions: the affine algebra with bracket

    [x (x) f, y (x) g] = [x,y] (x) fg + alpha(x,y) gamma_A(f,g) t,

and the semidirect extension by vector fields with the full list of
central terms (function, vector field, and trace-weighted mixing).

Current elements are stored component-wise in the graded function
basis: a map (n, p) -> matrix.  That makes the canonical form unique,
degrees explicit, and brackets a double loop over components.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .basis import KNExpansion, basis_order_at_infinity, expand_in_basis
from .cocycles import gamma_A_basis, gamma_L_basis, gamma_mix_basis
from .linsolve import invert
from .scalars import Q, QONE, QZERO
from .structure import bracket_basis, lie_basis, multiply_basis, triangular_split

GL = "GL"
SL = "SL"
GL1 = "GL1"

TRACE = "TRACE"
TRACE_TRACE = "TRACE_TRACE"


def _as_entries(entries):
    rows = tuple(tuple(Q(c) for c in row) for row in entries)
    size = len(rows)
    if size < 1 or any(len(row) != size for row in rows):
        raise ValueError("entries must form a nonempty square matrix")
    return rows


@dataclass(frozen=True)
class MatrixElement:
    entries: tuple
    tag: str = GL

    def __post_init__(self):
        rows = _as_entries(self.entries)
        object.__setattr__(self, "entries", rows)
        if self.tag == SL and self.trace() != 0:
            raise ValueError("SL matrices must be traceless")
        if self.tag == GL1 and len(rows) != 1:
            raise ValueError("GL1 matrices have size 1")
        if self.tag not in (GL, SL, GL1):
            raise ValueError(f"unknown algebra tag {self.tag!r}")

    @property
    def size(self):
        return len(self.entries)

    def trace(self):
        return sum((self.entries[i][i] for i in range(len(self.entries))), QZERO)

    def is_zero(self):
        return all(not c for row in self.entries for c in row)

    def __add__(self, other):
        self._compatible(other)
        return MatrixElement(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
            self.tag,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Q(c)
        return MatrixElement(tuple(tuple(c * a for a in row) for row in self.entries), self.tag)

    def mul(self, other):
        """Associative matrix product (leaves SL, so the result is tagged
        GL unless both factors are GL1)."""
        self._compatible(other)
        n = self.size
        rows = tuple(
            tuple(
                sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), QZERO)
                for j in range(n)
            )
            for i in range(n)
        )
        return MatrixElement(rows, GL1 if self.tag == other.tag == GL1 else GL)

    def bracket(self, other):
        """Commutator; traceless, so a common tag is preserved."""
        xy = self.mul(other)
        yx = other.mul(self)
        tag = self.tag if self.tag == other.tag else GL
        return MatrixElement(
            tuple(
                tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(xy.entries, yx.entries)
            ),
            tag,
        )

    def _compatible(self, other):
        if self.size != other.size:
            raise ValueError("matrix size mismatch")


def identity_matrix(size, tag=GL):
    return MatrixElement(
        tuple(tuple(QONE if i == j else QZERO for j in range(size)) for i in range(size)), tag
    )


def matrix_basis(tag, size):
    """Standard basis of the matrix algebra: all E_ij for gl, the E_ij
    (i != j) together with E_ii - E_{i+1,i+1} for sl."""
    def unit(i, j):
        return tuple(
            tuple(QONE if (a, b) == (i, j) else QZERO for b in range(size)) for a in range(size)
        )

    if tag == GL1:
        if size != 1:
            raise ValueError("GL1 has size 1")
        return [MatrixElement(unit(0, 0), GL1)]
    if tag == GL:
        return [MatrixElement(unit(i, j), GL) for i in range(size) for j in range(size)]
    if tag == SL:
        if size < 2:
            raise ValueError("SL needs size >= 2")
        out = [MatrixElement(unit(i, j), SL) for i in range(size) for j in range(size) if i != j]
        for i in range(size - 1):
            rows = tuple(
                tuple(
                    (QONE if (a == b == i) else -QONE if (a == b == i + 1) else QZERO)
                    for b in range(size)
                )
                for a in range(size)
            )
            out.append(MatrixElement(rows, SL))
        return out
    raise ValueError(f"unknown algebra tag {tag!r}")


def alpha_form(x, y, form=TRACE):
    """The invariant bilinear form: TRACE, TRACE_TRACE, or a rational
    pair (a, b) meaning a*tr(xy) + b*tr(x)tr(y)."""
    if form == TRACE:
        return x.mul(y).trace()
    if form == TRACE_TRACE:
        return x.trace() * y.trace()
    a, b = form
    return Q(a) * x.mul(y).trace() + Q(b) * x.trace() * y.trace()


class CurrentElement:
    """An element of g tensor A, stored as matrix components on the
    graded function basis."""

    __slots__ = ("geometry", "tag", "size", "components")

    def __init__(self, geometry, tag, size, components):
        self.geometry = geometry
        self.tag = tag
        self.size = size
        comps = {}
        for key, x in components.items():
            if x.tag != tag or x.size != size:
                raise ValueError("component tag or size mismatch")
            if not x.is_zero():
                comps[key] = x
        self.components = comps

    @classmethod
    def zero(cls, geometry, tag, size):
        return cls(geometry, tag, size, {})

    @classmethod
    def from_terms(cls, geometry, terms):
        """Build from (matrix, weight-0 FormElement) pairs, expanding the
        functions in the basis and merging components."""
        if not terms:
            raise ValueError("need at least one term or use zero()")
        tag = terms[0][0].tag
        size = terms[0][0].size
        comps = {}
        for x, f in terms:
            if f.weight != 0 or f.geometry != geometry:
                raise ValueError("terms need weight-0 elements on the same geometry")
            for key, c in expand_in_basis(f).coeffs.items():
                add = x.scale(c)
                comps[key] = comps[key] + add if key in comps else add
        return cls(geometry, tag, size, comps)

    @classmethod
    def monomial(cls, geometry, x, n, p=1):
        """x tensor A_{n,p}."""
        geometry.point(p)
        return cls(geometry, x.tag, x.size, {(n, p): x})

    def is_zero(self):
        return not self.components

    def support(self):
        return sorted(self.components)

    def component(self, n, p):
        return self.components.get((n, p))

    def __eq__(self, other):
        if not isinstance(other, CurrentElement):
            return NotImplemented
        return (
            self.geometry == other.geometry
            and self.tag == other.tag
            and self.size == other.size
            and self.components == other.components
        )

    def __repr__(self):
        keys = ", ".join(f"({n},{p})" for n, p in self.support())
        return f"CurrentElement(tag={self.tag}, support=[{keys}])"

    def __add__(self, other):
        self._compatible(other)
        comps = dict(self.components)
        for key, x in other.components.items():
            comps[key] = comps[key] + x if key in comps else x
        return CurrentElement(self.geometry, self.tag, self.size, comps)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return CurrentElement(
            self.geometry, self.tag, self.size, {k: x.scale(c) for k, x in self.components.items()}
        )

    def _compatible(self, other):
        if (
            self.geometry != other.geometry
            or self.tag != other.tag
            or self.size != other.size
        ):
            raise ValueError("current algebra mismatch")

    def min_degree(self):
        return min(n for n, _ in self.components)

    def max_degree(self):
        return max(n for n, _ in self.components)


@dataclass(frozen=True)
class AffineElement:
    current: CurrentElement
    central: object = QZERO

    def __post_init__(self):
        object.__setattr__(self, "central", Q(self.central))

    def __add__(self, other):
        return AffineElement(self.current + other.current, self.central + other.central)

    def __sub__(self, other):
        return AffineElement(self.current - other.current, self.central - other.central)

    def scale(self, c):
        return AffineElement(self.current.scale(c), Q(c) * self.central)

    def is_zero(self):
        return self.current.is_zero() and not self.central


def current_bracket(x, y, form=TRACE):
    """Bare current bracket plus the central cocycle value; returns the
    pair (current part, central scalar)."""
    x._compatible(y)
    geom = x.geometry
    out = CurrentElement.zero(geom, x.tag, x.size)
    central = QZERO
    for (n, p), a in x.components.items():
        for (m, r), b in y.components.items():
            ab = a.bracket(b)
            if not ab.is_zero():
                for key, c in multiply_basis(geom, n, p, m, r).coeffs.items():
                    term = CurrentElement(geom, out.tag, x.size, {key: ab.scale(c)})
                    out = out + term
            alpha = alpha_form(a, b, form)
            if alpha:
                central += alpha * gamma_A_basis(geom, n, p, m, r)
    return out, central


def affine_bracket(x, y, form=TRACE):
    """[x (x) f + ct, y (x) g + c't] in the centrally extended algebra."""
    current, central = current_bracket(x.current, y.current, form)
    return AffineElement(current, central)


def embed_finite(x, geom):
    """x tensor 1, using 1 = sum_p A_{0,p}."""
    comps = {(0, p): x for p in geom.point_indices()}
    return AffineElement(CurrentElement(geom, x.tag, x.size, comps))


@dataclass(frozen=True)
class DgElement:
    """Current plus vector field plus central term: an element of the
    extended algebra g (x) A + L + C t."""

    current: CurrentElement
    vector_field: KNExpansion
    central: object = QZERO

    def __post_init__(self):
        if self.vector_field.weight != -1:
            raise ValueError("vector field component must have weight -1")
        if self.vector_field.geometry != self.current.geometry:
            raise ValueError("geometry mismatch")
        object.__setattr__(self, "central", Q(self.central))

    def __add__(self, other):
        return DgElement(
            self.current + other.current,
            self.vector_field + other.vector_field,
            self.central + other.central,
        )

    def __sub__(self, other):
        return DgElement(
            self.current - other.current,
            self.vector_field - other.vector_field,
            self.central - other.central,
        )

    def scale(self, c):
        return DgElement(
            self.current.scale(c), self.vector_field.scale(c), Q(c) * self.central
        )

    def is_zero(self):
        return self.current.is_zero() and self.vector_field.is_zero() and not self.central


def dg_zero(geom, tag, size):
    return DgElement(CurrentElement.zero(geom, tag, size), KNExpansion.zero(geom, -1))


def dg_bracket(x, y, form=TRACE, projective=None, affine=None):
    """Full bracket of currents-plus-vector-fields:

      [e1 + u1, e2 + u2] = [e1,e2] + (e1.u2 - e2.u1) + [u1,u2]
        + ( alpha gamma_A on currents + gamma_L on fields
            + tr-weighted gamma_mix on mixed pairs ) t.
    """
    x.current._compatible(y.current)
    geom = x.current.geometry
    tag = x.current.tag
    current, central = current_bracket(x.current, y.current, form)
    vector = KNExpansion.zero(geom, -1)
    for (n, p), c1 in x.vector_field.coeffs.items():
        for (m, r), c2 in y.vector_field.coeffs.items():
            vector = vector + bracket_basis(geom, n, p, m, r).scale(c1 * c2)
            central += c1 * c2 * gamma_L_basis(geom, n, p, m, r, projective)
    for (n, p), c1 in x.vector_field.coeffs.items():
        for (m, r), b in y.current.components.items():
            for key, c in lie_basis(geom, 0, n, p, m, r).coeffs.items():
                current = current + CurrentElement(geom, tag, y.current.size, {key: b.scale(c1 * c)})
            trace = b.trace()
            if trace:
                central += c1 * trace * gamma_mix_basis(geom, n, p, m, r, affine)
    for (m, r), c2 in y.vector_field.coeffs.items():
        for (n, p), a in x.current.components.items():
            for key, c in lie_basis(geom, 0, m, r, n, p).coeffs.items():
                current = current - CurrentElement(geom, tag, x.current.size, {key: a.scale(c2 * c)})
            trace = a.trace()
            if trace:
                central -= c2 * trace * gamma_mix_basis(geom, m, r, n, p, affine)
    return DgElement(current, vector, central)


def affine_triangular_split(x, variant="STANDARD", bound=None, depth=None):
    """Split the current part by degree; the central coefficient has
    degree zero and joins the zero part."""
    geom = x.current.geometry
    tag, size = x.current.tag, x.current.size
    parts = {"plus": {}, "zero": {}, "minus": {}}
    for (n, p), a in x.current.components.items():
        probe = KNExpansion(0, geom, {(n, p): QONE})
        split = triangular_split(probe, variant, bound=bound, depth=depth)
        side = "plus" if split.plus.coeffs else ("minus" if split.minus.coeffs else "zero")
        parts[side][(n, p)] = a
    make = lambda side: CurrentElement(geom, tag, size, parts[side])
    return (
        AffineElement(make("plus")),
        AffineElement(make("zero"), x.central),
        AffineElement(make("minus")),
    )


def is_regular(x):
    """Membership in the regular subalgebra g (x) A^(1)_-: every
    component's function vanishes at infinity, and there is no central
    part."""
    if x.central:
        return False
    geom = x.current.geometry
    return all(
        basis_order_at_infinity(geom, 0, n) >= 1 for n, _ in x.current.components
    )


def gram_matrix(elements, form=TRACE):
    return [[alpha_form(a, b, form) for b in elements] for a in elements]


@lru_cache(maxsize=None)
def dual_basis_pair(tag, size, form=TRACE):
    """A basis u_i of the matrix algebra together with the dual basis
    u^i satisfying alpha(u_i, u^j) = delta_ij; fails for degenerate
    forms (e.g. TRACE_TRACE beyond gl(1))."""
    basis = matrix_basis(tag, size)
    gram = gram_matrix(basis, form)
    try:
        inv = invert(gram)
    except ValueError as exc:
        raise ValueError(f"bilinear form {form!r} is degenerate on {tag}({size})") from exc
    duals = []
    for j in range(len(basis)):
        acc = None
        for i, u in enumerate(basis):
            term = u.scale(inv[i][j])
            acc = term if acc is None else acc + term
        duals.append(acc)
    return tuple(basis), tuple(duals)
