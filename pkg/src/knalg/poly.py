"""Dense univariate polynomials over exact rationals, plus the truncated
power-series helpers used by the Laurent expansion kernels.

Coefficients are stored lowest degree first; the zero polynomial is the
empty tuple.  All operations are exact.
"""
from __future__ import annotations

from .scalars import Q, QONE, QZERO


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Q(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def linear(cls, root):
        """The monic factor z - root."""
        return cls((-Q(root), 1))

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Degree, with -1 standing in for the zero polynomial."""
        return len(self.coeffs) - 1

    def lead(self):
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*z")
            else:
                parts.append(f"{c}*z^{k}")
        return "Polynomial(" + " + ".join(parts) + ")"

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Polynomial(out)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        return self + (-other)

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Polynomial()
            out = [QZERO] * (len(a) + len(b) - 1)
            for i, ci in enumerate(a):
                if not ci:
                    continue
                for j, cj in enumerate(b):
                    if cj:
                        out[i + j] = out[i + j] + ci * cj
            return Polynomial(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = Q(c)
        if not c:
            return Polynomial()
        return Polynomial([c * a for a in self.coeffs])

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self):
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def eval(self, a):
        a = Q(a)
        acc = QZERO
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def divmod(self, other):
        """Exact polynomial division with remainder; other must be nonzero."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.lead()
        if len(rem) <= d:
            return Polynomial(), self
        quot = [QZERO] * (len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c / lead
            quot[k - d] = q
            for j, oc in enumerate(other.coeffs):
                rem[k - d + j] = rem[k - d + j] - q * oc
        return Polynomial(quot), Polynomial(rem)

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(1 / self.lead())

    def gcd(self, other):
        """Monic greatest common divisor."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b).monic()
        return a.monic()

    def valuation_at(self, a):
        """Multiplicity of the root a (0 when p(a) != 0); None for zero."""
        if self.is_zero():
            return None
        a = Q(a)
        v = 0
        cs = list(self.coeffs)
        while True:
            quot, rem = _synthetic_div(cs, a)
            if rem:
                return v
            v += 1
            cs = quot
            if not cs:
                return v

    def taylor_at(self, a, count):
        """First `count` coefficients of p(a + t) as a series in t."""
        a = Q(a)
        out = []
        cs = list(self.coeffs)
        for _ in range(count):
            if not cs:
                out.append(QZERO)
                continue
            quot, rem = _synthetic_div(cs, a)
            out.append(rem)
            cs = quot
        return out

    def reversed_coeffs(self):
        """Coefficients of w^deg * p(1/w); nonzero constant term."""
        return tuple(reversed(self.coeffs))


def _synthetic_div(cs, a):
    """Divide the coefficient list by (z - a); returns (quotient, remainder)."""
    acc = cs[-1]
    quot = [QZERO] * (len(cs) - 1)
    for j in range(len(cs) - 2, -1, -1):
        quot[j] = acc
        acc = cs[j] + a * acc
    return quot, acc


# Truncated power-series helpers (plain coefficient lists, index = order).

def series_mul(a, b, count):
    out = [QZERO] * count
    for i, ci in enumerate(a[:count]):
        if not ci:
            continue
        top = min(count - i, len(b))
        for j in range(top):
            if b[j]:
                out[i + j] = out[i + j] + ci * b[j]
    return out

def series_div(a, b, count):
    """Series quotient a/b to `count` terms; b[0] must be nonzero."""
    if not b or not b[0]:
        raise ZeroDivisionError("series division by a series with zero constant term")
    inv0 = 1 / b[0]
    out = [QZERO] * count
    for k in range(count):
        acc = a[k] if k < len(a) else QZERO
        for j in range(1, min(k, len(b) - 1) + 1):
            if b[j] and out[k - j]:
                acc = acc - b[j] * out[k - j]
        out[k] = acc * inv0
    return out

def binom_series(c, e, count):
    """Coefficients of (1 + c*t)^e to `count` terms, any integer e."""
    c = Q(c)
    out = [QONE]
    coef = QONE
    for k in range(1, count):
        coef = coef * Q(e - k + 1, k) * c
        out.append(coef)
    return out
