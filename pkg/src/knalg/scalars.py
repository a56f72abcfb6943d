"""Exact rational scalars.

gmpy2's mpq is used when available (markedly faster normalization inside
the residue and wedge kernels); the stdlib Fraction is a drop-in fallback.
Everything downstream goes through the Q constructor, so the two carriers
are interchangeable.
"""

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

QZERO = Q(0)
QONE = Q(1)


def parse_q(text):
    """Parse "p" or "p/q" into an exact rational."""
    return Q(str(text).strip())


def qstr(value):
    """Canonical "p" / "p/q" rendering used by every exporter."""
    return str(value)
