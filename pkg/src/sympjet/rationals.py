"""Exact rational scalars.

Every coefficient in the package is an exact rational; floats appear only in
the numeric oracle helpers.  gmpy2.mpq is used when available (it is roughly
an order of magnitude faster inside the jet kernels), with fractions.Fraction
as a drop-in fallback.  Both types normalize to lowest terms with a positive
denominator and render as ``p`` or ``p/q`` under str().
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q

    _RAT_TYPES = (type(Q(0)), Fraction, int)
    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    _RAT_TYPES = (Fraction, int)
    BACKEND = "fractions"

QZERO = Q(0)
QONE = Q(1)


def is_rational(value) -> bool:
    return isinstance(value, _RAT_TYPES)


def rat(value) -> "Q":
    """Coerce an int, Fraction, mpq or ``p/q`` string to the scalar type."""
    if isinstance(value, str):
        return Q(value.strip())
    if is_rational(value):
        return Q(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(value) -> str:
    """Canonical ``p`` / ``p/q`` rendering used in all reports."""
    return str(Q(value))
