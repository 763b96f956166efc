"""A-priori bounds on root location.

Two classical bounds are implemented: the "great hypothesis"
``a/c + 1`` (``a`` the largest magnitude among negative coefficients, ``c``
the leading coefficient), a strict upper bound for positive roots, and the
sum-of-squared-roots bound, a bound on every root's magnitude for equations
whose roots are all real.  The "small hypothesis" is zero: only positive
roots were hunted, so zero is below all of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .errors import PreconditionError
from .poly import Polynomial, Rational

# Fractional bits used when rounding an irrational square root up to a
# dyadic rational.  The bound only has to be safe, not tight.
DYADIC_SQRT_BITS = 32

NO_NEGATIVE_COEFFICIENT = "no-negative-coefficient"
NEWTON_FALLBACK = "newton-fallback"
NEWTON_UNDEFINED = "newton-requires-degree-2"


@dataclass(frozen=True)
class RootBounds:
    """Bundle of the three bounds plus any qualifying flags."""

    small: Rational
    great: Rational
    newton: Rational
    flags: tuple[str, ...] = ()


class NewtonBound(NamedTuple):
    value: Rational
    fallback: bool


def _positive_leading(p: Polynomial) -> Polynomial:
    return -p if p.leading_coefficient < 0 else p


def great_hypothesis(p: Polynomial) -> Rational:
    """Strict upper bound ``a/c + 1`` for the positive roots of ``p``.

    The sign of the leading coefficient is normalized first (roots are
    unchanged).  When no coefficient is negative there are no positive roots
    at all and the bound degenerates to 1; :func:`root_bounds` flags that case.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("great_hypothesis requires degree >= 1")
    p = _positive_leading(p)
    negatives = [c for c in p.coefficients if c < 0]
    if not negatives:
        return Fraction(1)
    a = max(-c for c in negatives)
    return a / p.leading_coefficient + 1


def has_no_negative_coefficient(p: Polynomial) -> bool:
    """True when ``p`` (sign-normalized) has no negative coefficient, i.e. no
    positive roots."""
    return all(c >= 0 for c in _positive_leading(p).coefficients)


def small_hypothesis(p: Polynomial) -> Rational:
    """Lower bound for positive roots: always zero, the number below every
    root when only positive roots are considered.  Kept as an operation for
    symmetry with :func:`great_hypothesis`."""
    return Fraction(0)


def _sqrt_upper(x: Fraction, bits: int = DYADIC_SQRT_BITS) -> Fraction:
    """Smallest ``n / 2**bits`` with ``(n / 2**bits)**2 >= x``, for ``x >= 0``."""
    if x < 0:
        raise PreconditionError("square root of a negative rational")
    num = x.numerator << (2 * bits)
    den = x.denominator
    n = isqrt(num // den)
    while n * n * den < num:
        n += 1
    return Fraction(n, 1 << bits)


def newton_bound(p: Polynomial) -> NewtonBound:
    """Root-magnitude bound from the sum of squared roots.

    For monic ``x^n - e1*x^(n-1) + e2*x^(n-2) - ...`` the power sum of the
    roots is ``s2 = e1**2 - 2*e2``; when every root is real, ``sqrt(s2)``
    bounds them all.  Complex root pairs can push ``s2`` negative (or below a
    real root's square), so the bound is only trustworthy for all-real-rooted
    input; on negative ``s2`` the great hypothesis is returned with the
    fallback flag set.  The square root is rounded up to a dyadic rational
    with :data:`DYADIC_SQRT_BITS` fractional bits.
    """
    if p.is_zero or p.degree < 2:
        raise PreconditionError("newton_bound requires degree >= 2")
    m = _positive_leading(p).monic()
    n = m.degree
    e1 = -m.coefficient(n - 1)
    e2 = m.coefficient(n - 2)
    s2 = e1 * e1 - 2 * e2
    if s2 < 0:
        return NewtonBound(great_hypothesis(p), True)
    return NewtonBound(_sqrt_upper(s2), False)


def root_bounds(p: Polynomial) -> RootBounds:
    """All bounds for ``p`` in one report, with flags for the degenerate cases."""
    if p.is_zero or p.degree < 1:
        raise PreconditionError("root_bounds requires degree >= 1")
    flags: list[str] = []
    great = great_hypothesis(p)
    if has_no_negative_coefficient(p):
        flags.append(NO_NEGATIVE_COEFFICIENT)
    if p.degree >= 2:
        nb = newton_bound(p)
        if nb.fallback:
            flags.append(NEWTON_FALLBACK)
        newton = nb.value
    else:
        newton = great
        flags.append(NEWTON_UNDEFINED)
    return RootBounds(small_hypothesis(p), great, newton, tuple(flags))
