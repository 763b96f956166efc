"""Root refinement inside a certified interval.

All three methods run in exact rational arithmetic; nothing is ever rounded
for correctness, only for compactness (iterates of the open-ended methods are
snapped to the dyadic grid 2**-256, after which the certificate logic
re-checks everything).  Bisection halves the certified interval, so the width
after ``k`` full steps is exactly the initial width over ``2**k``; false
position keeps the sign-change half of the secant split; Newton iterates
``x - p(x)/p'(x)`` and, when a safeguard certificate is supplied, falls back
to one bisection step whenever an iterate leaves the bracket or the
derivative vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import DerivativeVanishedError, PreconditionError
from .isolate import (
    Conclusion,
    IsolatedRoot,
    SignCertificate,
    roots_in_interval,
    simplest_in_interval,
)
from .poly import Polynomial, Rational

# Iterates of false position and Newton are rounded to this many fractional
# bits to stop coefficient blow-up; every rounded iterate is re-evaluated
# exactly, so certificates are unaffected.
DYADIC_ROUNDING_BITS = 256

FLAG_EXACT_ROOT = "exact-root"
FLAG_MAX_ITERATIONS = "max-iterations"


class Method(Enum):
    BISECTION = "bisection"
    FALSE_POSITION = "false_position"
    NEWTON = "newton"
    NEWTON_SAFEGUARDED = "newton_safeguarded"


@dataclass(frozen=True)
class RootApproximation:
    """Outcome of a refinement run.

    ``enclosure`` preserves the sign change (degenerate ``(r, r)`` when the
    root was hit exactly); ``estimate`` is the method's best point value: the
    final midpoint for bisection, the last iterate otherwise.  On a
    ``max-iterations`` flag the enclosure is the best bracket known, which
    may still be wider than the tolerance.
    """

    enclosure: tuple[Rational, Rational]
    iterations: int
    method: Method
    converged: bool
    estimate: Rational
    flags: tuple[str, ...] = ()
    trace: tuple = ()

    @property
    def width(self) -> Rational:
        return self.enclosure[1] - self.enclosure[0]


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _require_sign_change(cert: SignCertificate) -> None:
    if cert.conclusion is not Conclusion.SIGN_CHANGE:
        raise PreconditionError("a sign-change certificate is required")


def _round_dyadic(x: Fraction) -> Fraction:
    if x.denominator.bit_length() <= DYADIC_ROUNDING_BITS:
        return x
    scaled = x * (1 << DYADIC_ROUNDING_BITS)
    return Fraction(round(scaled), 1 << DYADIC_ROUNDING_BITS)


def bisect(p: Polynomial, cert: SignCertificate, tol: Rational,
           collect_trace: bool = False) -> RootApproximation:
    """Exact interval halving until the width is at most ``tol`` or a
    midpoint lands on the root."""
    _require_sign_change(cert)
    tol = Fraction(tol)
    if tol <= 0:
        raise PreconditionError("tolerance must be positive")
    lo, hi, f_lo = cert.lo, cert.hi, cert.f_lo
    steps = []
    iterations = 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = p(mid)
        iterations += 1
        if collect_trace:
            steps.append(("bisect", mid, fm))
        if fm == 0:
            return RootApproximation((mid, mid), iterations, Method.BISECTION, True,
                                     mid, (FLAG_EXACT_ROOT,), tuple(steps))
        if _sign(fm) == _sign(f_lo):
            lo, f_lo = mid, fm
        else:
            hi = mid
    return RootApproximation((lo, hi), iterations, Method.BISECTION, True,
                             (lo + hi) / 2, (), tuple(steps))


def false_position(p: Polynomial, cert: SignCertificate, tol: Rational,
                   max_iter: int = 500, collect_trace: bool = False) -> RootApproximation:
    """Regula falsi with endpoint retention.

    The probe is the secant's zero crossing; the sign-change half is kept.
    Stops when the bracket width reaches ``tol``, the probe hits the root
    exactly, or ``max_iter`` runs out (flagged, not an error: one endpoint
    commonly stagnates while the iterate itself converges).
    """
    _require_sign_change(cert)
    tol = Fraction(tol)
    if tol <= 0 or max_iter < 1:
        raise PreconditionError("tolerance and max_iter must be positive")
    lo, hi, f_lo, f_hi = cert.lo, cert.hi, cert.f_lo, cert.f_hi
    steps = []
    x = (lo + hi) / 2
    for iteration in range(1, max_iter + 1):
        x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        rounded = _round_dyadic(x)
        if lo < rounded < hi:
            x = rounded
        fx = p(x)
        if collect_trace:
            steps.append(("probe", x, fx))
        if fx == 0:
            return RootApproximation((x, x), iteration, Method.FALSE_POSITION, True,
                                     x, (FLAG_EXACT_ROOT,), tuple(steps))
        if _sign(fx) == _sign(f_lo):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx
        if hi - lo <= tol:
            return RootApproximation((lo, hi), iteration, Method.FALSE_POSITION, True,
                                     x, (), tuple(steps))
    return RootApproximation((lo, hi), max_iter, Method.FALSE_POSITION, False,
                             x, (FLAG_MAX_ITERATIONS,), tuple(steps))


def newton_refine(p: Polynomial, x0: Rational, tol: Rational, max_iter: int = 100,
                  safeguard: Optional[SignCertificate] = None,
                  collect_trace: bool = False) -> RootApproximation:
    """Tangent-method iteration ``x <- x - p(x)/p'(x)`` from ``x0``.

    Convergence is declared only when the step size drops to ``tol`` *and*
    the result re-certifies: either an exact zero, or a sign change across
    the width-``tol`` interval centered on the iterate (so the returned
    enclosure honors the tolerance).  A rational root inside that interval is
    snapped to and reported exactly.  With a safeguard certificate the
    bracket is maintained from each probed sign and any escaping iterate (or
    vanishing derivative) triggers one bisection step; without one, a
    vanishing derivative raises :class:`DerivativeVanishedError`.  Multiple
    roots never re-certify and run to the ``max-iterations`` flag.
    """
    tol = Fraction(tol)
    if tol <= 0 or max_iter < 1:
        raise PreconditionError("tolerance and max_iter must be positive")
    if p.is_zero or p.degree < 1:
        raise PreconditionError("newton_refine requires degree >= 1")
    method = Method.NEWTON
    blo = bhi = fb_lo = fb_hi = None
    if safeguard is not None:
        _require_sign_change(safeguard)
        method = Method.NEWTON_SAFEGUARDED
        blo, bhi, fb_lo, fb_hi = safeguard.lo, safeguard.hi, safeguard.f_lo, safeguard.f_hi
    dp = p.derivative()
    steps = []
    x = Fraction(x0)
    fx = p(x)
    if fx == 0:
        return RootApproximation((x, x), 0, method, True, x, (FLAG_EXACT_ROOT,), ())

    def certify(center: Fraction, iteration: int) -> Optional[RootApproximation]:
        a, b = center - tol / 2, center + tol / 2
        fa, fb = p(a), p(b)
        for endpoint, val in ((a, fa), (b, fb)):
            if val == 0:
                return RootApproximation((endpoint, endpoint), iteration, method, True,
                                         endpoint, (FLAG_EXACT_ROOT,), tuple(steps))
        if _sign(fa) * _sign(fb) < 0:
            snap = simplest_in_interval(a, b)
            if p(snap) == 0:
                return RootApproximation((snap, snap), iteration, method, True,
                                         snap, (FLAG_EXACT_ROOT,), tuple(steps))
            return RootApproximation((a, b), iteration, method, True, center, (), tuple(steps))
        return None

    for iteration in range(1, max_iter + 1):
        d = dp(x)
        if d == 0 or (safeguard is not None and not blo <= x <= bhi):
            if safeguard is None:
                raise DerivativeVanishedError(f"p'({x}) = 0 and no safeguard bracket given")
            nxt = (blo + bhi) / 2
            kind = "bisect"
        else:
            nxt = _round_dyadic(x - fx / d)
            kind = "newton"
            if safeguard is not None and not blo < nxt < bhi:
                nxt = (blo + bhi) / 2
                kind = "bisect"
        prev, x = x, nxt
        fx = p(x)
        if collect_trace:
            steps.append((kind, x, fx))
        if fx == 0:
            return RootApproximation((x, x), iteration, method, True, x,
                                     (FLAG_EXACT_ROOT,), tuple(steps))
        if safeguard is not None:
            if _sign(fx) == _sign(fb_lo):
                blo, fb_lo = x, fx
            else:
                bhi, fb_hi = x, fx
            if bhi - blo <= tol:
                return RootApproximation((blo, bhi), iteration, method, True, x, (), tuple(steps))
        if abs(x - prev) <= tol:
            result = certify(x, iteration)
            if result is not None:
                return result
    if safeguard is not None:
        return RootApproximation((blo, bhi), max_iter, method, False, x,
                                 (FLAG_MAX_ITERATIONS,), tuple(steps))
    return RootApproximation((x, x), max_iter, method, False, x,
                             (FLAG_MAX_ITERATIONS,), tuple(steps))


@dataclass(frozen=True)
class IntermediateSolveResult:
    """Roots of ``p(x) = b`` inside an open interval; endpoint hits are
    excluded but reported separately (the intervals of interest are open)."""

    roots: tuple[IsolatedRoot, ...]
    boundary_exclusions: tuple[IsolatedRoot, ...]


def solve_intermediate(p: Polynomial, b: Rational, lo: Rational, hi: Rational) -> IntermediateSolveResult:
    """Solve ``p(x) = b`` on ``(lo, hi)`` by isolating the roots of ``p - b``.

    ``b`` must lie in the closed range spanned by the endpoint values; when
    it lies strictly between them the intermediate value theorem guarantees
    at least one solution strictly inside.  A solution landing exactly on an
    endpoint (possible when ``b`` equals an endpoint value) is excluded from
    ``roots`` and listed under ``boundary_exclusions``.
    """
    b, lo, hi = Fraction(b), Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise PreconditionError("solve_intermediate requires lo < hi")
    f_lo, f_hi = p(lo), p(hi)
    if not min(f_lo, f_hi) <= b <= max(f_lo, f_hi):
        raise PreconditionError(
            f"target {b} is outside the endpoint range [{min(f_lo, f_hi)}, {max(f_lo, f_hi)}]")
    shifted = p - Polynomial([b])
    inside, boundary = roots_in_interval(shifted, lo, hi)
    return IntermediateSolveResult(tuple(inside), tuple(boundary))
