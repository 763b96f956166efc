"""Theorem-level checks and the independent brute-force oracle.

These operations turn the classical statements about where derivative roots
sit into runnable certificates: between two equal values there is a root of
the derivative; between consecutive real roots of a polynomial lies an odd
number of derivative roots (counted with multiplicity) and between
consecutive derivative roots at most one polynomial root; and the derivative
takes opposite signs at two adjacent simple roots.  The grid-scan oracle is
deliberately naive - equally spaced exact evaluations with no shared logic
with the cascade ascent - so agreement between the two is evidence, not
tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .isolate import (
    Conclusion,
    IsolatedRoot,
    SignCertificate,
    _point_of,
    _RootPoint,
    isolate_all_roots,
    roots_in_interval,
)
from .poly import Polynomial, Rational, squarefree_part


@dataclass(frozen=True)
class GapCount:
    """Derivative roots strictly between two consecutive polynomial roots,
    counted with multiplicity."""

    left: IsolatedRoot
    right: IsolatedRoot
    count: int


@dataclass(frozen=True)
class InterleavingReport:
    """Isolated roots of a squarefree polynomial and its derivative, the gap
    counts, and any violations of the interleaving theorems (expected empty;
    a violation is a bug detector, not an input error)."""

    p_roots: tuple[IsolatedRoot, ...]
    dp_roots: tuple[IsolatedRoot, ...]
    gaps: tuple[GapCount, ...]
    violations: tuple[str, ...]
    extremes: tuple[int, int]

    @property
    def ok(self) -> bool:
        return not self.violations


def _separate(points: Sequence[_RootPoint]) -> None:
    """Refine enclosures until all closed hulls are pairwise disjoint.

    The points must be pairwise distinct real numbers; exact points are
    degenerate hulls.  Hulls only ever shrink, so one pass over the pairs
    suffices.
    """
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            while not (a.upper() < b.lower() or b.upper() < a.lower()):
                if a.is_exact:
                    b.halve()
                elif b.is_exact or a.hi - a.lo >= b.hi - b.lo:
                    a.halve()
                else:
                    b.halve()


def check_interleaving(p: Polynomial) -> InterleavingReport:
    """Isolate the roots of the squarefree part of ``p`` and of its
    derivative, count derivative roots in every consecutive-root gap, and
    assert the interleaving theorems.

    Checked: every gap holds an odd number (at least 1, counted with
    multiplicity) of derivative roots; at most one polynomial root lies
    between consecutive derivative roots, below the least derivative root,
    or above the greatest.  ``extremes`` counts derivative roots below the
    least / above the greatest polynomial root (all of them when the
    polynomial has no real root).
    """
    if p.is_zero or p.degree < 2:
        raise PreconditionError("check_interleaving requires degree >= 2")
    q, _ = squarefree_part(p)
    dq = q.derivative()
    p_roots = isolate_all_roots(q)
    dp_roots = isolate_all_roots(dq)

    dq_sf, _ = squarefree_part(dq)
    p_pts = [_point_of(r, q) for r in p_roots]
    d_pts = [_point_of(r, dq_sf) for r in dp_roots]
    _separate(p_pts + d_pts)

    violations: list[str] = []

    # positions are now totally ordered by disjoint hulls
    def before(a: _RootPoint, b: _RootPoint) -> bool:
        return a.upper() < b.lower()

    gaps: list[GapCount] = []
    for i in range(len(p_pts) - 1):
        left, right = p_pts[i], p_pts[i + 1]
        count = sum(r.multiplicity for pt, r in zip(d_pts, dp_roots)
                    if before(left, pt) and before(pt, right))
        gaps.append(GapCount(p_roots[i], p_roots[i + 1], count))
        if count < 1 or count % 2 == 0:
            violations.append(
                f"gap ({p_roots[i].lo}, {p_roots[i + 1].hi}) holds {count} derivative roots; expected odd >= 1")

    for i in range(len(d_pts) - 1):
        inside = sum(1 for pt in p_pts if before(d_pts[i], pt) and before(pt, d_pts[i + 1]))
        if inside > 1:
            violations.append(
                f"{inside} roots between consecutive derivative roots; expected at most 1")

    if d_pts:
        below_least = sum(1 for pt in p_pts if before(pt, d_pts[0]))
        above_greatest = sum(1 for pt in p_pts if before(d_pts[-1], pt))
        if below_least > 1:
            violations.append(f"{below_least} roots below the least derivative root; expected at most 1")
        if above_greatest > 1:
            violations.append(f"{above_greatest} roots above the greatest derivative root; expected at most 1")
    elif len(p_pts) > 1:
        violations.append(f"{len(p_pts)} roots but no real derivative root; expected at most 1")

    if p_pts:
        extremes = (
            sum(r.multiplicity for pt, r in zip(d_pts, dp_roots) if before(pt, p_pts[0])),
            sum(r.multiplicity for pt, r in zip(d_pts, dp_roots) if before(p_pts[-1], pt)),
        )
    else:
        extremes = (sum(r.multiplicity for r in dp_roots), 0)

    return InterleavingReport(tuple(p_roots), tuple(dp_roots), tuple(gaps),
                              tuple(violations), extremes)


def rolle_point(p: Polynomial, a: Rational, b: Rational) -> list[IsolatedRoot]:
    """Isolated roots of ``p'`` strictly inside ``(a, b)`` given
    ``p(a) == p(b)`` exactly; guaranteed nonempty for polynomials."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise PreconditionError("rolle_point requires a < b")
    if p(a) != p(b):
        raise PreconditionError(f"p(a) = {p(a)} differs from p(b) = {p(b)}")
    inside, _ = roots_in_interval(p.derivative(), a, b)
    return inside


def grid_scan_oracle(p: Polynomial, lo: Rational, hi: Rational, steps: int) -> list[SignCertificate]:
    """Dense sign scan: evaluate ``p`` at ``steps + 1`` equally spaced
    rational points and report one certificate per cell showing a sign
    change or an exact zero at a grid point.

    Intentionally naive and independent of the cascade machinery; the caller
    must pick ``steps`` fine enough that no cell holds two roots.  Signs are
    scanned through a denominator-cleared integer form of ``p`` for speed;
    the emitted certificates carry exact rational evaluations.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise PreconditionError("grid_scan_oracle requires lo < hi")
    if steps < 1:
        raise PreconditionError("steps must be at least 1")
    if p.is_zero:
        raise PreconditionError("grid_scan_oracle requires a nonzero polynomial")

    width = hi - lo
    # grid point k is (base + k*inc) / den exactly
    den = lo.denominator * width.denominator * steps
    base = lo.numerator * width.denominator * steps
    inc = width.numerator * lo.denominator
    prim, _ = p.primitive()
    n = prim.degree if not prim.is_zero else 0
    scaled = [int(c) * den ** (n - k) for k, c in enumerate(prim.coefficients)]

    def sign_at(k: int) -> int:
        t = base + k * inc
        acc = 0
        for c in reversed(scaled):
            acc = acc * t + c
        return (acc > 0) - (acc < 0)

    def grid(k: int) -> Fraction:
        return Fraction(base + k * inc, den)

    signs = [sign_at(k) for k in range(steps + 1)]
    certificates: list[SignCertificate] = []
    if signs[0] == 0:
        x0, x1 = grid(0), grid(1)
        certificates.append(SignCertificate(x0, x1, Fraction(0), p(x1), Conclusion.EXACT_ROOT_AT_LO))
    for k in range(1, steps + 1):
        a, b = grid(k - 1), grid(k)
        if signs[k] == 0:
            certificates.append(SignCertificate(a, b, p(a), Fraction(0), Conclusion.EXACT_ROOT_AT_HI))
        elif signs[k - 1] * signs[k] < 0:
            certificates.append(SignCertificate(a, b, p(a), p(b), Conclusion.SIGN_CHANGE))
    return certificates


def check_derivative_sign_flip(p: Polynomial, r1: IsolatedRoot, r2: IsolatedRoot) -> bool:
    """Whether ``p'`` takes opposite signs at two adjacent simple roots of
    ``p`` - always true, and checkable exactly.

    ``r1`` and ``r2`` must be adjacent simple roots as produced by
    :func:`isolate_all_roots`; anything else is rejected.  Signs at
    bracketed roots are resolved by the same enclosure refinement the
    isolation uses for boundary signs.
    """
    if r1.multiplicity != 1 or r2.multiplicity != 1:
        raise PreconditionError("sign flip is only defined for simple roots")
    q, _ = squarefree_part(p)
    roots = isolate_all_roots(p)
    idx = [_locate_in(roots, r, q) for r in (r1, r2)]
    i, j = sorted(idx)
    if j != i + 1:
        raise PreconditionError("roots are not adjacent")
    dp = p.derivative()
    s1 = _point_of(r1, q).sign_of(dp)
    s2 = _point_of(r2, q).sign_of(dp)
    return s1 * s2 < 0


def _locate_in(roots: Sequence[IsolatedRoot], target: IsolatedRoot, q: Polynomial) -> int:
    for i, r in enumerate(roots):
        if _same_root(r, target, q):
            return i
    raise PreconditionError("root does not belong to the polynomial")


def _same_root(a: IsolatedRoot, b: IsolatedRoot, q: Polynomial) -> bool:
    """Exact equality of two isolated roots of the same squarefree ``q``."""
    if a.is_exact and b.is_exact:
        return a.value == b.value
    if a.is_exact != b.is_exact:
        exact, bracketed = (a, b) if a.is_exact else (b, a)
        c = bracketed.certificate
        return c.lo < exact.value < c.hi and q(exact.value) == 0
    # both bracketed: each interval holds exactly one root of q, so they are
    # equal exactly when q changes sign over the overlap
    lo = max(a.certificate.lo, b.certificate.lo)
    hi = min(a.certificate.hi, b.certificate.hi)
    if not lo < hi:
        return False
    return q(lo) * q(hi) < 0
