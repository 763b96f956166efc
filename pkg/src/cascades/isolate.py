"""Real-root isolation by the method of cascades.

The method ascends the cascade chain.  The linear level is solved exactly;
at every higher level the candidate interval boundaries are 0, the roots of
the level below (the critical points of the current level), and the current
level's great hypothesis.  Between consecutive boundaries the level is
strictly monotone, so an endpoint sign change certifies exactly one root and
equal nonzero endpoint signs certify none.  Roots of the top level are
returned either as exact rationals or as open intervals with a sign-change
certificate.

Two exact subroutines make the ascent airtight:

* The sign of a level at an irrational boundary root is decided by shrinking
  that root's enclosure.  Endpoint signs alone can lie (the level may dip
  through zero and back inside a coarse enclosure), so a sign is only
  accepted once an endpoint value exceeds a derivative bound times the
  enclosure width, which certifies the enclosure is root-free.  If the
  enclosure drops below width 2**-64 without a verdict, a polynomial gcd
  decides exactly whether the boundary root is shared with the level, i.e.
  whether the sign is zero.

* A fresh sign-change bracket is probed at the simplest rational it
  contains (smallest denominator, by Stern-Brocot descent).  A hit is
  reported as an exact root; at the top level the probing continues until
  the bracket is narrower than 1/lc**2 of the primitive level, at which
  point the rational root theorem leaves a single possible candidate and a
  miss certifies the root irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .bounds import great_hypothesis, has_no_negative_coefficient
from .errors import PreconditionError
from .poly import Polynomial, Rational, cascade_chain, poly_gcd, reflect, squarefree_part

# Enclosure width below which a shared-root gcd test is attempted before
# further refinement.  Correctness never depends on the value; the gcd
# decides exactly.
GCD_FALLBACK_WIDTH = Fraction(1, 1 << 64)

# Refinement steps granted to the rational-root probe at intermediate
# cascade levels, where an exact answer is a convenience, not a contract.
QUICK_PROBE_STEPS = 8


class Conclusion(Enum):
    SIGN_CHANGE = "sign_change"
    NO_SIGN_CHANGE = "no_sign_change"
    EXACT_ROOT_AT_LO = "exact_root_at_lo"
    EXACT_ROOT_AT_HI = "exact_root_at_hi"


@dataclass(frozen=True)
class SignCertificate:
    """Recorded endpoint evaluations and the conclusion they license."""

    lo: Rational
    hi: Rational
    f_lo: Rational
    f_hi: Rational
    conclusion: Conclusion

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    def check(self, p: Polynomial) -> bool:
        """Re-evaluate ``p`` at the endpoints and re-derive the conclusion."""
        fresh = sign_change(p, self.lo, self.hi)
        return fresh == self


@dataclass(frozen=True)
class IsolatedRoot:
    """A single real root: an exact rational, or an open interval holding
    exactly one root of the squarefree part of the isolated polynomial."""

    multiplicity: int
    level: int
    value: Optional[Rational] = None
    certificate: Optional[SignCertificate] = None

    def __post_init__(self) -> None:
        if (self.value is None) == (self.certificate is None):
            raise ValueError("exactly one of value / certificate must be set")
        if self.certificate is not None and self.certificate.conclusion is not Conclusion.SIGN_CHANGE:
            raise ValueError("a bracketed root needs a sign-change certificate")

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    @property
    def kind(self) -> str:
        return "exact" if self.is_exact else "bracketed"

    @property
    def lo(self) -> Rational:
        return self.value if self.is_exact else self.certificate.lo

    @property
    def hi(self) -> Rational:
        return self.value if self.is_exact else self.certificate.hi


def _sign(x: Fraction) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def sign_change(p: Polynomial, lo: Rational, hi: Rational) -> SignCertificate:
    """Exact endpoint evaluation of ``p`` on ``(lo, hi)``.

    Endpoint zeros are reported as such, never folded into a sign change;
    when both endpoints vanish the lower one is reported (re-query the upper
    half for the other).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise PreconditionError("sign_change requires lo < hi")
    f_lo, f_hi = p(lo), p(hi)
    if f_lo == 0:
        conclusion = Conclusion.EXACT_ROOT_AT_LO
    elif f_hi == 0:
        conclusion = Conclusion.EXACT_ROOT_AT_HI
    elif f_lo * f_hi < 0:
        conclusion = Conclusion.SIGN_CHANGE
    else:
        conclusion = Conclusion.NO_SIGN_CHANGE
    return SignCertificate(lo, hi, f_lo, f_hi, conclusion)


def narrow(p: Polynomial, cert: SignCertificate, probe: Rational) -> SignCertificate:
    """Shrink a sign-change certificate by probing one interior point.

    Returns the half that carries the sign change, or an exact-root
    certificate anchored at the probe when ``p(probe) == 0``.  The probe may
    be any interior point, not necessarily the midpoint.
    """
    if cert.conclusion is not Conclusion.SIGN_CHANGE:
        raise PreconditionError("narrow requires a sign-change certificate")
    probe = Fraction(probe)
    if not cert.lo < probe < cert.hi:
        raise PreconditionError("probe must lie strictly inside the interval")
    fp = p(probe)
    if fp == 0:
        return SignCertificate(probe, cert.hi, Fraction(0), cert.f_hi, Conclusion.EXACT_ROOT_AT_LO)
    if _sign(fp) == _sign(cert.f_lo):
        return SignCertificate(probe, cert.hi, fp, cert.f_hi, Conclusion.SIGN_CHANGE)
    return SignCertificate(cert.lo, probe, cert.f_lo, fp, Conclusion.SIGN_CHANGE)


# ---------------------------------------------------------------------------
# simplest rational in an open interval (Stern-Brocot descent)


def simplest_in_interval(lo: Rational, hi: Rational) -> Rational:
    """The rational with the smallest denominator strictly inside ``(lo, hi)``
    (ties broken toward the smallest magnitude numerator)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise PreconditionError("simplest_in_interval requires lo < hi")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -_simplest_nonneg(-hi, -lo)
    return _simplest_nonneg(lo, hi)


def _simplest_nonneg(lo: Fraction, hi: Fraction) -> Fraction:
    # 0 <= lo < hi; continued-fraction descent in integer arithmetic
    a_num, a_den = lo.numerator, lo.denominator
    b_num, b_den = hi.numerator, hi.denominator
    quotients: list[int] = []
    while True:
        floor_lo = a_num // a_den
        if b_num > (floor_lo + 1) * b_den:
            quotients.append(floor_lo + 1)
            break
        a_num -= floor_lo * a_den
        b_num -= floor_lo * b_den
        if a_num == 0:
            # fractional interval (0, b): the simplest is 1/n for the least
            # n with 1/n < b
            quotients.append(floor_lo)
            quotients.append(b_den // b_num + 1)
            break
        quotients.append(floor_lo)
        # descend into (1/b_frac, 1/a_frac)
        a_num, a_den, b_num, b_den = b_den, b_num, a_den, a_num
    num, den = quotients[-1], 1
    for q in reversed(quotients[:-1]):
        num, den = q * num + den, num
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# root points carried through the ascent


def _magnitude_bound(p: Polynomial, lo: Fraction, hi: Fraction) -> Fraction:
    """Exact rational upper bound for ``|p|`` on ``[lo, hi]``."""
    box = max(abs(lo), abs(hi), Fraction(1))
    total = Fraction(0)
    power = Fraction(1)
    for c in p.coefficients:
        total += abs(c) * power
        power *= box
    return total


class _RootPoint:
    """One real root, either an exact rational or a shrinking enclosure.

    A bracketed point keeps the polynomial whose strict sign change pins it
    (its "refiner") and the endpoint values, so the enclosure can be halved
    on demand; the enclosure always contains exactly one refiner root.
    """

    __slots__ = ("value", "lo", "hi", "refiner", "f_lo", "f_hi")

    def __init__(self) -> None:
        self.value: Optional[Fraction] = None
        self.lo = self.hi = self.f_lo = self.f_hi = None
        self.refiner: Optional[Polynomial] = None

    @classmethod
    def exact(cls, v: Fraction) -> "_RootPoint":
        pt = cls()
        pt.value = Fraction(v)
        return pt

    @classmethod
    def bracketed(cls, lo: Fraction, hi: Fraction, refiner: Polynomial,
                  f_lo: Optional[Fraction] = None, f_hi: Optional[Fraction] = None) -> "_RootPoint":
        pt = cls()
        pt.lo, pt.hi = Fraction(lo), Fraction(hi)
        pt.refiner = refiner
        pt.f_lo = refiner(pt.lo) if f_lo is None else f_lo
        pt.f_hi = refiner(pt.hi) if f_hi is None else f_hi
        if not (pt.lo < pt.hi and pt.f_lo * pt.f_hi < 0):
            raise PreconditionError("bracketed point needs a strict sign change")
        return pt

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def lower(self) -> Fraction:
        return self.value if self.is_exact else self.lo

    def upper(self) -> Fraction:
        return self.value if self.is_exact else self.hi

    def halve(self) -> None:
        """One bisection step on the refiner; may collapse to an exact point."""
        mid = (self.lo + self.hi) / 2
        fm = self.refiner(mid)
        if fm == 0:
            self.value = mid
            self.refiner = None
            return
        if _sign(fm) == _sign(self.f_lo):
            self.lo, self.f_lo = mid, fm
        else:
            self.hi, self.f_hi = mid, fm

    def certificate(self) -> SignCertificate:
        if self.is_exact:
            raise PreconditionError("exact points carry no certificate")
        return SignCertificate(self.lo, self.hi, self.f_lo, self.f_hi, Conclusion.SIGN_CHANGE)

    # -- exact decision procedures ----------------------------------------

    def equals_rational(self, x: Fraction) -> bool:
        if self.is_exact:
            return self.value == x
        # the enclosure holds exactly one refiner root, so membership plus a
        # vanishing refiner pins it
        return self.lo < x < self.hi and self.refiner(x) == 0

    def separate_from_rational(self, x: Fraction) -> None:
        """Shrink until ``x`` lies strictly outside the enclosure (requires
        the point to differ from ``x``)."""
        if self.is_exact:
            if self.value == x:
                raise PreconditionError("cannot separate a point from itself")
            return
        if self.equals_rational(x):
            raise PreconditionError("cannot separate a point from itself")
        while self.lo <= x <= self.hi:
            self.halve()
            if self.is_exact:
                return

    def sign_of(self, f: Polynomial) -> int:
        """Exact sign of ``f`` at this point.

        For bracketed points: refine until an endpoint value of ``f``
        dominates the derivative-bound-times-width estimate, which certifies
        the whole enclosure free of ``f``-roots and hence the sign; once the
        enclosure is narrower than :data:`GCD_FALLBACK_WIDTH`, test
        ``gcd(f, refiner)`` for a sign change to decide exactly whether the
        point is a shared root (sign zero).
        """
        if self.is_exact:
            return _sign(f(self.value))
        gcd_tested = False
        while True:
            v_lo, v_hi = f(self.lo), f(self.hi)
            limit = _derivative_magnitude_bound(f, self.lo, self.hi) * (self.hi - self.lo)
            if v_lo != 0 and abs(v_lo) > limit:
                return _sign(v_lo)
            if v_hi != 0 and abs(v_hi) > limit:
                return _sign(v_hi)
            if not gcd_tested and self.hi - self.lo < GCD_FALLBACK_WIDTH:
                gcd_tested = True
                h = poly_gcd(f, self.refiner)
                if h.degree >= 1 and _sign(h(self.lo)) * _sign(h(self.hi)) < 0:
                    return 0
            self.halve()
            if self.is_exact:
                return _sign(f(self.value))


# ---------------------------------------------------------------------------
# the ascent


def _locate_root(f: Polynomial, lo: Fraction, hi: Fraction,
                 f_lo: Fraction, f_hi: Fraction, thorough: bool) -> _RootPoint:
    """Pin down the single root of ``f`` inside the bracket ``(lo, hi)``.

    Alternates the simplest-rational probe with plain bisection.  In
    ``thorough`` mode the search only gives up once the bracket is narrower
    than ``1/lc**2`` of the primitive form of ``f``; by the rational root
    theorem the returned bracket then certifies an irrational root.
    """
    prim, _ = f.primitive()
    lc = abs(prim.leading_coefficient.numerator)
    verdict_width = Fraction(1, lc * lc)
    steps = 0
    while True:
        cand = simplest_in_interval(lo, hi)
        fc = f(cand)
        if fc == 0:
            return _RootPoint.exact(cand)
        if _sign(fc) == _sign(f_lo):
            lo, f_lo = cand, fc
        else:
            hi, f_hi = cand, fc
        if thorough and hi - lo < verdict_width:
            cand = simplest_in_interval(lo, hi)
            if cand.denominator <= lc and f(cand) == 0:
                return _RootPoint.exact(cand)
            return _RootPoint.bracketed(lo, hi, f, f_lo, f_hi)
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return _RootPoint.exact(mid)
        if _sign(fm) == _sign(f_lo):
            lo, f_lo = mid, fm
        else:
            hi, f_hi = mid, fm
        steps += 1
        if not thorough and steps >= QUICK_PROBE_STEPS:
            return _RootPoint.bracketed(lo, hi, f, f_lo, f_hi)


def _scan_level(f: Polynomial, below: Sequence[_RootPoint], thorough: bool) -> list[_RootPoint]:
    """Positive roots of cascade level ``f`` given the roots of the level
    below (the positive critical points of ``f``), sorted ascending."""
    if has_no_negative_coefficient(f):
        return []
    bound = great_hypothesis(f)

    boundaries: list[_RootPoint] = [_RootPoint.exact(Fraction(0))]
    for pt in below:
        if pt.equals_rational(bound):
            continue
        if pt.is_exact:
            if pt.value >= bound:
                continue
        else:
            pt.separate_from_rational(bound)
            if pt.is_exact and pt.value >= bound:
                continue
            if not pt.is_exact and pt.lo > bound:
                continue
            # keep the enclosure strictly inside (0, bound)
            if not pt.is_exact:
                while pt.lo <= 0 or pt.hi >= bound:
                    pt.halve()
                    if pt.is_exact:
                        break
                if pt.is_exact and not 0 < pt.value < bound:
                    continue
        boundaries.append(pt)
    boundaries.append(_RootPoint.exact(bound))

    signs = [pt.sign_of(f) for pt in boundaries]

    roots: list[_RootPoint] = []
    for i in range(len(boundaries) - 1):
        if i > 0 and signs[i] == 0:
            roots.append(boundaries[i])
        if signs[i] * signs[i + 1] < 0:
            b1, b2 = boundaries[i], boundaries[i + 1]
            lo = b1.value if b1.is_exact else b1.hi
            hi = b2.value if b2.is_exact else b2.lo
            roots.append(_locate_root(f, lo, hi, f(lo), f(hi), thorough))
    return roots


def _positive_root_points(q: Polynomial) -> list[_RootPoint]:
    """Sorted positive roots of the squarefree polynomial ``q``."""
    chain = cascade_chain(q)
    linear = chain.levels[0]
    r = -linear.coefficient(0) / linear.coefficient(1)
    points = [_RootPoint.exact(r)] if r > 0 else []
    top = len(chain.levels) - 1
    for i, level in enumerate(chain.levels[1:], start=1):
        points = _scan_level(level, points, thorough=(i == top))
    return points


def _multiplicity_at(pt: _RootPoint, factors: dict[Polynomial, int]) -> int:
    for factor, mult in factors.items():
        if pt.is_exact:
            if factor(pt.value) == 0:
                return mult
        elif _sign(factor(pt.lo)) * _sign(factor(pt.hi)) < 0:
            return mult
    raise AssertionError("isolated root matches no squarefree factor")


def _emit(pt: _RootPoint, factors: dict[Polynomial, int], level: int) -> IsolatedRoot:
    mult = _multiplicity_at(pt, factors)
    if pt.is_exact:
        return IsolatedRoot(multiplicity=mult, level=level, value=pt.value)
    return IsolatedRoot(multiplicity=mult, level=level, certificate=pt.certificate())


def isolate_positive_roots(p: Polynomial) -> list[IsolatedRoot]:
    """Isolate the positive real roots of ``p``, sorted ascending.

    ``p`` is replaced by its squarefree part first (the method presumes
    simple roots); multiplicities are recovered from the squarefree
    decomposition and reattached.  Bracketed results certify an irrational
    root; rational roots are always reported exactly.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("isolate_positive_roots requires degree >= 1")
    q, factors = squarefree_part(p)
    level = q.degree
    return [_emit(pt, factors, level) for pt in _positive_root_points(q)]


def isolate_all_roots(p: Polynomial) -> list[IsolatedRoot]:
    """Isolate every real root of ``p``, sorted ascending.

    Negative roots come from the positive roots of ``p(-x)`` with intervals
    negated and certificates rebuilt against the squarefree part of ``p``;
    a root at zero is read off the constant coefficient, with multiplicity
    equal to the lowest nonzero exponent.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("isolate_all_roots requires degree >= 1")
    q, factors = squarefree_part(p)
    level = q.degree

    out: list[IsolatedRoot] = []
    for r in reversed(isolate_positive_roots(reflect(p))):
        if r.is_exact:
            out.append(IsolatedRoot(multiplicity=r.multiplicity, level=level, value=-r.value))
        else:
            cert = sign_change(q, -r.certificate.hi, -r.certificate.lo)
            assert cert.conclusion is Conclusion.SIGN_CHANGE
            out.append(IsolatedRoot(multiplicity=r.multiplicity, level=level, certificate=cert))
    if p.coefficient(0) == 0:
        mult = next(k for k, c in enumerate(p.coefficients) if c != 0)
        out.append(IsolatedRoot(multiplicity=mult, level=level, value=Fraction(0)))
    out.extend(isolate_positive_roots(p))
    return out


def _point_of(root: IsolatedRoot, refiner: Polynomial) -> _RootPoint:
    """Rebuild the refinable form of a returned root (``refiner`` must be the
    squarefree part the root's certificate was issued against)."""
    if root.is_exact:
        return _RootPoint.exact(root.value)
    c = root.certificate
    return _RootPoint.bracketed(c.lo, c.hi, refiner, c.f_lo, c.f_hi)


def roots_in_interval(p: Polynomial, lo: Rational, hi: Rational) -> tuple[list[IsolatedRoot], list[IsolatedRoot]]:
    """Split the real roots of ``p`` into those strictly inside the open
    interval ``(lo, hi)`` and those sitting exactly on an endpoint.

    Bracketed roots are certified irrational, so refinement against the
    rational endpoints always terminates; enclosures of the returned inside
    roots are shrunk to fit within the interval.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise PreconditionError("roots_in_interval requires lo < hi")
    q, _ = squarefree_part(p)
    inside: list[IsolatedRoot] = []
    boundary: list[IsolatedRoot] = []
    for r in isolate_all_roots(p):
        if r.is_exact:
            if r.value == lo or r.value == hi:
                boundary.append(r)
            elif lo < r.value < hi:
                inside.append(r)
            continue
        pt = _point_of(r, q)
        pt.separate_from_rational(lo)
        if not pt.is_exact:
            pt.separate_from_rational(hi)
        if pt.is_exact:
            if pt.value == lo or pt.value == hi:
                boundary.append(IsolatedRoot(multiplicity=r.multiplicity, level=r.level, value=pt.value))
            elif lo < pt.value < hi:
                inside.append(IsolatedRoot(multiplicity=r.multiplicity, level=r.level, value=pt.value))
            continue
        if pt.hi <= lo or pt.lo >= hi:
            continue
        inside.append(IsolatedRoot(multiplicity=r.multiplicity, level=r.level, certificate=pt.certificate()))
    return inside, boundary
