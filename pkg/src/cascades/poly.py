"""Dense univariate polynomials over exact rationals.

The scalar type is :class:`fractions.Fraction` (re-exported as ``Rational``):
arbitrary precision, always canonical (positive denominator, reduced), so no
operation here ever rounds.  Polynomials are immutable tuples of coefficients
indexed by exponent; the zero polynomial is the empty tuple and has no degree.

Besides ordinary ring arithmetic this module hosts the derived-polynomial
operators the rest of the package is built on: the cascade step (derivative
with the content divided out), the full cascade chain down to a linear
polynomial, Hudde's progression transform, squarefree decomposition, and the
root-preserving coordinate changes ``p(-x)`` and ``p(G - x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import PreconditionError

Rational = Fraction

Coefficient = Union[Fraction, int, str]


class Polynomial:
    """Immutable dense polynomial; ``coefficients[k]`` multiplies ``x**k``."""

    __slots__ = ("_coeffs", "_intform")

    def __init__(self, coefficients: Iterable[Coefficient] = ()):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs = tuple(coeffs)
        self._intform: tuple[tuple[int, ...], int] | None = None

    @classmethod
    def from_roots(cls, roots: Iterable[Coefficient], leading: Coefficient = 1) -> "Polynomial":
        p = cls([leading])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> int:
        if not self._coeffs:
            raise PreconditionError("the zero polynomial has no degree")
        return len(self._coeffs) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            raise PreconditionError("the zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- ring arithmetic ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self._coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["Polynomial", Coefficient]) -> "Polynomial":
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
            for i, a in enumerate(self._coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other._coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        scale = Fraction(other)
        return Polynomial([c * scale for c in self._coeffs])

    def __rmul__(self, other: Coefficient) -> "Polynomial":
        return self * other

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by the zero polynomial")
        rem = list(self._coeffs)
        dn, dd = len(rem) - 1, other.degree
        if dn < dd:
            return Polynomial(), self
        lead = other.leading_coefficient
        quot = [Fraction(0)] * (dn - dd + 1)
        for k in range(dn - dd, -1, -1):
            c = rem[k + dd] / lead
            if c != 0:
                quot[k] = c
                for j, b in enumerate(other._coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dd])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    # -- evaluation and calculus -------------------------------------------

    def _int_form(self) -> tuple[tuple[int, ...], int]:
        """Denominator-cleared coefficients: ``self == P_int / scale`` (cached)."""
        form = self._intform
        if form is None:
            scale = 1
            for c in self._coeffs:
                scale = scale * c.denominator // math.gcd(scale, c.denominator)
            ints = tuple(c.numerator * (scale // c.denominator) for c in self._coeffs)
            form = (ints, scale)
            self._intform = form
        return form

    def __call__(self, x: Coefficient) -> Fraction:
        """Exact evaluation by Horner's nested scheme.

        Runs over a denominator-cleared integer form: for ``x = u/v``,
        ``p(x) = (sum int_k * u**k * v**(n-k)) / (scale * v**n)``.
        """
        x = Fraction(x)
        if not self._coeffs:
            return Fraction(0)
        ints, scale = self._int_form()
        u, v = x.numerator, x.denominator
        acc = ints[-1]
        vpow = 1
        for c in reversed(ints[:-1]):
            vpow *= v
            acc = acc * u + c * vpow
        return Fraction(acc, scale * vpow)

    def derivative(self) -> "Polynomial":
        if self.is_zero:
            raise PreconditionError("cannot differentiate the zero polynomial")
        return Polynomial([k * c for k, c in enumerate(self._coeffs)][1:])

    # -- normal forms --------------------------------------------------------

    def content(self) -> Fraction:
        """gcd of the numerators over lcm of the denominators, signed so that
        dividing it out leaves a positive leading coefficient."""
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._coeffs:
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        content = Fraction(num, den)
        return -content if self.leading_coefficient < 0 else content

    def primitive(self) -> tuple["Polynomial", Fraction]:
        """Split into ``(primitive, content)`` with ``self == content * primitive``.

        The primitive part has coprime integer coefficients and a positive
        leading coefficient.
        """
        if self.is_zero:
            return self, Fraction(0)
        c = self.content()
        return Polynomial([a / c for a in self._coeffs]), c

    def monic(self) -> "Polynomial":
        return Polynomial([a / self.leading_coefficient for a in self._coeffs])

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical human form, descending exponents: ``x^4 - 24x^3 + ... + 473``."""
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for k in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                xpart = "x" if k == 1 else f"x^{k}"
                body = xpart if mag == 1 else f"{mag}{xpart}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


ZERO = Polynomial()


def divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    q, r = divmod(a, b)
    if not r.is_zero:
        raise ArithmeticError(f"inexact polynomial division: {a} by {b}")
    return q


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized to a primitive positive-leading
    integer polynomial (``Polynomial([1])`` when coprime).

    Plain Euclidean remainders over the rationals; degrees in this package
    are small, so intermediate coefficient growth is accepted.
    """
    if a.is_zero and b.is_zero:
        raise PreconditionError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, a % b
    prim, _ = a.primitive()
    return prim


def is_constant_multiple(a: Polynomial, b: Polynomial) -> bool:
    """True when ``a == c * b`` for some nonzero rational ``c`` (equal root sets)."""
    if a.is_zero or b.is_zero:
        return a.is_zero and b.is_zero
    if a.degree != b.degree:
        return False
    c = a.leading_coefficient / b.leading_coefficient
    return a == b * c


@dataclass(frozen=True)
class CascadeChain:
    """The derived equations of a polynomial, ordered linear-first.

    ``levels[i]`` has degree ``i + 1`` and is a positive rational multiple of
    ``levels[i + 1].derivative()``; the last level is the input itself.
    ``scalings[i]`` is the content divided out when ``levels[i]`` was derived
    (1 for the top level, which is never rescaled).
    """

    levels: tuple[Polynomial, ...]
    scalings: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.levels)

    def check(self) -> None:
        """Assert the structural invariants; used by tests."""
        for i, level in enumerate(self.levels):
            assert level.degree == i + 1
        for i in range(len(self.levels) - 1):
            d = self.levels[i + 1].derivative()
            assert is_constant_multiple(d, self.levels[i])
            assert d.leading_coefficient / self.levels[i].leading_coefficient > 0


def cascade_step(p: Polynomial, reduce_content: bool = True) -> tuple[Polynomial, Fraction]:
    """One descent step: the derivative of ``p``, optionally divided by its
    content (and sign-normalized so the leading coefficient is positive).

    Returns ``(derived, scaling)`` with ``derivative(p) == scaling * derived``.
    Scaling never moves roots.  Linear input is accepted and yields a constant,
    which terminates a chain.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("cascade_step requires degree >= 1")
    d = p.derivative()
    if not reduce_content:
        return d, Fraction(1)
    prim, content = d.primitive()
    return prim, content


def cascade_chain(p: Polynomial, reduce_content: bool = True) -> CascadeChain:
    """Repeated cascade steps from ``p`` down to a linear polynomial.

    Content reduction is the default; the raw-derivative chain is available
    with ``reduce_content=False``.  Either way each level's root set equals
    that of the derivative of the level above.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("cascade_chain requires degree >= 1")
    levels = [p]
    scalings = [Fraction(1)]
    while levels[-1].degree > 1:
        nxt, s = cascade_step(levels[-1], reduce_content)
        levels.append(nxt)
        scalings.append(s)
    return CascadeChain(tuple(reversed(levels)), tuple(reversed(scalings)))


def hudde_transform(p: Polynomial, a0: Coefficient, d: Coefficient) -> Polynomial:
    """Multiply ``coefficients[k]`` by the arithmetic progression ``a0 + k*d``.

    With ``a0=0, d=1`` this is ``x * derivative(p)``; any repeated root of
    ``p`` survives into the transform, which is what made the rule useful for
    detecting multiple roots.  The result may be the zero polynomial.
    """
    if p.is_zero:
        raise PreconditionError("hudde_transform requires a nonzero polynomial")
    a0, d = Fraction(a0), Fraction(d)
    return Polynomial([(a0 + k * d) * c for k, c in enumerate(p.coefficients)])


def reflect(p: Polynomial) -> Polynomial:
    """``p(-x)``: negates odd-exponent coefficients, so negative roots of ``p``
    become positive roots of the reflection."""
    if p.is_zero:
        raise PreconditionError("reflect requires a nonzero polynomial")
    return Polynomial([-c if k % 2 else c for k, c in enumerate(p.coefficients)])


def translate_from_bound(p: Polynomial, bound: Coefficient) -> Polynomial:
    """``p(G - x)`` by exact composition; roots map bijectively ``r -> G - r``.

    This is the substitution used to restate a root hunt relative to the
    upper bound ``G`` when the raw interval is long.
    """
    if p.is_zero:
        raise PreconditionError("translate_from_bound requires a nonzero polynomial")
    t = Polynomial([Fraction(bound), -1])
    out = Polynomial([p.coefficients[-1]])
    for c in reversed(p.coefficients[:-1]):
        out = out * t + Polynomial([c])
    return out


def squarefree_part(p: Polynomial) -> tuple[Polynomial, dict[Polynomial, int]]:
    """Yun decomposition: ``(p / gcd(p, p'), {squarefree factor: multiplicity})``.

    The returned polynomial is primitive with positive leading coefficient and
    has the same root set as ``p`` with every multiplicity reduced to 1.  The
    map sends each multiplicity class (a squarefree factor collecting all
    roots of that multiplicity) to its multiplicity, including the class of
    simple roots.
    """
    if p.is_zero or p.degree < 1:
        raise PreconditionError("squarefree_part requires degree >= 1")
    prim, _ = p.primitive()
    dprim = prim.derivative()
    g = poly_gcd(prim, dprim)
    sf, _ = divexact(prim, g).primitive()
    if g.degree == 0:
        return sf, {sf: 1}
    factors: dict[Polynomial, int] = {}
    w = divexact(prim, g)
    z = divexact(dprim, g) - w.derivative()
    i = 1
    while w.degree > 0:
        a = poly_gcd(w, z)
        if a.degree >= 1:
            factors[a] = i
        w = divexact(w, a)
        z = divexact(z, a) - w.derivative()
        i += 1
    return sf, factors
