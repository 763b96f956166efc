"""Exact real-root isolation for rational polynomials by the method of
cascades, with classical bounds, certified refinement, and theorem-level
interleaving checks.  All arithmetic is exact rational; decimals appear only
in rendered output."""

__version__ = "0.1.0"

from .bounds import (
    NewtonBound,
    RootBounds,
    great_hypothesis,
    newton_bound,
    root_bounds,
    small_hypothesis,
)
from .certify import (
    GapCount,
    InterleavingReport,
    check_derivative_sign_flip,
    check_interleaving,
    grid_scan_oracle,
    rolle_point,
)
from .errors import DerivativeVanishedError, ParseError, PreconditionError
from .isolate import (
    Conclusion,
    IsolatedRoot,
    SignCertificate,
    isolate_all_roots,
    isolate_positive_roots,
    narrow,
    roots_in_interval,
    sign_change,
    simplest_in_interval,
)
from .poly import (
    CascadeChain,
    Polynomial,
    Rational,
    cascade_chain,
    cascade_step,
    divexact,
    hudde_transform,
    is_constant_multiple,
    poly_gcd,
    reflect,
    squarefree_part,
    translate_from_bound,
)
from .refine import (
    IntermediateSolveResult,
    Method,
    RootApproximation,
    bisect,
    false_position,
    newton_refine,
    solve_intermediate,
)

__all__ = [
    "__version__",
    "Rational", "Polynomial", "CascadeChain",
    "cascade_step", "cascade_chain", "hudde_transform", "squarefree_part",
    "reflect", "translate_from_bound", "poly_gcd", "divexact", "is_constant_multiple",
    "RootBounds", "NewtonBound", "great_hypothesis", "small_hypothesis",
    "newton_bound", "root_bounds",
    "Conclusion", "SignCertificate", "IsolatedRoot", "sign_change", "narrow",
    "simplest_in_interval", "isolate_positive_roots", "isolate_all_roots",
    "roots_in_interval",
    "Method", "RootApproximation", "bisect", "false_position", "newton_refine",
    "solve_intermediate", "IntermediateSolveResult",
    "GapCount", "InterleavingReport", "check_interleaving", "rolle_point",
    "grid_scan_oracle", "check_derivative_sign_flip",
    "PreconditionError", "ParseError", "DerivativeVanishedError",
]


def parse_polynomial(text: str) -> Polynomial:
    """Parse polynomial text (grammar lives in :mod:`cascades.cli`)."""
    from .cli import parse_polynomial as _parse

    return _parse(text)
