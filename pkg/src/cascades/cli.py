"""Command-line front end.

Subcommands: ``bounds``, ``cascades``, ``isolate``, ``refine``, ``certify``,
``replay``, ``compare``.  Polynomials are accepted either as a constant-first
coefficient list (``473,-648,198,-24,1``) or in human syntax
(``x^4 - 24x^3 + 198x^2 - 648x + 473``), with integer or fraction
coefficients.  ``--json`` emits a machine-readable report; rationals appear
as ``{"num": ..., "den": ...}`` string pairs so nothing is lost to rounding,
alongside a decimal rendering controlled by ``--digits``.

Exit codes: 0 success, 1 usage or parse error, 2 precondition violation,
3 replay or certify mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .bounds import root_bounds
from .certify import InterleavingReport, check_interleaving
from .errors import DerivativeVanishedError, ParseError, PreconditionError
from .isolate import (
    Conclusion,
    IsolatedRoot,
    SignCertificate,
    isolate_all_roots,
    isolate_positive_roots,
    sign_change,
)
from .poly import Polynomial, Rational, cascade_chain, is_constant_multiple
from .refine import Method, RootApproximation, bisect, false_position, newton_refine

DEFAULT_DIGITS = 30


# ---------------------------------------------------------------------------
# polynomial text parsing

_MINUS_ALIASES = {"−": "-"}  # tolerate the typographic minus


def parse_polynomial(text: str) -> Polynomial:
    """Parse either syntax into exact rational coefficients.

    Human-syntax terms are ``[+|-][coef][*][x[^exp]]`` with whitespace
    ignored and repeated exponents summed; coefficients may be fractions
    like ``3/2``.  Malformed input raises :class:`ParseError` carrying the
    1-based character position.
    """
    for alias, repl in _MINUS_ALIASES.items():
        text = text.replace(alias, repl)
    if not text.strip():
        raise ParseError("empty polynomial", 1)
    if "," in text:
        return _parse_coefficient_list(text)
    return _parse_human(text)


def _parse_coefficient_list(text: str) -> Polynomial:
    coeffs = []
    pos = 0
    for token in text.split(","):
        start = pos + 1
        pos += len(token) + 1
        stripped = token.strip()
        if not stripped or "x" in stripped:
            raise ParseError(f"bad coefficient {token.strip()!r}", start)
        try:
            coeffs.append(Fraction(stripped))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {stripped!r}", start) from None
    return Polynomial(coeffs)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.i + 1)

    def take_int(self) -> int:
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == start:
            raise self.error("expected digits")
        return int(self.text[start:self.i])


def _parse_human(text: str) -> Polynomial:
    s = _Scanner(text)
    terms: dict[int, Fraction] = {}
    first = True
    while True:
        s.skip_ws()
        if s.i >= len(s.text):
            if first:
                raise s.error("empty polynomial")
            break
        sign = 1
        if s.peek() in "+-":
            sign = -1 if s.peek() == "-" else 1
            s.i += 1
            s.skip_ws()
        elif not first:
            raise s.error(f"expected '+' or '-' before {s.peek()!r}")
        coef, exp = _parse_term(s)
        terms[exp] = terms.get(exp, Fraction(0)) + sign * coef
        first = False
    top = max(terms) if terms else 0
    return Polynomial([terms.get(k, Fraction(0)) for k in range(top + 1)])


def _parse_term(s: _Scanner) -> tuple[Fraction, int]:
    coef: Optional[Fraction] = None
    if s.peek().isdigit():
        num = s.take_int()
        s.skip_ws()
        if s.peek() == "/":
            s.i += 1
            s.skip_ws()
            den_pos = s.i
            den = s.take_int()
            if den == 0:
                raise ParseError("zero denominator", den_pos + 1)
            coef = Fraction(num, den)
        else:
            coef = Fraction(num)
        s.skip_ws()
        if s.peek() == "*":
            s.i += 1
            s.skip_ws()
    if s.peek() == "x":
        s.i += 1
        s.skip_ws()
        exp = 1
        if s.peek() == "^":
            s.i += 1
            s.skip_ws()
            if not s.peek().isdigit():
                raise s.error("expected a non-negative integer exponent")
            exp = s.take_int()
        return (Fraction(1) if coef is None else coef), exp
    if coef is None:
        raise s.error(f"expected a term, found {s.peek()!r}")
    return coef, 0


# ---------------------------------------------------------------------------
# rendering

def decimal_string(r: Rational, digits: int) -> str:
    """Correctly rounded (half to even) decimal with ``digits`` fractional
    digits, computed in integer arithmetic."""
    if digits < 1:
        raise PreconditionError("digits must be at least 1")
    sign = "-" if r < 0 else ""
    r = abs(Fraction(r))
    scaled = r * 10 ** digits
    q, rem = divmod(scaled.numerator, scaled.denominator)
    double = 2 * rem
    if double > scaled.denominator or (double == scaled.denominator and q % 2 == 1):
        q += 1
    digits_str = str(q).rjust(digits + 1, "0")
    return f"{sign}{digits_str[:-digits]}.{digits_str[-digits:]}"


def render_rational(r: Rational, digits: int = DEFAULT_DIGITS) -> str:
    """``num/den ~ decimal`` for fractions, plain integer string otherwise."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator} ≈ {decimal_string(r, digits)}"


def render_enclosure(lo: Rational, hi: Rational, digits: int = DEFAULT_DIGITS) -> str:
    """Midpoint-and-halfwidth view of an interval."""
    mid = (Fraction(lo) + Fraction(hi)) / 2
    half = (Fraction(hi) - Fraction(lo)) / 2
    return f"{decimal_string(mid, digits)} ± {decimal_string(half, digits)}"


def _rational_json(r: Rational, digits: int) -> dict[str, str]:
    r = Fraction(r)
    return {"num": str(r.numerator), "den": str(r.denominator),
            "decimal": decimal_string(r, digits)}


def _certificate_json(cert: SignCertificate, digits: int) -> dict[str, Any]:
    return {
        "lo": _rational_json(cert.lo, digits),
        "hi": _rational_json(cert.hi, digits),
        "f_lo": _rational_json(cert.f_lo, digits),
        "f_hi": _rational_json(cert.f_hi, digits),
        "conclusion": cert.conclusion.value,
    }


def _root_json(root: IsolatedRoot, digits: int) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": root.kind, "multiplicity": root.multiplicity,
                           "level": root.level}
    if root.is_exact:
        out["value"] = _rational_json(root.value, digits)
    else:
        out["lo"] = _rational_json(root.certificate.lo, digits)
        out["hi"] = _rational_json(root.certificate.hi, digits)
        out["certificate"] = _certificate_json(root.certificate, digits)
    return out


def _approximation_json(res: RootApproximation, digits: int) -> dict[str, Any]:
    out = {
        "method": res.method.value,
        "iterations": res.iterations,
        "converged": res.converged,
        "estimate": _rational_json(res.estimate, digits),
        "enclosure": {"lo": _rational_json(res.enclosure[0], digits),
                      "hi": _rational_json(res.enclosure[1], digits)},
        "flags": list(res.flags),
    }
    if res.trace:
        out["trace"] = [{"kind": kind, "x": _rational_json(x, digits),
                         "f": _rational_json(fx, digits)} for kind, x, fx in res.trace]
    return out


def _interleaving_json(report: InterleavingReport, digits: int) -> dict[str, Any]:
    return {
        "p_roots": [_root_json(r, digits) for r in report.p_roots],
        "dp_roots": [_root_json(r, digits) for r in report.dp_roots],
        "gaps": [{"left": _root_json(g.left, digits), "right": _root_json(g.right, digits),
                  "count": g.count} for g in report.gaps],
        "violations": list(report.violations),
        "extremes": {"below_least_root": report.extremes[0],
                     "above_greatest_root": report.extremes[1]},
    }


# ---------------------------------------------------------------------------
# run reports

@dataclass
class RunReport:
    command: str
    input_text: str
    results: dict[str, Any]
    timing_ms: float
    version: str = __version__
    exit_code: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "input": self.input_text,
            "results": self.results,
            "timing_ms": self.timing_ms,
            "version": self.version,
        }


def _report(command: str, poly_text: str, results: dict[str, Any],
            started: float, exit_code: int = 0) -> RunReport:
    return RunReport(command, poly_text, results,
                     round((time.perf_counter() - started) * 1000, 3), exit_code=exit_code)


# ---------------------------------------------------------------------------
# the worked quartic, replayed against its recorded milestones

REPLAY_QUARTIC = Polynomial([473, -648, 198, -24, 1])
# the four historical cascades, linear first, with the scalings as recorded
REPLAY_CASCADES = (
    Polynomial([-24, 4]),
    Polynomial([198, -72, 6]),
    Polynomial([-648, 396, -72, 4]),
    REPLAY_QUARTIC,
)
REPLAY_GREAT_HYPOTHESES = {2: Fraction(13), 3: Fraction(163), 4: Fraction(649)}
# (cascade index, point, value) sign-table entries
REPLAY_SIGN_TABLE = (
    (2, Fraction(5), Fraction(-12)),
    (2, Fraction(4), Fraction(6)),
    (3, Fraction(0), Fraction(-648)),
    (3, Fraction(5), Fraction(32)),
    (3, Fraction(4), Fraction(40)),
    (3, Fraction(3), Fraction(0)),
    (4, Fraction(0), Fraction(473)),
    (4, Fraction(3), Fraction(-256)),
    (4, Fraction(1), Fraction(0)),
)
REPLAY_ROOTS = (Fraction(1), Fraction(11))
REPLAY_DERIVATIVE_ROOTS = (Fraction(3), Fraction(6), Fraction(9))


def replay_rolle_example(digits: int = DEFAULT_DIGITS) -> RunReport:
    """Run the full pipeline on the worked quartic and compare every stage
    against its recorded milestones; any mismatch makes the exit code 3."""
    started = time.perf_counter()
    checks: list[dict[str, Any]] = []

    def record(name: str, expected: Any, computed: Any, ok: bool) -> None:
        checks.append({"name": name, "expected": str(expected),
                       "computed": str(computed), "ok": bool(ok)})

    chain = cascade_chain(REPLAY_QUARTIC)
    for i, expected_level in enumerate(REPLAY_CASCADES):
        computed = chain.levels[i]
        record(f"cascade {i + 1} root set", expected_level.to_text(), computed.to_text(),
               is_constant_multiple(computed, expected_level))

    for idx, expected in REPLAY_GREAT_HYPOTHESES.items():
        computed = root_bounds(REPLAY_CASCADES[idx - 1]).great
        record(f"great hypothesis, cascade {idx}", expected, computed, computed == expected)

    for idx, point, expected in REPLAY_SIGN_TABLE:
        computed = REPLAY_CASCADES[idx - 1](point)
        record(f"f{idx}({point})", expected, computed, computed == expected)

    roots = isolate_all_roots(REPLAY_QUARTIC)
    values = tuple(r.value for r in roots if r.is_exact)
    record("isolated roots", list(REPLAY_ROOTS), [str(v) for v in values],
           all(r.is_exact for r in roots) and values == REPLAY_ROOTS)

    report = check_interleaving(REPLAY_QUARTIC)
    dp_values = tuple(r.value for r in report.dp_roots if r.is_exact)
    record("derivative roots", list(REPLAY_DERIVATIVE_ROOTS), [str(v) for v in dp_values],
           dp_values == REPLAY_DERIVATIVE_ROOTS)
    record("interleaving gap count", 3,
           report.gaps[0].count if report.gaps else None,
           len(report.gaps) == 1 and report.gaps[0].count == 3)
    record("interleaving extremes", (0, 0), report.extremes, report.extremes == (0, 0))
    record("interleaving violations", 0, len(report.violations), not report.violations)

    mismatches = [c["name"] for c in checks if not c["ok"]]
    results = {"checks": checks, "mismatches": mismatches,
               "interleaving": _interleaving_json(report, digits)}
    return _report("replay", REPLAY_QUARTIC.to_text(), results, started,
                   exit_code=3 if mismatches else 0)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_bounds(args: argparse.Namespace) -> RunReport:
    started = time.perf_counter()
    p = parse_polynomial(args.polynomial)
    rb = root_bounds(p)
    results = {
        "small": _rational_json(rb.small, args.digits),
        "great": _rational_json(rb.great, args.digits),
        "newton": _rational_json(rb.newton, args.digits),
        "flags": list(rb.flags),
    }
    return _report("bounds", p.to_text(), results, started)


def _cmd_cascades(args: argparse.Namespace) -> RunReport:
    started = time.perf_counter()
    p = parse_polynomial(args.polynomial)
    chain = cascade_chain(p)
    levels = []
    for level, scaling in zip(chain.levels, chain.scalings):
        levels.append({
            "degree": level.degree,
            "text": level.to_text(),
            "coefficients": [_rational_json(c, args.digits) for c in level.coefficients],
            "scaling": _rational_json(scaling, args.digits),
            "great_hypothesis": _rational_json(root_bounds(level).great, args.digits),
        })
    return _report("cascades", p.to_text(), {"levels": levels}, started)


def _cmd_isolate(args: argparse.Namespace) -> RunReport:
    started = time.perf_counter()
    p = parse_polynomial(args.polynomial)
    roots = isolate_positive_roots(p) if args.positive_only else isolate_all_roots(p)
    results = {"roots": [_root_json(r, args.digits) for r in roots],
               "count": len(roots),
               "positive_only": bool(args.positive_only)}
    return _report("isolate", p.to_text(), results, started)


def _parse_interval(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise PreconditionError("--interval expects lo,hi")
    try:
        lo, hi = (Fraction(part.strip()) for part in parts)
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"bad interval {text!r}") from None
    return lo, hi


def _cmd_refine(args: argparse.Namespace) -> RunReport:
    started = time.perf_counter()
    p = parse_polynomial(args.polynomial)
    lo, hi = _parse_interval(args.interval)
    tol = Fraction(args.tol)
    cert = sign_change(p, lo, hi)
    if args.method == "bisect":
        res = bisect(p, cert, tol, collect_trace=args.trace)
    elif args.method == "falsepos":
        res = false_position(p, cert, tol, collect_trace=args.trace)
    else:
        res = newton_refine(p, (lo + hi) / 2, tol, safeguard=cert, collect_trace=args.trace)
    results = {"certificate": _certificate_json(cert, args.digits),
               "refinement": _approximation_json(res, args.digits),
               "enclosure_rendered": render_enclosure(*res.enclosure, digits=min(args.digits, 40))}
    return _report("refine", p.to_text(), results, started)


def _cmd_certify(args: argparse.Namespace) -> RunReport:
    started = time.perf_counter()
    p = parse_polynomial(args.polynomial)
    report = check_interleaving(p)
    return _report("certify", p.to_text(), _interleaving_json(report, args.digits),
                   started, exit_code=0 if report.ok else 3)


def _cmd_compare(args: argparse.Namespace) -> RunReport:
    started = time.perf_counter()
    p = parse_polynomial(args.polynomial)
    lo, hi = _parse_interval(args.interval)
    tol = Fraction(args.tol)
    cert = sign_change(p, lo, hi)
    runs = {
        "bisect": bisect(p, cert, tol),
        "false_position": false_position(p, cert, tol),
        "newton": newton_refine(p, (lo + hi) / 2, tol, safeguard=cert),
    }
    estimates = [r.estimate for r in runs.values()]
    spread = max(estimates) - min(estimates)
    results = {
        "certificate": _certificate_json(cert, args.digits),
        "methods": {name: _approximation_json(r, args.digits) for name, r in runs.items()},
        "iterations": {name: r.iterations for name, r in runs.items()},
        "max_estimate_spread": _rational_json(spread, args.digits),
    }
    return _report("compare", p.to_text(), results, started)


def _cmd_replay(args: argparse.Namespace) -> RunReport:
    return replay_rolle_example(args.digits)


# ---------------------------------------------------------------------------
# text rendering of reports

def _print_text(report: RunReport, digits: int) -> None:
    print(f"# {report.command}: {report.input_text}")
    _print_value("", report.results, digits)


def _print_value(indent: str, value: Any, digits: int) -> None:
    if isinstance(value, dict):
        if set(value) >= {"num", "den"}:
            print(f"{indent}{_fmt_rational(value, digits)}")
            return
        for key, item in value.items():
            if isinstance(item, dict) and set(item) >= {"num", "den"}:
                print(f"{indent}{key}: {_fmt_rational(item, digits)}")
            elif isinstance(item, (dict, list)):
                print(f"{indent}{key}:")
                _print_value(indent + "  ", item, digits)
            else:
                print(f"{indent}{key}: {item}")
        return
    if isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                _print_value(indent + "  ", item, digits)
            else:
                print(f"{indent}- {item}")
        return
    print(f"{indent}{value}")


def _fmt_rational(obj: dict[str, str], digits: int) -> str:
    num, den = obj["num"], obj["den"]
    if den == "1":
        return num
    return f"{num}/{den} ≈ {obj.get('decimal', '')}"


# ---------------------------------------------------------------------------
# entry point

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit code 1, not argparse's 2
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS,
                        help="decimal digits for rendered rationals (default 30)")

    parser = _ArgumentParser(prog="cascades",
                             description="Exact real-root isolation by the method of cascades")
    parser.add_argument("--version", action="version", version=f"cascades {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, needs_poly: bool = True) -> _ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if needs_poly:
            sp.add_argument("polynomial", help="coefficient list or human syntax")
        return sp

    add("bounds", "root location bounds")
    add("cascades", "the chain of derived equations")
    iso = add("isolate", "isolate the real roots")
    iso.add_argument("--positive-only", action="store_true",
                     help="only the positive roots, as in the original method")
    ref = add("refine", "refine a certified bracket")
    ref.add_argument("--interval", required=True, help="lo,hi")
    ref.add_argument("--method", choices=["bisect", "falsepos", "newton"], default="bisect")
    ref.add_argument("--tol", required=True, help="width tolerance, e.g. 1/1000000000000 or 1e-12")
    ref.add_argument("--trace", action="store_true", help="record every step")
    add("certify", "interleaving report for the polynomial and its derivative")
    add("replay", "replay the worked quartic and verify every milestone", needs_poly=False)
    cmp_ = add("compare", "run all three refinement methods on one bracket")
    cmp_.add_argument("--interval", required=True, help="lo,hi")
    cmp_.add_argument("--tol", required=True)
    return parser


_HANDLERS = {
    "bounds": _cmd_bounds,
    "cascades": _cmd_cascades,
    "isolate": _cmd_isolate,
    "refine": _cmd_refine,
    "certify": _cmd_certify,
    "replay": _cmd_replay,
    "compare": _cmd_compare,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.digits < 1:
            raise _UsageError("--digits must be at least 1")
        report = _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PreconditionError, DerivativeVanishedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        _print_text(report, args.digits)
        if report.exit_code == 3:
            mismatches = report.results.get("mismatches") or report.results.get("violations")
            print(f"MISMATCH: {mismatches}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
