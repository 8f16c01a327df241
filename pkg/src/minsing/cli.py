"""Command-line front end.

Problems are read from ``--problem FILE`` or from standard input, so that
``minsing fixture nakayama --a 2 | minsing lct --point 'P(L0)'`` works.
Exit status is 0 on success, 2 when the mathematics fails (empty box, a
bundle that is not big, ...) and 1 when the input cannot be parsed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction

from . import io
from .bundle import box_nef, is_big, is_pseudoeffective, validate
from .envelope import psi_sigma
from .errors import MathError, ProblemParseError
from .fixtures import FIXTURES, SECTION_CHARTS, parse_point
from .geometry import DEFAULT_TOL, corners
from .multiplier import Monomial, ideal_generators, in_multiplier_ideal, jumping_numbers, lct, section_count
from .positivity import (
    kiselman_number,
    lelong_number,
    negative_part,
    nnef_locus,
    s_set,
    zariski_polyhedrality,
)
from .svg import region_svg

EXIT_MATH = 2
EXIT_PARSE = 1


def fmt(x) -> str:
    """Exact values as integers or ``p/q``; floats with 12 decimals, half-even."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    text = format(Decimal(x).quantize(Decimal("1e-12"), rounding=ROUND_HALF_EVEN), "f")
    return "0.000000000000" if text == "-0.000000000000" else text


def fmt_vec(v) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


def _number(text: str):
    text = text.strip()
    try:
        frac = Fraction(text)
    except ValueError as exc:
        raise ProblemParseError(f"cannot read {text!r} as a number") from exc
    if "." in text or "e" in text.lower():
        return float(text)
    return int(frac) if frac.denominator == 1 else frac


def _numbers(text: str) -> list:
    return [_number(t) for t in text.replace("(", "").replace(")", "").split(",") if t.strip()]


def _load(args):
    if args.problem and args.problem != "-":
        try:
            return io.load(args.problem)
        except OSError as exc:
            raise ProblemParseError(f"{args.problem}: {exc.strerror}") from exc
    text = sys.stdin.read()
    if not text.strip():
        raise ProblemParseError("no problem given: use --problem FILE or pipe JSON on stdin")
    return io.loads(text)


def _problem(args):
    problem = _load(args)
    try:
        validate(problem, assume_projective=args.assume_projective)
    except MathError:
        raise
    except ValueError as exc:
        raise ProblemParseError(str(exc)) from exc
    return problem


def _point(problem, text: str):
    try:
        return parse_point(problem, text)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ProblemParseError(f"--point: cannot read {text!r}") from exc


def _write_svg(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out):
    problem = _load(args)
    try:
        report = validate(problem, assume_projective=args.assume_projective)
    except MathError:
        raise
    except ValueError as exc:
        raise ProblemParseError(str(exc)) from exc
    print(f"valid: fibre rank {report.n}, base dimension {report.d}", file=out)
    for w in report.warnings:
        print(f"warning: {w}", file=out)


def cmd_pseff(args, out):
    print(fmt(is_pseudoeffective(_problem(args), args.tol)), file=out)


def cmd_big(args, out):
    print(is_big(_problem(args), args.tol), file=out)


def cmd_boxnef(args, out):
    region = box_nef(_problem(args))
    for v in corners(region, args.tol):
        print(fmt_vec(v), file=out)
    if args.svg:
        _write_svg(args.svg, region_svg(region, "nef box", tol=args.tol))


def cmd_sset(args, out):
    problem = _problem(args)
    if not 0 <= args.sigma < len(problem.fan.max_cones):
        raise ProblemParseError(f"--sigma: no maximal cone {args.sigma}")
    s = s_set(problem, args.sigma)
    if args.t is not None:
        s = s.scaled(_number(args.t))
    region = s.exponents
    print(f"chart {problem.fan.label(args.sigma)}; exponent coordinates", file=out)
    for v in corners(region, args.tol):
        print("vertex " + fmt_vec(v), file=out)
    for g in region.recession:
        print("ray " + fmt_vec(g), file=out)
    if args.svg:
        _write_svg(args.svg, region_svg(region, f"S set of {problem.fan.label(args.sigma)}", tol=args.tol))


def cmd_eval(args, out):
    problem = _problem(args)
    print(fmt(psi_sigma(problem, _point(problem, args.point), args.tol)), file=out)


def cmd_lelong(args, out):
    problem = _problem(args)
    print(fmt(lelong_number(problem, _point(problem, args.point), args.tol)), file=out)


def cmd_kiselman(args, out):
    problem = _problem(args)
    print(fmt(kiselman_number(problem, _point(problem, args.point), _numbers(args.w), args.tol)), file=out)


def _stratum_name(problem, rays) -> str:
    fan = problem.fan
    for k, mc in enumerate(fan.max_cones):
        if set(mc) == set(rays):
            sections = {v: name for name, v in SECTION_CHARTS.items()}
            extra = f" = {sections[k]}" if problem.n == 2 and len(fan.max_cones) == 3 and k in sections else ""
            return f"orbit of {fan.label(k)}{extra}"
    return "divisor " + ", ".join(f"v{r}" for r in rays) if len(rays) == 1 else f"orbit of rays {rays}"


def cmd_nnef(args, out):
    problem = _problem(args)
    report = nnef_locus(problem, args.tol)
    positive = report.positive
    for s in report.strata:
        mark = "*" if s in positive else " "
        print(f"{mark} {_stratum_name(problem, s.rays)}: lelong {fmt(s.value)}", file=out)
    names = [_stratum_name(problem, s.rays) for s in positive]
    print("non-nef locus: " + ("; ".join(names) if names else "empty"), file=out)


def cmd_negpart(args, out):
    problem = _problem(args)
    for k, c in negative_part(problem, args.tol).items():
        print(f"v{k}: {fmt(c)}", file=out)


def cmd_zariski(args, out):
    report = zariski_polyhedrality(_problem(args), args.tol)
    print(report.verdict, file=out)
    print(f"# {report.detail}", file=out)


def cmd_mideal(args, out):
    problem = _problem(args)
    p = _point(problem, args.point)
    t = _number(args.t)
    if args.gens:
        for m in ideal_generators(problem, p, t, tol=args.tol):
            print(m, file=out)
        return
    if args.f is None:
        f = [Monomial((0,) * problem.n)]
    else:
        f = [Monomial(tuple(int(e) for e in _numbers(x))) for x in args.f.split(";")]
    print(fmt(in_multiplier_ideal(problem, p, f, t, args.tol)), file=out)


def cmd_jumps(args, out):
    problem = _problem(args)
    spectrum = jumping_numbers(problem, _point(problem, args.point), _number(args.max), args.tol)
    for value, pts in spectrum.entries:
        print(f"{fmt(value)}  " + " ".join(fmt_vec(q) for q in pts), file=out)


def cmd_lct(args, out):
    problem = _problem(args)
    print(fmt(lct(problem, _point(problem, args.point), args.tol)), file=out)


def cmd_sections(args, out):
    result = section_count(_problem(args), args.tol)
    for m, c in result.per_point:
        print(f"{fmt_vec(m)}: {c}", file=out)
    print(f"total: {result.total if result.known else 'Unknown'}", file=out)


def cmd_fixture(args, out):
    name = args.name
    if name == "nakayama":
        problem = FIXTURES[name](_number(args.a))
    elif name == "nakayama-symmetric":
        problem = FIXTURES[name](float(_number(args.a)))
    elif name == "pentagon":
        problem = FIXTURES[name](int(args.u), int(args.v))
    else:
        problem = FIXTURES[name]()
    print(io.dumps(problem), file=out)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", help="problem JSON file (default: standard input)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance for approximate data")
    common.add_argument("--assume-projective", action="store_true", help="skip the projectivity check for rank > 2")

    parser = argparse.ArgumentParser(prog="minsing", description="Minimal singular metrics on toric bundles over abelian surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the fan and the data")
    add("pseff", cmd_pseff, "is the bundle pseudo-effective")
    add("big", cmd_big, "is the bundle big")
    p = add("boxnef", cmd_boxnef, "vertices of the nef box")
    p.add_argument("--svg", help="write a plot to this file")
    p = add("sset", cmd_sset, "the S set of a chart")
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--t", help="scale factor")
    p.add_argument("--svg")
    for name, func, help_text in (
        ("eval", cmd_eval, "envelope weight at a point"),
        ("lelong", cmd_lelong, "Lelong number at a point"),
        ("lct", cmd_lct, "log-canonical threshold at a point"),
    ):
        add(name, func, help_text).add_argument("--point", required=True)
    p = add("kiselman", cmd_kiselman, "Kiselman number at a point")
    p.add_argument("--point", required=True)
    p.add_argument("--w", required=True, help="comma separated weights on the vanishing coordinates")
    add("nnef", cmd_nnef, "non-nef locus")
    add("negpart", cmd_negpart, "divisorial negative part")
    add("zariski", cmd_zariski, "is the nef box rational polyhedral")
    p = add("mideal", cmd_mideal, "multiplier ideal membership or generators")
    p.add_argument("--point", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--gens", action="store_true", help="list minimal monomial generators")
    p.add_argument("--f", help="monomial exponents, several separated by ';' (default: 1)")
    p = add("jumps", cmd_jumps, "jumping numbers up to a bound")
    p.add_argument("--point", required=True)
    p.add_argument("--max", required=True)
    add("sections", cmd_sections, "count sections by lattice point")
    p = sub.add_parser("fixture", help="print a worked example as problem JSON")
    p.set_defaults(func=cmd_fixture)
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--a", default="2")
    p.add_argument("--u", default="1")
    p.add_argument("--v", default="2")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except ProblemParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MathError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    return 0


if __name__ == "__main__":
    sys.exit(main())
