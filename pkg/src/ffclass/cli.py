"""Command-line front end.

Every command writes one JSON document (or, with ``--format text``, a
plain table) to stdout and notes to stderr.  Exit status: 0 success,
1 usage or input error, 2 computational error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bounds as bnd
from .core import DesignError, classify, format_design, is_identifiable, parse_design
from .indicator import indicator_coefficients
from .search import (
    BudgetExceeded,
    SingularInformationError,
    conjecture_audit,
    exhaustive_search,
    known_maxdet,
    saturated_exhaustive,
    saturated_local_search,
)
from .search.audit import HEADER, MAXDET_TABLE
from .search.exhaustive import DEFAULT_BUDGET
from .search.local import DEFAULT_RESTARTS


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty range {text}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _read_design(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse_design(text)
    except DesignError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _cmd_classify(args):
    d = _read_design(args.file)
    res = classify(d)
    doc = {"s": d.s, "r": d.r, **res.to_json(), "identifiable": is_identifiable(d)}
    lines = [
        f"s = {d.s}, r = {d.r}",
        f"class: {res.design_class.value}",
        f"affine dimension: {res.affine_dim} ({res.num_generators} generating relation(s))",
    ]
    lines += [f"  {rel}" for rel in res.relations]
    if res.constant_factors:
        lines.append(f"constant (degenerate) factors: {list(res.constant_factors)}")
    lines.append(f"main effects identifiable: {doc['identifiable']}")
    return doc, "\n".join(lines)


def _cmd_indicator(args):
    d = _read_design(args.file)
    poly = indicator_coefficients(d)
    den = poly.denominator
    terms = [
        {"word": list(word), "numerator": n, "coefficient": _decimal(n, den)}
        for word, n in poly.terms()
    ]
    text = "\n".join(
        f"{'x' + '*x'.join(map(str, t['word'])) if t['word'] else '1':<20} {t['coefficient']}" for t in terms
    )
    return terms, text


def _decimal(n: int, den: int) -> str:
    # den is a power of two, so n / den has a finite decimal expansion
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, den)
    if not frac:
        return f"{sign}{whole}"
    digits = ""
    while frac:
        frac *= 10
        digits += str(frac // den)
        frac %= den
    return f"{sign}{whole}.{digits}"


def _cmd_bounds(args):
    if (args.runs is None) == (args.range is None):
        raise UsageError("give exactly one of --runs or --range")
    if args.runs is not None:
        rep = bnd.bound_report(args.runs)
        return rep.to_json(), _bound_text([rep])
    reps = [bnd.bound_report(r) for r in args.range]
    return [rep.to_json() for rep in reps], _bound_text(reps)


def _bound_text(reps):
    out = [f"{'r':>4} {'bound':>13} {'exact':>6} {'v2':>5} {'attained':>12}  value"]
    for rep in reps:
        out.append(
            f"{rep.r:>4} {rep.applicable_bound.value:>13} {str(rep.exact):>6} "
            f"{rep.two_adic_valuation_of_bound:>5} {rep.attainment:>12}  {rep.bound_value}"
        )
    return "\n".join(out)


def _result_text(res) -> str:
    lines = [
        f"criterion {res.criterion}: best value {res.value_string()}",
        f"evaluated {res.num_evaluated}, maximizers {res.num_maximizers}, exhaustive {res.exhaustive_flag}",
        f"class: {res.classification.design_class.value}",
    ]
    if "maximizer_classes" in res.extra:
        lines.append(f"classes of all maximizers: {res.extra['maximizer_classes']}")
    lines += [f"  {rel}" for rel in res.classification.relations]
    lines.append(format_design(res.best_design).rstrip())
    return "\n".join(lines)


def _cmd_search(args):
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    res = exhaustive_search(
        args.factors, args.runs, args.criterion, budget=args.budget, threads=args.threads, census=not args.no_census
    )
    return res.to_json(), _result_text(res)


def _cmd_maxdet(args):
    if args.exhaustive and args.local:
        raise UsageError("--exhaustive and --local are mutually exclusive")
    local = args.local or (not args.exhaustive and args.runs > 6)
    if local:
        target = args.target
        if target is None and args.runs in MAXDET_TABLE:
            target = known_maxdet(args.runs)
        print(f"local search r={args.runs} seed={args.seed} restarts={args.restarts} target={target}", file=sys.stderr)
        res = saturated_local_search(args.runs, seed=args.seed, restarts=args.restarts, target=target)
    else:
        res = saturated_exhaustive(args.runs)
    doc = res.to_json()
    doc["valuation"] = bnd.two_adic_valuation(res.best_value)
    doc["valuation_class"] = bnd.saturated_class_from_det(res.best_value, args.runs).value
    return doc, _result_text(res)


def _cmd_conjecture(args):
    print(f"conjecture audit, seed {args.seed}", file=sys.stderr)
    rows = conjecture_audit(args.runs, seed=args.seed, restarts=args.restarts)
    return [row.to_json() for row in rows], "\n".join([HEADER] + [row.text() for row in rows])


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")

    parser = _Parser(prog="ffclass", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="classify a design file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("indicator", parents=[common], help="indicator-function coefficients")
    p.add_argument("file")
    p.set_defaults(func=_cmd_indicator)

    p = sub.add_parser("bounds", parents=[common], help="maximal-determinant bounds")
    p.add_argument("--runs", type=int)
    p.add_argument("--range", type=_int_range, metavar="A..B")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("search", parents=[common], help="exhaustive optimal design search")
    p.add_argument("--factors", type=int, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--criterion", choices=("d", "a", "e"), default="d")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-census", action="store_true", help="skip tallying the class of every maximizer")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("maxdet", parents=[common], help="saturated maximal |det M| search")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--local", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--target", type=int)
    p.set_defaults(func=_cmd_maxdet)

    p = sub.add_parser("conjecture", parents=[common], help="audit the mod-8 rule on desk-scale orders")
    p.add_argument("--runs", type=_int_range, default=list(range(4, 14)), metavar="A..B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.set_defaults(func=_cmd_conjecture)
    return parser


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc, text = args.func(args)
    except UsageError as exc:
        print(json.dumps({"error": str(exc)}))
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceeded, SingularInformationError, ValueError, ArithmeticError) as exc:
        print(json.dumps({"error": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(json.dumps(doc, indent=2) if args.format == "json" else text, args.output)
    return 0


def main() -> None:
    sys.exit(run())
