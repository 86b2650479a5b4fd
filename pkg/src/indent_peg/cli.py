"""Command-line interface: ``indent-peg parse|check|transform|equiv|show``.

Exit codes: 0 success / equivalent / well-formed; 1 parse failure, ill-formed
grammar or disagreement found; 2 fuel exhausted; 3 usage, grammar or input
errors; 4 grammar not well-formed before splitting; 5 ambiguous consumption
during alignment elimination.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .analysis import VARIANTS, approximate, well_formed
from .dsl import grammar_to_json, parse_grammar_text, pretty_print
from .errors import (
    AmbiguousConsumptionError, IndentPegError, NotWellFormedError,
)
from .fuzz import check_equivalence
from .grammar import Grammar, validate
from .interpreter import (
    FuelExhausted, Success, default_fuel, lex, outcome_to_json, parse,
)
from .relations import DiffRel, parse_relation
from .transform import STAGES, run_pipeline

EXIT_OK, EXIT_FAIL, EXIT_FUEL, EXIT_USAGE, EXIT_NOT_WF, EXIT_AMBIGUOUS = range(6)


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _relation(text: str) -> DiffRel:
    try:
        return parse_relation(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_grammar(path: str) -> Grammar:
    return parse_grammar_text(_read(path))


def _check_requirements(g: Grammar, mode: DiffRel, force: bool, label: str = "grammar") -> None:
    req = dict(g.requires)
    wanted = req.get("token-mode")
    if wanted is not None and not force:
        if parse_relation(wanted) != mode:
            raise UsageError(
                f"{label} requires token mode {wanted} but {mode} was given "
                f"(use --token-mode {wanted}, or --force)")


def _emit_json(data: dict) -> None:
    print(json.dumps(data, indent=2))


def cmd_parse(args) -> int:
    g = _load_grammar(args.grammar)
    _check_requirements(g, args.token_mode, args.force)
    tokens = lex(_read(args.input), g.terminals if args.input_format == "raw" else None,
                 args.input_format)
    fuel = args.fuel if args.fuel is not None else default_fuel()
    outcome = parse(g, tokens, args.token_mode, fuel=fuel, strict=args.strict)
    _emit_json({"schema": 1, **outcome_to_json(outcome)})
    if isinstance(outcome, Success):
        return EXIT_OK
    if isinstance(outcome, FuelExhausted):
        return EXIT_FUEL
    return EXIT_FAIL


def check_report(g: Grammar, variant: str) -> dict:
    approx = approximate(g, variant)
    wf = well_formed(g, approx)
    rep = validate(g, generated_names_ok=True)
    return {
        "schema": 1,
        "variant": variant,
        "rules": {name: {"approx": sorted(approx.rule(name)), "well_formed": wf.rule(name)}
                  for name in g.rules},
        "start": {"approx": sorted(approx[g.start]), "well_formed": wf.verdict(g.start)},
        "well_formed": wf.grammar_ok,
        "failures": [{"where": where, "witness": w} for where, w in wf.failures()],
        "warnings": rep.warnings,
        "features": {"repetition_free": rep.repetition_free,
                     "alignment_free": rep.alignment_free,
                     "position_free": rep.position_free},
    }


def _format_codes(codes) -> str:
    return "{" + ", ".join(str(c) for c in codes) + "}"


def cmd_check(args) -> int:
    g = _load_grammar(args.grammar)
    report = check_report(g, args.variant)
    if args.format == "json":
        _emit_json(report)
    else:
        print(f"variant: {report['variant']}")
        for name, entry in report["rules"].items():
            mark = "ok" if entry["well_formed"] else "NOT well-formed"
            print(f"  {name}: approx {_format_codes(entry['approx'])}, {mark}")
        print(f"  start: approx {_format_codes(report['start']['approx'])}")
        print("well-formed: " + ("yes" if report["well_formed"] else "no"))
        for f in report["failures"]:
            print(f"  in {f['where']}: {f['witness']}")
        for w in report["warnings"]:
            print(f"warning: {w}")
    return EXIT_OK if report["well_formed"] else EXIT_FAIL


def cmd_transform(args) -> int:
    g = _load_grammar(args.grammar)
    try:
        result = run_pipeline(g, args.upto, args.variant, args.simplify)
    except NotWellFormedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        stages = getattr(exc, "stages", [])
        if stages:
            print(json.dumps({"schema": 1, "variant": args.variant,
                              "stages": [s.to_json() for s in stages]}, indent=2),
                  file=sys.stderr)
        return EXIT_NOT_WF
    except AmbiguousConsumptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    text = pretty_print(result.grammar)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    report = json.dumps(result.to_json(), indent=2)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report + "\n")
    else:
        print(report, file=sys.stderr)
    return EXIT_OK


def cmd_equiv(args) -> int:
    ga = _load_grammar(args.grammar_a)
    gb = _load_grammar(args.grammar_b)
    _check_requirements(ga, args.token_mode, args.force, "grammar A")
    _check_requirements(gb, args.token_mode, args.force, "grammar B")
    ta, tb = ga.terminals, gb.terminals
    if not (ta <= tb or tb <= ta):
        raise UsageError("grammars do not share a terminal alphabet: "
                         f"{sorted(ta)} vs {sorted(tb)}")
    report = check_equivalence(ga, gb, trials=args.trials, seed=args.seed,
                               max_len=args.max_len, max_col=args.max_col,
                               mode=args.token_mode, fuel=args.fuel)
    if args.format == "json":
        _emit_json(report.to_json())
    else:
        print(f"{report.trials} trials (seed {report.seed}), "
              f"{len(report.disagreements)} disagreement(s)")
        for d in report.disagreements:
            print(f"  {d}")
    return EXIT_OK if report.equivalent else EXIT_FAIL


def cmd_show(args) -> int:
    g = _load_grammar(args.grammar)
    if args.format == "json":
        _emit_json(grammar_to_json(g))
    else:
        sys.stdout.write(pretty_print(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="indent-peg",
                        description="Indentation-sensitive PEGs: parse, analyse, transform.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    mode_help = "token mode: eq, gt, ge, any, or a literal such as '>=' or 'diff[1..3]'"

    sp = sub.add_parser("parse", help="parse an input with a grammar")
    sp.add_argument("grammar")
    sp.add_argument("input", help="input file, or - for stdin")
    sp.add_argument("--token-mode", type=_relation, default="any", help=mode_help)
    sp.add_argument("--input-format", choices=("raw", "annotated"), default="raw")
    sp.add_argument("--fuel", type=int, default=None,
                    help="derivation step budget (default: $INDENT_PEG_FUEL or 10^6)")
    sp.add_argument("--strict", action="store_true", help="use the strict choice rule")
    sp.add_argument("--force", action="store_true",
                    help="ignore the grammar's requires header")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("check", help="approximation and well-formedness report")
    sp.add_argument("grammar")
    sp.add_argument("--variant", choices=VARIANTS, default="baseline")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("transform", help="run the elimination pipeline")
    sp.add_argument("grammar")
    sp.add_argument("--upto", choices=STAGES, default="deloc")
    sp.add_argument("--variant", choices=VARIANTS, default="baseline")
    sp.add_argument("--simplify", action="store_true",
                    help="prune always-failing alternatives afterwards")
    sp.add_argument("-o", "--output", help="write the grammar here instead of stdout")
    sp.add_argument("--report", help="write the JSON stage report here instead of stderr")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("equiv", help="randomized differential comparison of two grammars")
    sp.add_argument("grammar_a")
    sp.add_argument("grammar_b")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-len", type=int, default=5)
    sp.add_argument("--max-col", type=int, default=6)
    sp.add_argument("--token-mode", type=_relation, default="any", help=mode_help)
    sp.add_argument("--fuel", type=int, default=None)
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--format", choices=("text", "json"), default="json")
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("show", help="pretty-print a grammar")
    sp.add_argument("grammar")
    sp.add_argument("--format", choices=("dsl", "json"), default="dsl")
    sp.set_defaults(func=cmd_show)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, IndentPegError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
