"""
greenfields command line.

Exit status: 0 pass, 1 fail, 2 usage or syntax error, 3 bound exceeded.
"""

import argparse
import json
import sys
from typing import Optional, Sequence

import structlog

from algebra.bisets import parse_word
from algebra.burnside import table_of_marks
from algebra.characters import character_table
from algebra.errors import BoundExceededError, GreenfieldsError, SpecSyntaxError
from algebra.groups import make_group
from algebra.matrices import rank
from checks import field_checks, properties
from checks.reports import CheckReport, render
from dependencies import get_cache_store, get_settings, load_settings, set_settings
from green import engine
from green.spec_parser import parse_spec
from shared.logger_config import configure_logger

logger = structlog.get_logger()

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3

_VERDICT_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "out-of-scope-limit": EXIT_BOUND}


def _emit(payload: dict, text_lines: list[str]) -> None:
    if get_settings().output_format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(text_lines))


def _emit_report(report: CheckReport) -> int:
    print(render(report, get_settings().output_format))
    return _VERDICT_EXIT[report.verdict]


def _emit_reports(reports: list[CheckReport]) -> int:
    fmt = get_settings().output_format
    if fmt == "json":
        print(json.dumps([json.loads(r.to_json()) for r in reports], indent=2))
    else:
        print("\n\n".join(r.to_text() for r in reports))
    return max(_VERDICT_EXIT[r.verdict] for r in reports) if reports else EXIT_PASS


def _grid(rows: list[list[str]]) -> list[str]:
    if not rows or not rows[0]:
        return []
    width = max(len(x) for row in rows for x in row)
    return [" ".join(x.rjust(width) for x in row) for row in rows]


# -- subcommands ---------------------------------------------------------------------


def cmd_dims(args) -> int:
    A = parse_spec(args.spec)
    G = make_group(args.group)
    basis = engine.evaluate(A, G)
    _emit(
        {"spec": A.spec, "group": G.label, "dimension": basis.dimension, "basis": basis.labels},
        [f"{A.spec}({G.label}): dimension {basis.dimension}", *basis.labels],
    )
    return EXIT_PASS


def cmd_gram(args) -> int:
    A = parse_spec(args.spec)
    H = make_group(args.H)
    L = make_group(args.L) if args.L else None
    gram = engine.gram_matrix(A, H, L)
    if gram.matrix is not None:
        rows = gram.matrix.to_strings()
        r = rank(gram.matrix)
    else:
        rows = [[e.format() for e in row] for row in gram.entries]
        r = None
    _emit(
        {"spec": A.spec, "H": gram.H, "L": gram.L, "basis": gram.labels, "matrix": rows,
         "rank": r, "routes_agree": gram.routes_agree},
        [f"<-,->_{{{gram.H},{gram.L}}} on {A.spec}({gram.H}x{gram.L})", *_grid(rows),
         f"rank: {r if r is not None else 'n/a (A(1) is not one-dimensional)'}",
         f"routes agree: {'yes' if gram.routes_agree else 'no'}"],
    )
    return EXIT_PASS if gram.routes_agree else EXIT_FAIL


def cmd_check(args) -> int:
    A = parse_spec(args.spec)
    if args.check == "green-field":
        return _emit_report(field_checks.green_field_certificate(A, args.catalog))
    if args.check == "field-at-one":
        return _emit_report(field_checks.is_field_at_one(A))
    if args.check == "strict":
        reports = []
        for pair in args.pairs:
            if "," not in pair:
                raise argparse.ArgumentTypeError(f"--pairs expects G,H items, got {pair!r}")
            g, h = pair.split(",", 1)
            reports.append(field_checks.strict_condition6(A, make_group(g), make_group(h)))
        return _emit_reports(reports)
    if args.check == "semisimple":
        return _emit_report(field_checks.endo_semisimplicity(A, make_group(args.L)))
    if args.check == "anisotropic":
        return _emit_report(field_checks.anisotropy_check(A, make_group(args.L)))
    if args.check == "tensor":
        G, L, H = (make_group(x) for x in (args.G, args.L, args.H))
        return _emit_report(field_checks.tensor_injectivity(A, G, L, H))
    if args.check == "essential":
        H = make_group(args.H)
        d = field_checks.essential_dim(A, H)
        _emit({"spec": A.spec, "group": H.label, "essential_dimension": d},
              [f"essential algebra of {A.spec} at {H.label}: dimension {d}"])
        return EXIT_PASS
    raise argparse.ArgumentTypeError(f"unknown check {args.check!r}")


def cmd_props(args) -> int:
    A = parse_spec(args.spec)
    report = properties.property_report(
        A, names=args.suite or None, samples=args.samples, groups=args.groups or None
    )
    return _emit_report(report)


def cmd_example3(args) -> int:
    return _emit_report(field_checks.strictness_failure_report(args.p))


def cmd_act(args) -> int:
    A = parse_spec(args.spec)
    G = make_group(args.group)
    w = parse_word(args.word, G)
    if not 0 <= args.index < A.dim(G):
        raise SpecSyntaxError(f"basis index {args.index} out of range for {A.spec}({G.label})")
    x = engine.basis_element(A, G, args.index)
    y = engine.act(A, w, x)
    _emit(
        {"spec": A.spec, "word": str(w), "source": x.format(), "target_group": y.group.label,
         "basis": y.labels, "coeffs": y.to_strings()},
        [f"{w}: {x.format()} -> {y.format()} in {A.spec}({y.group.label})"],
    )
    return EXIT_PASS


def cmd_marks(args) -> int:
    table = table_of_marks(make_group(args.group))
    rows = table.matrix.to_strings()
    _emit({"group": table.group.label, "labels": table.matrix.row_labels, "marks": rows},
          [" ".join(table.matrix.row_labels), *_grid(rows)])
    return EXIT_PASS


def cmd_chartable(args) -> int:
    table = character_table(make_group(args.group))
    rows = table.format_rows()
    _emit({"group": table.group.label, "labels": table.labels, "rows": rows},
          [f"{label}: {' '.join(row)}" for label, row in zip(table.labels, rows)])
    return EXIT_PASS


def cmd_cache(args) -> int:
    removed = get_cache_store().clear()
    _emit({"removed": removed}, [f"removed {removed} cache entries"])
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenfields", description="Exact Green biset functor checks"
    )
    parser.add_argument("--format", choices=["text", "json"], default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--bound", type=int, default=None, help="Enumeration bound for lattices and tables."
    )
    parser.add_argument("--config", default=None, help="key=value settings file.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("dims", help="Basis of an evaluation A(G).")
    p.add_argument("spec")
    p.add_argument("group")
    p.set_defaults(handler=cmd_dims)

    p = subparsers.add_parser("gram", help="Gram matrix of <-,->_{H,L}.")
    p.add_argument("spec")
    p.add_argument("H")
    p.add_argument("L", nargs="?")
    p.set_defaults(handler=cmd_gram)

    check = subparsers.add_parser("check", help="Run a certificate.")
    checks = check.add_subparsers(dest="check", required=True)
    c = checks.add_parser("green-field")
    c.add_argument("spec")
    c.add_argument("--catalog", nargs="+", default=None)
    c = checks.add_parser("field-at-one")
    c.add_argument("spec")
    c = checks.add_parser("strict")
    c.add_argument("spec")
    c.add_argument("--pairs", nargs="+", required=True, help="G,H pairs")
    for name in ("semisimple", "anisotropic"):
        c = checks.add_parser(name)
        c.add_argument("spec")
        c.add_argument("L")
    c = checks.add_parser("tensor")
    c.add_argument("spec")
    c.add_argument("G")
    c.add_argument("L")
    c.add_argument("H")
    c = checks.add_parser("essential")
    c.add_argument("spec")
    c.add_argument("H")
    check.set_defaults(handler=cmd_check)

    p = subparsers.add_parser("props", help="Seeded property suites.")
    p.add_argument("spec")
    p.add_argument("--suite", action="append", choices=sorted(properties.SUITES))
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--groups", nargs="+", default=None)
    p.set_defaults(handler=cmd_props)

    p = subparsers.add_parser("example3", help="The non-strict shifted Burnside example.")
    p.add_argument("p", type=int, choices=[2, 3])
    p.set_defaults(handler=cmd_example3)

    p = subparsers.add_parser("act", help="Apply a biset word to a basis element.")
    p.add_argument("spec")
    p.add_argument("group")
    p.add_argument("word")
    p.add_argument("index", type=int)
    p.set_defaults(handler=cmd_act)

    p = subparsers.add_parser("marks", help="Table of marks.")
    p.add_argument("group")
    p.set_defaults(handler=cmd_marks)

    p = subparsers.add_parser("chartable", help="Character table.")
    p.add_argument("group")
    p.set_defaults(handler=cmd_chartable)

    p = subparsers.add_parser("cache", help="Manage the on-disk cache.")
    p.add_argument("action", choices=["clear"])
    p.set_defaults(handler=cmd_cache)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logger()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_settings(
            load_settings(
                config_file=args.config, enumeration_bound=args.bound, seed=args.seed,
                output_format=args.format,
            )
        )
    except ValueError as err:
        print(f"greenfields: invalid settings: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except BoundExceededError as err:
        logger.warning("Bound exceeded", what=err.what, order=err.order, bound=err.bound)
        print(f"greenfields: {err}", file=sys.stderr)
        return EXIT_BOUND
    except (GreenfieldsError, argparse.ArgumentTypeError) as err:
        logger.error("Command failed", command=args.command, error=str(err))
        print(f"greenfields: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
