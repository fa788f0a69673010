"""Command-line entry point."""

import argparse
import sys

from .errors import ParseError, SchemaError, UnknownPreset
from .report import (
    EXIT_INTERNAL,
    EXIT_INVALID,
    PRESET_NAMES,
    canonical_json,
    format_text,
    parse_input,
    preset,
    run,
    serialize,
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _params(items) -> dict:
    out = {}
    for item in items or ():
        for part in item.split():
            key, sep, value = part.partition("=")
            if not sep:
                raise SchemaError(f"preset parameter {part!r} must look like key=value", part)
            out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-transitions", description="Toric GIT data, blow-ups, total spaces and narrow cohomology checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("validate", "check the standing assumptions"), ("fan", "build the stacky fan"), ("cohomology", "present the cohomology ring"), ("transition", "run the full transition pipeline")):
        p = sub.add_parser(name, help=text)
        p.add_argument("file", help="input JSON document, or - for standard input")
        p.add_argument("--json", action="store_true", help="print the JSON report instead of text")
        p.add_argument("--out", help="also write the JSON report to this path")
        if name == "cohomology":
            p.add_argument("--narrow", action="store_true", help="include the narrow subspace")
            p.add_argument("--sectors", action="store_true", help="include every twisted sector")
            p.add_argument("--space", choices=("X", "X_tilde", "T", "T_bar", "T_tilde"), help="which space to present")
    p = sub.add_parser("preset", help="print a preset input document")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--param", action="extend", nargs="+", metavar="KEY=VALUE", help="preset parameter, e.g. m=5 k=2 d=5; lists use commas")
    p.add_argument("--run", action="store_true", help="run the preset instead of printing it")
    p.add_argument("--json", action="store_true", help="with --run, print the JSON report")
    p.add_argument("--out", help="with --run, also write the JSON report to this path")
    return parser


def _emit(report: dict, args) -> None:
    text = canonical_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text if args.json else format_text(report))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            doc = preset(args.name, **_params(args.param))
            if not args.run:
                sys.stdout.write(serialize(doc))
                return 0
        else:
            doc = parse_input(_read(args.file))
            options = {}
            if args.command == "cohomology":
                options = {"narrow": args.narrow or doc.narrow, "sectors": args.sectors or doc.sectors}
                if args.space:
                    options["space"] = args.space
            doc = doc.with_request(args.command, **options)
    except (ParseError, SchemaError, UnknownPreset) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL
    report, code = run(doc)
    _emit(report, args)
    return code
