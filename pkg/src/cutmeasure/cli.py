"""Command line front end."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .dsl import parse_map, parse_set
from .errors import BracketDiverged, MeasureError
from .measure import EngineConfig, LevelBracket, measure_nu, measure_sb
from .puiseux import format_scalar
from .semiring import MeasureValue, TropicalValue, to_tropical, tropical_to_json, value_to_json
from .sets import has_std_interior

EXIT_OK, EXIT_ERROR, EXIT_BRACKET = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _positive_rational(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return q


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--delta", type=_positive_rational, default=Fraction(1, 8), help="initial partition step")
    common.add_argument("--max-refine", type=int, default=20)
    common.add_argument("--leb-tol", type=_positive_rational, default=Fraction(1, 10**6))
    common.add_argument("--denom-cap", type=_positive_int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="cutmeasure", description="Measures of sets over the Puiseux field.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    m = sub.add_parser("measure", parents=[common], help="measure of a set with finite bounds")
    m.add_argument("--set", required=True, dest="set_file")
    m.add_argument("--semiring", choices=("vtilde", "gamma"), default="vtilde")
    n = sub.add_parser("nu", parents=[common], help="tropical measure of a bounded set")
    n.add_argument("--set", required=True, dest="set_file")
    i = sub.add_parser("invariance", parents=[common], help="compare a set with its image")
    i.add_argument("--set", required=True, dest="set_file")
    i.add_argument("--map", required=True, dest="map_file")
    s = sub.add_parser("std-interior", parents=[common], help="does the standard part have interior")
    s.add_argument("--set", required=True, dest="set_file")
    sub.add_parser("selftest", parents=[common], help="run the built-in check corpus")
    return p


def _config(args) -> EngineConfig:
    if args.max_refine < 0:
        raise MeasureError("--max-refine must be nonnegative")
    return EngineConfig(
        delta0=args.delta, max_refine=args.max_refine, denom_cap=args.denom_cap, leb_tol=args.leb_tol
    )


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise MeasureError(f"cannot read {path}: {e.strerror}") from None


def _render(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(obj), sort_keys=False, separators=(",", ":"))
    return _text(obj)


def _jsonable(obj):
    if isinstance(obj, MeasureValue):
        return value_to_json(obj)
    if isinstance(obj, TropicalValue):
        return tropical_to_json(obj)
    if isinstance(obj, LevelBracket):
        return {
            "bracket": {
                "lower": value_to_json(obj.lower),
                "upper": value_to_json(obj.upper),
                "delta": str(obj.delta),
            }
        }
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "terms"):
        return format_scalar(obj)
    return obj


def _text(obj) -> str:
    if isinstance(obj, LevelBracket):
        return f"bracket [{obj.lower}, {obj.upper}] at delta {obj.delta}"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, dict):
        return "\n".join(f"{k}: {_text(v)}" for k, v in obj.items())
    if hasattr(obj, "terms"):
        return format_scalar(obj)
    return str(obj)


def _run(args, out) -> int:
    cfg = _config(args)
    if args.command == "selftest":
        failed = 0
        from .selftest import run

        for name, ok, detail in run(cfg):
            failed += not ok
            out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
        return EXIT_OK if not failed else EXIT_ERROR
    X = parse_set(_read(args.set_file))
    if args.command == "std-interior":
        out.write(_render(has_std_interior(X), args.format) + "\n")
        return EXIT_OK
    if args.command == "invariance":
        from .transforms import check_invariance

        rep = check_invariance(parse_map(_read(args.map_file)), X, cfg)
        out.write(_render(rep, args.format) + "\n")
        return EXIT_OK if rep["ok"] else EXIT_ERROR
    try:
        if args.command == "nu" or args.semiring == "gamma":
            if args.command == "measure":
                value = to_tropical(measure_sb(X, cfg))
            else:
                value = measure_nu(X, cfg)
        else:
            value = measure_sb(X, cfg)
    except BracketDiverged as e:
        out.write(_render(e.bracket, args.format) + "\n")
        return EXIT_BRACKET
    out.write(_render(value, args.format) + "\n")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _run(args, out)
    except MeasureError as e:
        if args.format == "json":
            out.write(json.dumps(e.to_dict(), separators=(",", ":")) + "\n")
        else:
            pos = "" if e.pos is None else f" at offset {e.pos}"
            sys.stderr.write(f"error ({e.code}){pos}: {e.message}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
