"""Command-line front end.

Exit codes: 0 success, 1 a check or identity failed, 2 usage, parse or
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .parser import ParseError, format_polynomial, normal_order
from .reporting import render, render_table
from .representations import InvalidDimension
from .suites import FORMATS, ConfigError, RunConfig, config_from_mapping, parse_config_text
from . import suites


def _error(exc: Exception) -> int:
    kind = getattr(exc, "kind", type(exc).__name__)
    message = exc.describe() if isinstance(exc, ParseError) else f"{kind}: {exc}"
    print(message, file=sys.stderr)
    return 2


def cmd_normal_order(args) -> int:
    try:
        poly = normal_order(args.expr)
    except ParseError as exc:
        return _error(exc)
    print(format_polynomial(poly))
    return 0


def cmd_check(args) -> int:
    try:
        diff = normal_order(args.lhs) - normal_order(args.rhs)
    except ParseError as exc:
        return _error(exc)
    if diff.is_zero():
        print("EQUAL")
        return 0
    print("UNEQUAL")
    print(f"difference: {format_polynomial(diff)}")
    return 1


def _parse_tol(items: List[str]) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--tol expects KEY=VAL, got {item!r}")
        key, value = item.split("=", 1)
        try:
            out[key.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value {value!r}") from exc
    return out


def _load_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        cfg = config_from_mapping(parse_config_text(text), cfg)
    flags = {
        "rep": args.rep,
        "dim": args.dim,
        "hbar": args.hbar,
        "spacing": args.spacing,
        "seed": args.seed,
        "format": args.format,
        "suite": args.suite,
        "states": args.states,
        "tol": _parse_tol(args.tol) or None,
    }
    return config_from_mapping(flags, cfg)


def cmd_verify(args) -> int:
    try:
        cfg = _load_config(args).validate()
        reports = suites.run(cfg)
    except (ConfigError, InvalidDimension, ValueError) as exc:
        return _error(exc)
    sys.stdout.write(render(reports, cfg.output_format))
    return 0 if all(r.ok for r in reports) else 1


def cmd_sweep(args) -> int:
    try:
        cfg = _load_config(args)
        dims = [int(d) for d in args.dims.split(",") if d.strip()] if args.dims else []
        if not dims:
            raise ConfigError("--dims needs at least two dimensions")
        columns, rows = suites.sweep(cfg, dims, args.box)
    except (ConfigError, InvalidDimension, ValueError) as exc:
        return _error(exc)
    sys.stdout.write(render_table(columns, rows, cfg.output_format))
    return 0


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--rep", choices=["fock", "grid", "clock"])
    p.add_argument("--dim", type=int)
    p.add_argument("--hbar", type=float)
    p.add_argument("--spacing", type=float)
    p.add_argument("--tol", action="append", metavar="KEY=VAL")
    p.add_argument("--seed", type=int)
    p.add_argument("--suite", help="comma-separated suite names")
    p.add_argument("--states", type=int, help="random states for the uncertainty suite")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--config", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylkin",
        description="Exact and numerical checks of the canonical XP commutator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-order", help="print the normal-ordered form of an expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_normal_order)

    p = sub.add_parser("check", help="test two expressions for equality")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="run numerical check suites")
    _add_run_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="tabulate deviations over several dimensions")
    _add_run_flags(p)
    p.add_argument("--dims", required=True, help="comma-separated dimensions")
    p.add_argument("--box", type=float, default=1.0, help="grid box length")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
