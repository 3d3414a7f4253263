"""Command line front end.

Exit codes: 0 when the property holds (empty, subtype, equivalent,
consistent), 1 when it does not, 2 for usage, parse and validation errors,
3 when an engine limit is hit.  ``witness`` follows ``check-empty``: it exits
0 and prints ``none`` for an empty type.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .engine import EngineConfig, etype, witness
from .model import And, Not, Or, RegTypeError
from .normalize import LimitError, simplify
from .oracle import cross_check
from .syntax import format_defs, parse_definitions, parse_type_expr


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--defs", required=True, metavar="FILE", help="type definitions file")
    common.add_argument("--dnf-limit", type=int, default=10**6, metavar="N")
    common.add_argument("--recursion-limit", type=int, default=2000, metavar="N")
    common.add_argument("--trace", metavar="FILE", help="write the evaluation tree as JSON")
    common.add_argument("--stats", action="store_true", help="print search statistics as JSON")

    p = argparse.ArgumentParser(prog="regtype", description="Emptiness, inclusion and "
                                "equivalence of regular types with set operators.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("check-empty", parents=[common], help="is the type empty?")
    s.add_argument("expr")
    s = sub.add_parser("check-subtype", parents=[common], help="is EXPR1 included in EXPR2?")
    s.add_argument("expr1")
    s.add_argument("expr2")
    s = sub.add_parser("check-equiv", parents=[common], help="do EXPR1 and EXPR2 denote the same set?")
    s.add_argument("expr1")
    s.add_argument("expr2")
    s = sub.add_parser("witness", parents=[common], help="print a term of the type")
    s.add_argument("expr")
    sub.add_parser("normalize", parents=[common], help="print simplified definitions")
    s = sub.add_parser("oracle", parents=[common], help="cross-check engine and enumeration")
    s.add_argument("expr")
    s.add_argument("--depth", type=int, default=4, metavar="N")
    s.add_argument("--seed", type=int, default=None)
    return p


def _query(args, defs, config, e):
    res = etype(e, defs, config)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(res.trace.to_dict(), fh, indent=1)
    return res


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with open(args.defs, encoding="utf-8") as fh:
            defs = parse_definitions(fh.read())
        if args.command == "normalize":
            out.write(format_defs(simplify(defs)))
            return 0
        config = EngineConfig(args.dnf_limit, bool(args.trace), args.recursion_limit)
        simple = simplify(defs)

        if args.command == "check-empty":
            res = _query(args, simple, config, parse_type_expr(args.expr, defs))
            print("empty" if res.empty else "nonempty", file=out)
            code = 0 if res.empty else 1
        elif args.command in ("check-subtype", "check-equiv"):
            e1 = parse_type_expr(args.expr1, defs)
            e2 = parse_type_expr(args.expr2, defs)
            if args.command == "check-subtype":
                q = And(e1, Not(e2))
                yes, no = "subtype", "not-subtype"
            else:
                q = Or(And(e1, Not(e2)), And(e2, Not(e1)))
                yes, no = "equiv", "not-equiv"
            res = _query(args, simple, config, q)
            print(yes if res.empty else no, file=out)
            if not res.empty:
                print(f"witness: {witness(q, simple, config)}", file=out)
            code = 0 if res.empty else 1
        elif args.command == "witness":
            e = parse_type_expr(args.expr, defs)
            res = _query(args, simple, config, e)
            t = witness(e, simple, config)
            print("none" if t is None else t, file=out)
            code = 0 if t is None else 1
        else:  # oracle
            e = parse_type_expr(args.expr, defs)
            res = _query(args, simple, config, e)
            report = cross_check(defs, e, args.depth, args.seed)
            print("contradiction" if report.contradiction else "consistent", file=out)
            print(json.dumps(report.to_dict(), sort_keys=True), file=out)
            code = 1 if report.contradiction else 0
        if args.stats:
            print(json.dumps(res.stats.to_dict(), sort_keys=True), file=out)
        return code
    except LimitError as exc:
        print(f"regtype: limit exceeded: {exc}", file=err)
        return 3
    except (RegTypeError, OSError) as exc:
        print(f"regtype: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
