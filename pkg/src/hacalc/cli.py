"""Command line front end: ``hacalc {hac,leavitt,cohn,curve,oracle}``.

Every subcommand prints one JSON document (sorted keys, ``"schema": 1``).
Exit codes: 0 success, 2 bad input, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import InvariantViolation, PreconditionError
from .padic import PadicConfig, PadicScalar

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on its own; route it through PreconditionError so
    # run_cli can return instead of raising SystemExit
    def error(self, message):
        raise PreconditionError(message)


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, PadicScalar):
        return obj.encode()
    if isinstance(obj, (tuple, set, frozenset)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: dict) -> str:
    doc = dict(obj)
    doc.setdefault("schema", 1)
    return json.dumps(doc, sort_keys=True, indent=2, default=_default) + "\n"


def _int_list(text: str) -> List[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"expected a comma separated list of integers, got {text!r}")
    if not vals:
        raise PreconditionError("empty list")
    return vals


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise PreconditionError(f"{path}: {exc.strerror}")


def _load_json(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path}: line {exc.lineno}: {exc.msg}")


# ---------------------------------------------------------------------------


def cmd_hac(args) -> dict:
    from .freealg import LiftSpec
    from .pipeline import PipelineConfig, canonical_lift, hac_truncated

    obj = _load_json(args.algebra)
    if not isinstance(obj, dict):
        raise PreconditionError(f"{args.algebra}: line 1: expected a JSON object")
    lift = LiftSpec.from_json(obj)
    prec = args.precision if args.precision is not None else lift.precision
    if args.lift == "canonical":
        lift = canonical_lift(lift.p, lift.basis, _table_of(lift), precision=prec)
    cfg = PipelineConfig(PadicConfig(lift.p, prec), lift,
                         tuple(_int_list(args.deg_caps)), tuple(_int_list(args.tube_levels)),
                         args.tower_length, args.tol_val, args.lift)
    return hac_truncated(cfg).to_json()


def _table_of(lift) -> dict:
    r = lift.rank
    return {(i, j): list(lift.mu[i][j]) for i in range(r) for j in range(r)}


def _graph(path: str):
    from .leavitt import parse_graph
    text = _read(path)
    try:
        return parse_graph(text)
    except PreconditionError as exc:
        raise PreconditionError(f"{path}: {exc}")


def cmd_leavitt(args) -> dict:
    from .leavitt import ha_leavitt
    return ha_leavitt(_graph(args.graph)).to_json()


def cmd_cohn(args) -> dict:
    from .leavitt import ha_cohn
    return ha_cohn(_graph(args.graph)).to_json()


def cmd_curve(args) -> dict:
    from .curves import LocalizedRing, de_rham
    ring = LocalizedRing.from_poly(args.f, args.p, degree_cap=args.deg_cap,
                                   laurent_cap=args.laurent_cap)
    return de_rham(ring, with_log=not args.no_log).to_json()


def cmd_oracle(args) -> dict:
    from . import oracles
    fn = oracles.SUITES[args.suite]
    kw = {}
    if args.suite != "tube":
        if args.trials is not None:
            kw["trials"] = args.trials
        kw["seed"] = args.seed
    res = fn(**kw)
    res = dict(res, suite=args.suite, passed=not res["failures"])
    return res


def build_parser() -> argparse.ArgumentParser:
    from .oracles import SUITES

    ap = _Parser(prog="hacalc", description="Truncated analytic cyclic homology calculator")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    h = sub.add_parser("hac", help="run the truncated pipeline on an algebra file")
    h.add_argument("--algebra", required=True, help="JSON lift description")
    h.add_argument("--tube-levels", default="2,3,4")
    h.add_argument("--deg-caps", default="8,12,16")
    h.add_argument("--tower-length", type=int, default=None)
    h.add_argument("--tol-val", type=int, default=None)
    h.add_argument("--precision", type=int, default=None)
    h.add_argument("--lift", choices=("given", "canonical"), default="given")
    h.set_defaults(func=cmd_hac)

    for name, fn, doc in (("leavitt", cmd_leavitt, "Leavitt path algebra of a graph"),
                          ("cohn", cmd_cohn, "Cohn path algebra of a graph")):
        g = sub.add_parser(name, help=doc)
        g.add_argument("--graph", required=True)
        g.set_defaults(func=fn)

    c = sub.add_parser("curve", help="de Rham cohomology of the curve F_p[x, 1/f]")
    c.add_argument("--f", required=True)
    c.add_argument("--p", type=int, default=5)
    c.add_argument("--deg-cap", type=int, default=8)
    c.add_argument("--laurent-cap", type=int, default=4)
    c.add_argument("--no-log", action="store_true", help="omit the reduction log")
    c.set_defaults(func=cmd_curve)

    o = sub.add_parser("oracle", help="run a brute-force cross-check suite")
    o.add_argument("--suite", choices=sorted(SUITES), required=True)
    o.add_argument("--trials", type=int, default=None)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    for p in (h, c, o) + tuple(sub.choices[n] for n in ("leavitt", "cohn")):
        p.add_argument("--out", default=None, help="also write the report here")
    return ap


def run_cli(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        doc = args.func(args)
        text = dumps(doc)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as exc:
                raise PreconditionError(f"{args.out}: {exc.strerror}")
        stdout.write(text)
    except PreconditionError as exc:
        print(f"hacalc: error: {exc}", file=stderr)
        return EXIT_INPUT
    except (InvariantViolation, ArithmeticError) as exc:
        print(f"hacalc: internal error: {exc}", file=stderr)
        return EXIT_INVARIANT
    if args.func is cmd_oracle and doc["failures"]:
        print(f"hacalc: {len(doc['failures'])} oracle failures", file=stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
