"""Command-line entry point: ``ubrel {compose,transform,verify,algebra}``.

JSON goes to stdout and diagnostics to stderr.  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import lie_algebras as la
from .errors import UbrelError, UsageError
from .kinematics import (
    KinematicParams,
    PhaseDifferential,
    compose_params,
    transform_differential,
    ub_from_params,
)
from .verify import SUITES, VerifyConfig, run_verify

GROUP_ALIASES = {
    "ub": "ub_covariant",
    "ub_covariant": "ub_covariant",
    "ub_three": "ub_three",
    "ubc": "ubc_three",
    "ubc_three": "ubc_three",
    "u1n": "u1n_covariant",
    "u1n_covariant": "u1n_covariant",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _load_json(text: str):
    """Inline JSON or a path to a JSON file."""
    s = text.strip()
    if not s.startswith("{"):
        try:
            s = Path(text).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text}: {exc}") from None
    try:
        return json.loads(s)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _side_params(args, side: str) -> KinematicParams:
    raw = getattr(args, side)
    if raw is not None:
        obj = _load_json(raw)
        obj.setdefault("n", args.n)
        obj.setdefault("c", args.c)
        p = KinematicParams.from_json(obj)
        if p.n != args.n or p.c != args.c:
            raise UsageError(f"{side} params have n={p.n}, c={p.c}; expected n={args.n}, c={args.c}")
        return p
    if args.n != 1:
        raise UsageError("inline flags describe n = 1 parameters; pass JSON for n > 1")
    return KinematicParams.from_velocity(
        [getattr(args, f"{side}_v")],
        args.c,
        f=[getattr(args, f"{side}_f")],
        r=getattr(args, f"{side}_r"),
        m_stress=[[getattr(args, f"{side}_m")]],
    )


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def cmd_compose(args) -> int:
    if args.method == "closed" and args.n != 1:
        raise UsageError("the closed-form composition covers n = 1 only")
    a, b = _side_params(args, "left"), _side_params(args, "right")
    out = compose_params(a, b, args.method)
    result = out.to_json()
    result["method"] = args.method
    result["matrix"] = ub_from_params(out).matrix().tolist()
    _emit(result)
    return 0


def cmd_transform(args) -> int:
    p = KinematicParams.from_json({"n": args.n, "c": args.c, **_load_json(args.params)})
    d = PhaseDifferential.from_json({"n": args.n, "c": args.c, **_load_json(args.diff)})
    if p.n != d.n or p.c != d.c:
        raise UsageError("params and differential differ in n or c")
    _emit(transform_differential(ub_from_params(p), d).to_json())
    return 0


def cmd_verify(args) -> int:
    table = la.BracketTable.from_json(_load_json(args.table)) if args.table else None
    cfg = VerifyConfig(trials=args.trials, seed=args.seed, tol=args.tol, table=table)
    report = run_verify(args.suite, cfg)
    _emit(report.to_json())
    for chk in report.failing():
        print(f"FAIL {chk.name}: {chk.max_residual:.3e} > {chk.threshold:.1e}", file=sys.stderr)
    return 0 if report.status == "pass" else 1


def cmd_algebra(args) -> int:
    try:
        name = GROUP_ALIASES[args.group]
    except KeyError:
        raise UsageError(f"unknown group {args.group!r}; expected one of {', '.join(GROUP_ALIASES)}") from None
    b = math.inf if args.b is None and name == "u1n_covariant" else args.b
    table = la.build_basis(name, args.n, c=args.c, b=b).table
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        _emit(table.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="number of space dimensions")
    common.add_argument("--c", type=float, default=1.0, help="speed of light")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = _Parser(prog="ubrel", description="Noninertial relativity groups: composition, tables, checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compose", parents=[common], help="compose two frame changes")
    p.add_argument("--left", help="params JSON (inline or file) for the left factor")
    p.add_argument("--right", help="params JSON (inline or file) for the right factor")
    for side in ("left", "right"):
        for key in ("v", "f", "r", "m"):
            p.add_argument(f"--{side}-{key}", type=float, default=0.0, dest=f"{side}_{key}")
    p.add_argument("--method", choices=("matrix", "closed"), default="matrix")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("transform", parents=[common], help="apply a frame change to (dt, dq, dp, de)")
    p.add_argument("--params", required=True)
    p.add_argument("--diff", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", parents=[common], help="run seeded verification suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="override every residual threshold")
    p.add_argument("--table", help="bracket table JSON to check in place of the built-in one")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("algebra", parents=[common], help="print a structure-constant table")
    p.add_argument("group", help="ub, ub_three, ubc or u1n")
    p.add_argument("--b", type=float, default=None, help="force constant for u1n")
    p.set_defaults(func=cmd_algebra)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"ubrel {args.command}: {exc}", file=sys.stderr)
        return 2
    except UbrelError as exc:
        print(f"ubrel {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
