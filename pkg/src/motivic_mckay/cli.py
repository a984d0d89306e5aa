"""Command-line entry point: ``motivic-mckay <subcommand> ...``.

Exit codes: 0 success / identity holds, 1 verification failure, 2 input error,
3 budget or size cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import motivic
from .groups import CATALOG_HELP, GroupError, GroupSpec, GroupTooLargeError, catalog_spec, generate_group
from .jets import JetBudgetError, JetError, JetProblem, jet_table
from .mckay import analyze
from .resolution import ADE_HELP, ResolutionData, ResolutionError, ade_catalog, catalog_names, check_mckay_identity

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _group_spec(arg: str) -> GroupSpec:
    if Path(arg).is_file():
        return GroupSpec.from_json(_load_json(arg))
    return catalog_spec(arg)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_analyze_group(args) -> int:
    g = generate_group(_group_spec(args.group), cap=args.cap_group)
    report = analyze(g, point_count=[args.point_count] if args.point_count else [])
    show_all = not (args.hodge or args.euler)
    payload = report.to_json()
    if not (args.hodge or show_all):
        payload.pop("hodge")
    if not (args.euler or show_all):
        payload.pop("euler")
    _emit(args, payload, report.to_text(hodge=args.hodge or show_all, euler=args.euler or show_all))
    return EXIT_OK


def cmd_check(args) -> int:
    if Path(args.resolution).is_file():
        res = ResolutionData.from_json(_load_json(args.resolution))
        if not args.group:
            raise InputError("--group is required with a resolution file")
        spec = _group_spec(args.group)
    else:
        spec, res = ade_catalog(args.resolution)
        if args.group:
            spec = _group_spec(args.group)
    for item in args.nu or []:
        cid, _, val = item.partition("=")
        ids = {str(c): c for c, _ in res.components}
        if cid not in ids or not val:
            raise InputError(f"bad --nu override {item!r}")
        res = res.with_nu(ids[cid], int(val))
    g = generate_group(spec, cap=args.cap_group)
    check = check_mckay_identity(res, g)
    payload = {
        "holds": check.holds,
        "lhs": motivic.to_json(check.lhs),
        "rhs": motivic.to_json(check.rhs),
        "lhs_text": str(check.lhs),
        "rhs_text": str(check.rhs),
        "lhs_simplified": str(motivic.simplify(check.lhs)),
    }
    text = "\n".join([
        f"lhs (resolution): {check.lhs}",
        f"  simplified:     {motivic.simplify(check.lhs)}",
        f"rhs (classes):    {check.rhs}",
        f"holds: {check.holds}",
    ])
    _emit(args, payload, text)
    return EXIT_OK if check.holds else EXIT_FAIL


def _levels(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def cmd_jets(args) -> int:
    data = _load_json(args.problem)
    stored = []
    if "problem" in data:
        # a stored {problem, table} fixture: replay its levels unless told otherwise
        stored = [row["level"] for row in data.get("table", [])]
        data = data["problem"]
    p = JetProblem.from_json(data, q=args.q, level=args.level, budget=args.cap_budget)
    levels = _levels(args.levels) if args.levels else (stored if stored and args.level is None else [p.level])
    classify = args.classify if args.classify is not None else data.get("classify_d")
    table = jet_table(p, levels, cap_m=args.lift_cap or data.get("lift_cap"), classify_d=classify, workers=args.workers)
    _emit(args, table.to_json(), table.to_text())
    return EXIT_OK


def cmd_catalog(args) -> int:
    payload = {
        "groups": CATALOG_HELP.split(", "),
        "resolutions": catalog_names() + ["cyclic:3:1,1,1"],
    }
    text = "groups:      " + CATALOG_HELP + "\nresolutions: " + ADE_HELP
    _emit(args, payload, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motivic-mckay", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cap-group", type=int, default=10000, metavar="N")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-group", parents=[common], help="class table, weights and orbifold sums")
    p.add_argument("group", help="catalog id or GroupSpec JSON file")
    p.add_argument("--hodge", action="store_true")
    p.add_argument("--euler", action="store_true")
    p.add_argument("--point-count", type=int, metavar="Q")
    p.set_defaults(func=cmd_analyze_group)

    p = sub.add_parser("check-mckay", parents=[common], help="compare resolution and class sides")
    p.add_argument("resolution", help="catalog id (A:d, D:m, E6, E7, E8) or ResolutionData JSON file")
    p.add_argument("--group", help="catalog id or GroupSpec JSON file")
    p.add_argument("--nu", action="append", metavar="ID=VALUE", help="override a discrepancy")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("jets", parents=[common], help="jet counts over F_q")
    p.add_argument("problem", help="JetProblem JSON file, or a stored {problem, table} fixture")
    p.add_argument("--q", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--levels", help="e.g. 1-4 or 1,3")
    p.add_argument("--lift-cap", type=int, metavar="M")
    p.add_argument("--classify", type=int, metavar="D", help="bucket jets on uv = w^D by arc class")
    p.add_argument("--cap-budget", type=int, default=10**8, metavar="N")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_jets)

    p = sub.add_parser("catalog", parents=[common], help="list built-in identifiers")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GroupTooLargeError, JetBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, GroupError, ResolutionError, JetError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
