"""Command-line entry point.

Exit status is 0 when every report passes (or is skipped), 1 when any check
fails, and 2 on bad input or, with ``--strict``, an exceeded budget.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from finlim.diagram import BUDGET_ENV
from finlim.errors import BoundExceeded, BudgetExceeded, DiagramError
from finlim.fileio import DiagramFileError
from finlim.report import FAIL
from finlim.suite import full_plan, run_plan

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
COMMON_DEFAULTS = {"json": False, "strict": False, "timings": False, "jobs": 1, "budget": None}


def build_parser() -> argparse.ArgumentParser:
    # shared flags may appear before or after the subcommand; defaults are
    # suppressed so a subparser cannot overwrite a value given earlier
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", help="emit one JSON report per line")
    common.add_argument("--strict", action="store_true", help="treat an exceeded budget as an error")
    common.add_argument("--timings", action="store_true", help="include durations in the output")
    common.add_argument("--jobs", type=int, help="worker processes for independent checks")
    common.add_argument("--budget", type=int, help=f"enumeration budget (default: ${BUDGET_ENV} or 10^7)")

    parser = argparse.ArgumentParser(prog="finlim", parents=[common],
                                     description="Exhaustive checks of finite limit and codensity statements.")
    sub = parser.add_subparsers(dest="command", required=True)

    lim = sub.add_parser("limit", parents=[common], help="compute the limit of a diagram file")
    lim.add_argument("file")

    check = sub.add_parser("check", parents=[common], help="run a named check")
    checks = check.add_subparsers(dest="check", required=True)
    c = checks.add_parser("prop38", parents=[common], help="n-element set as a limit of 3-element sets")
    c.add_argument("--size", type=int, required=True)
    c = checks.add_parser("equalizer", parents=[common], help="small sets as equalizers on {0,1,2}")
    c.add_argument("--size", type=int, required=True)
    c = checks.add_parser("set3", parents=[common], help="power-of-two limits over sets of size <= 2")
    c.add_argument("--count", type=int, default=500)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--file", help="check a single diagram file instead of the random corpus")
    c = checks.add_parser("galvin-horn", parents=[common], help="coherent choices vs ultrafilters")
    c.add_argument("--size", type=int, required=True)
    c = checks.add_parser("partition-limit", parents=[common], help="limit of partition quotients")
    c.add_argument("--size", type=int, required=True)
    c = checks.add_parser("ultrafilter-monad", parents=[common], help="finite ultrafilter monad laws")
    c.add_argument("--max-size", type=int, default=4)
    c = checks.add_parser("dd-monad", parents=[common], help="double-dualization monad laws")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--max-dim", type=int, default=2)
    c = checks.add_parser("lemma42", parents=[common], help="X** vs coherent choices")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--dim", type=int, required=True)
    c = checks.add_parser("lemma45", parents=[common], help="natural transformations into (-)**")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--max-dim", type=int, default=2)
    c.add_argument("--functor", choices=("id", "dd"), default="id")
    c = checks.add_parser("prop43", parents=[common], help="coordinate-subspace limit cone")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    checks.add_parser("all", parents=[common], help="run the full suite")

    cod = sub.add_parser("codensity", parents=[common], help="compute a codensity value")
    kinds = cod.add_subparsers(dest="kind", required=True)
    c = kinds.add_parser("set", parents=[common])
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--probe-max", type=int, required=True)
    c = kinds.add_parser("vec", parents=[common])
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--probe-max", type=int, required=True)
    return parser


def plan_for(args) -> list[tuple]:
    if args.command == "limit":
        return [("limit", {"path": args.file})]
    if args.command == "codensity":
        if args.kind == "set":
            return [("codensity-value-set", {"size": args.size, "probe_max": args.probe_max})]
        return [("codensity-value-vec", {"q": args.q, "dim": args.dim, "probe_max": args.probe_max})]
    name = args.check
    if name == "all":
        return full_plan()
    if name == "set3":
        if args.file:
            return [("set3-file", {"path": args.file})]
        return [("set3", {"count": args.count, "seed": args.seed})]
    simple = {
        "prop38": lambda: {"n": args.size},
        "equalizer": lambda: {"size": args.size},
        "galvin-horn": lambda: {"n": args.size},
        "partition-limit": lambda: {"n": args.size},
        "ultrafilter-monad": lambda: {"max_size": args.max_size},
        "dd-monad": lambda: {"q": args.q, "max_dim": args.max_dim},
        "lemma42": lambda: {"q": args.q, "dim": args.dim},
        "lemma45": lambda: {"q": args.q, "max_dim": args.max_dim, "functor": args.functor},
        "prop43": lambda: {"q": args.q, "n": args.n},
    }
    return [(name, simple[name]())]


def exit_code(reports) -> int:
    return EXIT_FAIL if any(r.status == FAIL for r in reports) else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, value in COMMON_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, value)
    if args.budget is not None:
        os.environ[BUDGET_ENV] = str(args.budget)
    try:
        results = run_plan(plan_for(args), jobs=args.jobs, strict=args.strict)
    except (BoundExceeded, DiagramFileError, DiagramError, OSError, ValueError) as exc:
        print(f"finlim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"finlim: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for rep, seconds in results:
        if args.json:
            data = rep.to_dict()
            if args.timings:
                data["duration_s"] = round(seconds, 3)
            print(json.dumps(data, sort_keys=True))
        else:
            line = rep.summary()
            print(f"{line}  ({seconds:.2f}s)" if args.timings else line)
    if not args.json:
        failed = sum(r.status == FAIL for r, _ in results)
        print(f"{len(results)} report(s), {failed} failed")
    return exit_code([r for r, _ in results])


if __name__ == "__main__":
    sys.exit(main())
