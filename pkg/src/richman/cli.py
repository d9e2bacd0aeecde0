"""Command-line front end.

Subcommands: ``solve`` (exact or bracketing-iteration cost tables),
``simulate`` (seeded bidding games between named agents), ``randomturn``
(coin-flip estimation of a vertex cost), and ``series`` (the even-money
betting ladder).  Money is entered as exact rationals (``3/5`` or ``2``);
decimals are rejected to keep the arithmetic exact.

Exit codes: 0 ok, 2 parse, 3 validation, 4 not-converged, 5 limit-exceeded,
6 usage.  Identical command lines produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .agents import AGENT_NAMES, GameState, make_agent
from .graphs import GameGraph, GraphFormatError, parse_game_graph, validate
from .series import BankrollMismatchError, series_bet_plan, state_id
from .simulate import TIEBREAKS, format_trace, random_turn_stats, run_batch
from .solver import (
    CostTable,
    LimitExceededError,
    NotConvergedError,
    solve_exact,
    solve_iterative,
)

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NOT_CONVERGED = 4
EXIT_LIMIT = 5
EXIT_USAGE = 6


class UsageError(Exception):
    """Bad flags or flag values (argparse's own exit code would collide
    with the parse-error code, so errors are rethrown and mapped to 6)."""


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _money(text: str) -> Fraction:
    """Exact nonnegative rational: an integer or 'p/q'."""
    num, slash, den = text.partition("/")
    if not num.isdigit() or (slash and not den.isdigit()):
        raise argparse.ArgumentTypeError(
            f"money must be a nonnegative integer or p/q fraction, got {text!r}"
        )
    if slash and int(den) == 0:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den)) if slash else Fraction(int(num))


def _fraction_text(q: Fraction) -> str:
    return str(q)


def _fraction_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator, "float": float(q)}


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="richman", description="Bidding games on directed graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute vertex costs for a graph file")
    solve.add_argument("file", help="graph in the text format")
    mode = solve.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact rational costs (default)")
    mode.add_argument("--iterate", action="store_true", help="bracketing iteration instead")
    solve.add_argument("--tol", type=float, default=1e-9, help="gap tolerance for --iterate")
    solve.add_argument("--max-iters", type=int, default=100_000)
    _add_output_flag(solve)

    sim = sub.add_parser("simulate", help="run seeded bidding games")
    sim.add_argument("file")
    sim.add_argument("--start", required=True, help="starting vertex (non-terminal)")
    sim.add_argument("--blue-money", type=_money, required=True)
    sim.add_argument("--red-money", type=_money, required=True)
    sim.add_argument("--blue", choices=AGENT_NAMES, default="optimal")
    sim.add_argument("--red", choices=AGENT_NAMES, default="optimal")
    sim.add_argument("--tiebreak", choices=TIEBREAKS, default="fair")
    sim.add_argument("--runs", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-moves", type=int, default=None)
    sim.add_argument("--trace", action="store_true", help="print each game's trace")
    _add_output_flag(sim)

    rt = sub.add_parser("randomturn", help="estimate a cost by coin-flip games")
    rt.add_argument("file")
    rt.add_argument("--start", required=True, help="starting vertex (terminals allowed)")
    rt.add_argument("--runs", type=int, default=1000)
    rt.add_argument("--seed", type=int, default=0)
    _add_output_flag(rt)

    ser = sub.add_parser("series", help="betting ladder for a first-to-k series")
    ser.add_argument("--wins", type=int, required=True, help="games needed to take the series")
    ser.add_argument("--bankroll", type=_money, required=True, help="starting money in grand units")
    _add_output_flag(ser)

    return parser


def _add_output_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=("table", "json"), default="table")


def _load_graph(path: str) -> GameGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise _Failure(EXIT_PARSE, f"cannot read {path}: {err}")
    try:
        g = parse_game_graph(text)
    except GraphFormatError as err:
        raise _Failure(EXIT_PARSE, f"{path}: {err}")
    report = validate(g)
    if not report.ok:
        lines = [f"{path}: invalid graph"]
        lines += [f"  {v.code} {v.subject}: {v.message}" for v in report.violations]
        raise _Failure(EXIT_VALIDATION, "\n".join(lines))
    return g


def _print_cost_rows(costs: CostTable) -> None:
    print("vertex cost float")
    for v in sorted(costs.costs):
        q = costs[v]
        print(f"{v} {_fraction_text(q)} {float(q)}")


def _cmd_solve(args) -> int:
    g = _load_graph(args.file)
    if args.iterate:
        approx = solve_iterative(g, tol=args.tol, max_iters=args.max_iters)
        if args.output == "json":
            payload = {
                "mode": "iterate",
                "upper": approx.upper.to_json_dict(),
                "lower": approx.lower.to_json_dict(),
                "gap": _fraction_json(approx.gap),
                "iterations": approx.iterations,
            }
            print(json.dumps(payload, sort_keys=True))
        else:
            print("vertex upper lower")
            for v in sorted(approx.upper.costs):
                print(
                    f"{v} {_fraction_text(approx.upper[v])} {_fraction_text(approx.lower[v])}"
                )
            print(f"gap {_fraction_text(approx.gap)} {float(approx.gap)}")
            print(f"iterations {approx.iterations}")
        return EXIT_OK
    table = solve_exact(g)
    if args.output == "json":
        print(json.dumps({"mode": "exact", **table.to_json_dict()}, sort_keys=True))
    else:
        _print_cost_rows(table)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    g = _load_graph(args.file)
    if args.start not in g.vertices:
        raise _Failure(EXIT_VALIDATION, f"start vertex {args.start!r} is not in the graph")
    if g.is_terminal(args.start):
        raise _Failure(EXIT_VALIDATION, f"start vertex {args.start!r} is terminal")
    if args.runs < 0:
        raise _Failure(EXIT_VALIDATION, "--runs must be nonnegative")
    if args.max_moves is not None and args.max_moves < 1:
        raise _Failure(EXIT_VALIDATION, "--max-moves must be positive")
    costs = solve_exact(g)
    blue = make_agent(args.blue, g, costs, "blue")
    red = make_agent(args.red, g, costs, "red")
    start = GameState(args.start, args.blue_money, args.red_money)

    traces: list = []
    stats = run_batch(
        g,
        blue,
        red,
        start,
        tiebreak=args.tiebreak,
        max_moves=args.max_moves,
        runs=args.runs,
        master_seed=args.seed,
        on_record=traces.append if args.trace else None,
    )
    if args.output == "json":
        payload = {"stats": stats.to_json_dict()}
        if args.trace:
            payload["traces"] = [r.to_json_dict() for r in traces]
        print(json.dumps(payload, sort_keys=True))
    else:
        if args.trace:
            for i, record in enumerate(traces):
                print(f"game {i} start {record.start}")
                print(format_trace(record))
        print(f"runs {stats.runs}")
        print(f"blue_wins {stats.blue_wins}")
        print(f"red_wins {stats.red_wins}")
        print(f"unresolved {stats.unresolved}")
        histogram = " ".join(f"{k}:{v}" for k, v in stats.histogram().items())
        print(f"moves {histogram}".rstrip())
        print(f"master_seed {stats.master_seed}")
    return EXIT_OK


def _cmd_randomturn(args) -> int:
    g = _load_graph(args.file)
    if args.start not in g.vertices:
        raise _Failure(EXIT_VALIDATION, f"start vertex {args.start!r} is not in the graph")
    if args.runs < 1:
        raise _Failure(EXIT_VALIDATION, "--runs must be at least 1")
    costs = solve_exact(g)
    stats = random_turn_stats(g, costs, args.start, args.runs, master_seed=args.seed)
    exact = costs[args.start]
    if args.output == "json":
        payload = {**stats.to_json_dict(), "exact": _fraction_json(exact)}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"runs {stats.runs}")
        print(f"blue_wins {stats.blue_wins}")
        print(f"red_wins {stats.red_wins}")
        print(f"unresolved {stats.unresolved}")
        print(f"frequency {stats.frequency}")
        print(f"stderr {stats.stderr}")
        print(f"exact {_fraction_text(exact)} {float(exact)}")
    return EXIT_OK


def _cmd_series(args) -> int:
    try:
        plan = series_bet_plan(args.wins, args.bankroll)
    except BankrollMismatchError as err:
        raise _Failure(
            EXIT_VALIDATION,
            f"bankroll {err.given} does not match the ladder; required: {err.required}",
        )
    except ValueError as err:
        raise _Failure(EXIT_VALIDATION, str(err))
    if args.output == "json":
        print(json.dumps(plan.to_json_dict(), sort_keys=True))
    else:
        print(f"wins_needed {plan.spec.wins_needed}")
        print(f"bankroll {_fraction_text(plan.spec.bankroll)}")
        print("state holding stake")
        for (i, j) in sorted(plan.holdings):
            print(
                f"{state_id(i, j)} {_fraction_text(plan.holdings[(i, j)])} "
                f"{_fraction_text(plan.stakes[(i, j)])}"
            )
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "simulate": _cmd_simulate,
    "randomturn": _cmd_randomturn,
    "series": _cmd_series,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _Failure as failure:
        print(failure.message, file=sys.stderr)
        return failure.code
    except NotConvergedError as err:
        print(
            f"no convergence after {err.iterations} iterations; gap {float(err.gap):.3e}",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    except LimitExceededError as err:
        print(str(err), file=sys.stderr)
        return EXIT_LIMIT


def run() -> None:
    sys.exit(main())
