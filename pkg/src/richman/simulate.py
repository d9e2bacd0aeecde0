"""Game execution: the bidding protocol and the coin-flip variant.

All randomness is derived, never ambient: every random draw comes from a
``random.Random`` seeded by a SHA-256 hash of (master seed, purpose, game
index, ...), so a game is a pure function of its arguments and batches can
run in any order without changing results.

Bids are sealed: both agents are queried before either bid is revealed,
the higher bid wins, the winner pays its own bid to the loser and moves
the token.  Exactly equal bids go to the tiebreak policy ("fair" draws a
derived coin; "always-blue" / "always-red" are adversarial fixtures).
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .agents import Agent, BidDecision, GameState, PlayerView, random_turn_optimal_move
from .graphs import GameGraph
from .solver import CostTable, _require_valid

__all__ = [
    "BatchStats",
    "GameRecord",
    "ProtocolViolationError",
    "RandomTurnStats",
    "Step",
    "TIEBREAKS",
    "batch_records",
    "default_move_cap",
    "derived_rng",
    "derived_seed",
    "estimate_random_turn_value",
    "format_trace",
    "play_random_turn_game",
    "play_richman_game",
    "random_turn_move_cap",
    "random_turn_stats",
    "run_batch",
]

ZERO = Fraction(0)

TIEBREAKS = ("fair", "always-blue", "always-red")

BLUE_WINS = "BlueWins"
RED_WINS = "RedWins"
UNRESOLVED = "Unresolved"


class ProtocolViolationError(Exception):
    """An agent bid more than it had (or less than zero) or moved off-graph."""

    def __init__(self, color: str, reason: str, game_index: int = 0):
        self.color = color
        self.reason = reason
        self.game_index = game_index
        super().__init__(f"{color} agent violated protocol in game {game_index}: {reason}")


def derived_seed(*parts: object) -> int:
    """A 64-bit seed that is a pure function of the given parts."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def derived_rng(*parts: object) -> random.Random:
    return random.Random(derived_seed(*parts))


@dataclass(frozen=True)
class Step:
    """One exchange: sealed bids, resolution, payment, move.

    ``tie`` is None when the bids differed; on equal bids it records the
    tiebreak outcome (True: Blue got the move, False: Red).
    """

    index: int
    position: str
    blue_bid: Fraction
    red_bid: Fraction
    tie: bool | None
    winner: str
    transfer: Fraction
    move_to: str
    blue_after: Fraction
    red_after: Fraction


@dataclass(frozen=True)
class GameRecord:
    """Full trace of one game."""

    start: str
    steps: tuple[Step, ...]
    outcome: str
    move_cap: int

    @property
    def final_position(self) -> str:
        return self.steps[-1].move_to if self.steps else self.start

    def to_json_dict(self) -> dict:
        return {
            "start": self.start,
            "outcome": self.outcome,
            "move_cap": self.move_cap,
            "steps": [
                {
                    "index": s.index,
                    "position": s.position,
                    "blue_bid": _frac_json(s.blue_bid),
                    "red_bid": _frac_json(s.red_bid),
                    "tie": s.tie,
                    "winner": s.winner,
                    "transfer": _frac_json(s.transfer),
                    "move_to": s.move_to,
                    "blue_after": _frac_json(s.blue_after),
                    "red_after": _frac_json(s.red_after),
                }
                for s in self.steps
            ],
        }


@dataclass(frozen=True)
class BatchStats:
    """Tallies over a batch of games."""

    runs: int
    blue_wins: int
    red_wins: int
    unresolved: int
    move_counts: tuple[int, ...]
    master_seed: int

    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for n in self.move_counts:
            out[n] = out.get(n, 0) + 1
        return dict(sorted(out.items()))

    def to_json_dict(self) -> dict:
        return {
            "runs": self.runs,
            "blue_wins": self.blue_wins,
            "red_wins": self.red_wins,
            "unresolved": self.unresolved,
            "move_histogram": {str(k): v for k, v in self.histogram().items()},
            "master_seed": self.master_seed,
        }


def _frac_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def _frac_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _interior_has_cycle(g: GameGraph) -> bool:
    WHITE, GRAY, BLACK = 0, 1, 2
    state = {v: WHITE for v in g.non_terminals}
    for root in g.non_terminals:
        if state[root] != WHITE:
            continue
        stack: list[tuple[str, Iterator[str]]] = [(root, iter(sorted(g.successors(root))))]
        state[root] = GRAY
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if g.is_terminal(u):
                    continue
                if state[u] == GRAY:
                    return True
                if state[u] == WHITE:
                    state[u] = GRAY
                    stack.append((u, iter(sorted(g.successors(u)))))
                    advanced = True
                    break
            if not advanced:
                state[v] = BLACK
                stack.pop()
    return False


def default_move_cap(g: GameGraph) -> int:
    """10 |V| when the non-terminal part is acyclic, else 64 |V|."""
    factor = 10 if not _interior_has_cycle(g) else 64
    return factor * len(g.vertices)


def random_turn_move_cap(g: GameGraph, runs: int) -> int:
    """Cap for coin-flip batches, scaled so n games see no draws in practice."""
    return 10 * len(g.vertices) * max(1, math.ceil(math.log2(max(2, runs))))


def _resolve_tie(tiebreak: str, seed: int, game_index: int, step: int) -> str:
    if tiebreak == "always-blue":
        return "blue"
    if tiebreak == "always-red":
        return "red"
    if tiebreak == "fair":
        return derived_rng(seed, "tie", game_index, step).choice(("blue", "red"))
    raise ValueError(f"unknown tiebreak policy {tiebreak!r} (choose from {TIEBREAKS})")


def _check_decision(
    g: GameGraph,
    color: str,
    decision: BidDecision,
    bankroll: Fraction,
    position: str,
    game_index: int,
) -> None:
    if decision.bid < 0:
        raise ProtocolViolationError(color, f"negative bid {decision.bid}", game_index)
    if decision.bid > bankroll:
        raise ProtocolViolationError(
            color, f"bid {decision.bid} exceeds bankroll {bankroll}", game_index
        )
    if decision.move_to not in g.successors(position):
        raise ProtocolViolationError(
            color, f"move to {decision.move_to!r} is not an edge out of {position!r}", game_index
        )


def _outcome(g: GameGraph, position: str) -> str:
    if position == g.blue:
        return BLUE_WINS
    if position == g.red:
        return RED_WINS
    return UNRESOLVED


def play_richman_game(
    g: GameGraph,
    blue: Agent,
    red: Agent,
    start: GameState,
    tiebreak: str = "fair",
    max_moves: int | None = None,
    seed: int = 0,
    game_index: int = 0,
) -> GameRecord:
    """Run one bidding game to a terminal or the move cap."""
    _require_valid(g)
    if start.position not in g.vertices:
        raise ValueError(f"unknown start vertex {start.position!r}")
    if g.is_terminal(start.position):
        raise ValueError(f"start position {start.position!r} is terminal; nothing to bid for")
    if start.blue_money < 0 or start.red_money < 0:
        raise ValueError("bankrolls must be nonnegative")
    if tiebreak not in TIEBREAKS:
        raise ValueError(f"unknown tiebreak policy {tiebreak!r} (choose from {TIEBREAKS})")
    cap = default_move_cap(g) if max_moves is None else max_moves

    blue_rng = derived_rng(seed, "agent", game_index, "blue")
    red_rng = derived_rng(seed, "agent", game_index, "red")

    position = start.position
    blue_money = start.blue_money
    red_money = start.red_money
    steps: list[Step] = []

    while not g.is_terminal(position) and len(steps) < cap:
        blue_view = PlayerView("blue", position, blue_money, red_money)
        red_view = PlayerView("red", position, red_money, blue_money)
        blue_decision = blue.decide(blue_view, blue_rng)
        red_decision = red.decide(red_view, red_rng)
        _check_decision(g, "blue", blue_decision, blue_money, position, game_index)
        _check_decision(g, "red", red_decision, red_money, position, game_index)

        tie: bool | None = None
        if blue_decision.bid > red_decision.bid:
            winner = "blue"
        elif red_decision.bid > blue_decision.bid:
            winner = "red"
        else:
            winner = _resolve_tie(tiebreak, seed, game_index, len(steps))
            tie = winner == "blue"

        if winner == "blue":
            transfer = blue_decision.bid
            blue_money -= transfer
            red_money += transfer
            destination = blue_decision.move_to
        else:
            transfer = red_decision.bid
            red_money -= transfer
            blue_money += transfer
            destination = red_decision.move_to

        steps.append(
            Step(
                index=len(steps),
                position=position,
                blue_bid=blue_decision.bid,
                red_bid=red_decision.bid,
                tie=tie,
                winner=winner,
                transfer=transfer,
                move_to=destination,
                blue_after=blue_money,
                red_after=red_money,
            )
        )
        position = destination

    return GameRecord(start.position, tuple(steps), _outcome(g, position), cap)


def batch_records(
    g: GameGraph,
    blue: Agent,
    red: Agent,
    start: GameState,
    tiebreak: str = "fair",
    max_moves: int | None = None,
    runs: int = 1,
    master_seed: int = 0,
) -> Iterator[GameRecord]:
    """Game i of the batch depends only on (master_seed, i)."""
    for i in range(runs):
        yield play_richman_game(
            g,
            blue,
            red,
            start,
            tiebreak=tiebreak,
            max_moves=max_moves,
            seed=master_seed,
            game_index=i,
        )


def run_batch(
    g: GameGraph,
    blue: Agent,
    red: Agent,
    start: GameState,
    tiebreak: str = "fair",
    max_moves: int | None = None,
    runs: int = 1,
    master_seed: int = 0,
    on_record: Callable[[GameRecord], None] | None = None,
) -> BatchStats:
    tallies = {BLUE_WINS: 0, RED_WINS: 0, UNRESOLVED: 0}
    move_counts: list[int] = []
    for record in batch_records(
        g, blue, red, start, tiebreak=tiebreak, max_moves=max_moves, runs=runs, master_seed=master_seed
    ):
        tallies[record.outcome] += 1
        move_counts.append(len(record.steps))
        if on_record is not None:
            on_record(record)
    return BatchStats(
        runs=runs,
        blue_wins=tallies[BLUE_WINS],
        red_wins=tallies[RED_WINS],
        unresolved=tallies[UNRESOLVED],
        move_counts=tuple(move_counts),
        master_seed=master_seed,
    )


def play_random_turn_game(
    g: GameGraph,
    costs: CostTable,
    start: str,
    max_moves: int | None = None,
    seed: int = 0,
    game_index: int = 0,
) -> GameRecord:
    """Coin-flip variant: no money, the coin winner moves optimally.

    A terminal start is legal and yields an immediate outcome.  Steps reuse
    the bidding Step shape with all money fields zero; ``tie`` records the
    coin (True: Blue moved).
    """
    _require_valid(g)
    if start not in g.vertices:
        raise ValueError(f"unknown start vertex {start!r}")
    cap = 64 * len(g.vertices) if max_moves is None else max_moves
    rng = derived_rng(seed, "randomturn", game_index)

    position = start
    steps: list[Step] = []
    while not g.is_terminal(position) and len(steps) < cap:
        mover = rng.choice(("blue", "red"))
        destination = random_turn_optimal_move(costs, g, position, mover)
        steps.append(
            Step(
                index=len(steps),
                position=position,
                blue_bid=ZERO,
                red_bid=ZERO,
                tie=mover == "blue",
                winner=mover,
                transfer=ZERO,
                move_to=destination,
                blue_after=ZERO,
                red_after=ZERO,
            )
        )
        position = destination

    return GameRecord(start, tuple(steps), _outcome(g, position), cap)


@dataclass(frozen=True)
class RandomTurnStats:
    runs: int
    blue_wins: int
    red_wins: int
    unresolved: int
    frequency: float
    stderr: float
    master_seed: int

    def to_json_dict(self) -> dict:
        return {
            "runs": self.runs,
            "blue_wins": self.blue_wins,
            "red_wins": self.red_wins,
            "unresolved": self.unresolved,
            "frequency": self.frequency,
            "stderr": self.stderr,
            "master_seed": self.master_seed,
        }


def random_turn_stats(
    g: GameGraph,
    costs: CostTable,
    start: str,
    runs: int,
    master_seed: int = 0,
    max_moves: int | None = None,
) -> RandomTurnStats:
    """n seeded coin-flip games; frequency is the red-win rate."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    cap = random_turn_move_cap(g, runs) if max_moves is None else max_moves
    tallies = {BLUE_WINS: 0, RED_WINS: 0, UNRESOLVED: 0}
    for i in range(runs):
        record = play_random_turn_game(g, costs, start, max_moves=cap, seed=master_seed, game_index=i)
        tallies[record.outcome] += 1
    frequency = tallies[RED_WINS] / runs
    stderr = math.sqrt(frequency * (1 - frequency) / runs)
    return RandomTurnStats(
        runs=runs,
        blue_wins=tallies[BLUE_WINS],
        red_wins=tallies[RED_WINS],
        unresolved=tallies[UNRESOLVED],
        frequency=frequency,
        stderr=stderr,
        master_seed=master_seed,
    )


def estimate_random_turn_value(
    g: GameGraph,
    costs: CostTable,
    start: str,
    n: int,
    master_seed: int = 0,
) -> tuple[float, float]:
    """(red-win frequency, binomial stderr) over n seeded games."""
    stats = random_turn_stats(g, costs, start, n, master_seed=master_seed)
    return stats.frequency, stats.stderr


def format_trace(record: GameRecord) -> str:
    """Line-per-step machine format; money always as num/den.

    step <i> <position> <blue_bid> <red_bid> <tie> <winner> <transfer> <move_to> <blue_after> <red_after>
    outcome <Outcome> steps <n> cap <cap>
    """
    lines = []
    for s in record.steps:
        tie = "-" if s.tie is None else ("blue" if s.tie else "red")
        lines.append(
            f"step {s.index} {s.position} {_frac_text(s.blue_bid)} {_frac_text(s.red_bid)} "
            f"{tie} {s.winner} {_frac_text(s.transfer)} {s.move_to} "
            f"{_frac_text(s.blue_after)} {_frac_text(s.red_after)}"
        )
    outcome = record.outcome
    if outcome == UNRESOLVED:
        outcome = f"Unresolved({record.move_cap})"
    lines.append(f"outcome {outcome} steps {len(record.steps)} cap {record.move_cap}")
    return "\n".join(lines)
