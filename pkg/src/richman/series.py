"""Betting ladder for a first-to-k series of even-money games.

The states of a best-of-(2k-1) series form a grid: (i, j) means the blue
team has i wins and the red team j.  Each interior state has exactly two
successors — blue wins the next game or red does — so the bidding-game
averaging identity degenerates to the fair-coin recursion, and the exact
cost table *is* the hedging ladder: hold cost(state) at every state (in
units where you finish with target_low if blue takes the series and
target_high if red does) and stake the successor gap on each game.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graphs import GameGraph
from .solver import CostTable, solve_exact

__all__ = [
    "BankrollMismatchError",
    "BetPlan",
    "SeriesSpec",
    "build_series_graph",
    "series_bet_plan",
    "state_id",
]

BLUE_TERMINAL = "b"
RED_TERMINAL = "r"


class BankrollMismatchError(ValueError):
    """The ladder only works from exactly the initial holding."""

    def __init__(self, given: Fraction, required: Fraction):
        self.given = given
        self.required = required
        super().__init__(
            f"bankroll {given} cannot ride the ladder; the initial holding must be {required}"
        )


@dataclass(frozen=True)
class SeriesSpec:
    """First to ``wins_needed`` takes the series; payouts in grand units."""

    wins_needed: int
    bankroll: Fraction
    target_low: Fraction = Fraction(0)
    target_high: Fraction = Fraction(1)

    def __post_init__(self):
        if self.wins_needed < 1:
            raise ValueError("wins_needed must be at least 1")
        if not self.target_low <= self.bankroll <= self.target_high:
            raise ValueError("bankroll must lie between the two payout targets")


@dataclass(frozen=True)
class BetPlan:
    """Holding to maintain and stake to place at every interior state."""

    spec: SeriesSpec
    holdings: Mapping[tuple[int, int], Fraction]
    stakes: Mapping[tuple[int, int], Fraction]

    def to_json_dict(self) -> dict:
        return {
            "wins_needed": self.spec.wins_needed,
            "bankroll": _frac_json(self.spec.bankroll),
            "target_low": _frac_json(self.spec.target_low),
            "target_high": _frac_json(self.spec.target_high),
            "holdings": {
                state_id(i, j): _frac_json(q) for (i, j), q in sorted(self.holdings.items())
            },
            "stakes": {
                state_id(i, j): _frac_json(q) for (i, j), q in sorted(self.stakes.items())
            },
        }


def _frac_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def state_id(i: int, j: int) -> str:
    return f"s{i}_{j}"


def _successor_ids(k: int, i: int, j: int) -> tuple[str, str]:
    """(blue team wins the game, red team wins the game)."""
    blue_next = BLUE_TERMINAL if i + 1 == k else state_id(i + 1, j)
    red_next = RED_TERMINAL if j + 1 == k else state_id(i, j + 1)
    return blue_next, red_next


def build_series_graph(k: int) -> GameGraph:
    """Score grid for a first-to-k series; all decided states collapse to
    the two terminals."""
    if k < 1:
        raise ValueError("k must be at least 1")
    edges = []
    for i in range(k):
        for j in range(k):
            blue_next, red_next = _successor_ids(k, i, j)
            edges.append((state_id(i, j), blue_next))
            edges.append((state_id(i, j), red_next))
    vertices = {BLUE_TERMINAL, RED_TERMINAL} | {state_id(i, j) for i in range(k) for j in range(k)}
    return GameGraph.from_parts(vertices, edges, blue=BLUE_TERMINAL, red=RED_TERMINAL)


def series_bet_plan(
    k: int,
    bankroll: Fraction,
    target_low: Fraction = Fraction(0),
    target_high: Fraction = Fraction(1),
) -> BetPlan:
    """Exact ladder for a first-to-k series.

    Rejects any bankroll other than the required initial holding — riding
    the ladder from the wrong starting amount is impossible, and the error
    carries the required value.
    """
    graph = build_series_graph(k)
    costs: CostTable = solve_exact(graph)
    spread = target_high - target_low

    def holding(state: str) -> Fraction:
        return target_low + costs[state] * spread

    required = holding(state_id(0, 0))
    if Fraction(bankroll) != required:
        raise BankrollMismatchError(Fraction(bankroll), required)
    spec = SeriesSpec(
        wins_needed=k,
        bankroll=Fraction(bankroll),
        target_low=Fraction(target_low),
        target_high=Fraction(target_high),
    )

    holdings: dict[tuple[int, int], Fraction] = {}
    stakes: dict[tuple[int, int], Fraction] = {}
    for i in range(k):
        for j in range(k):
            here = state_id(i, j)
            blue_next, red_next = _successor_ids(k, i, j)
            holdings[(i, j)] = holding(here)
            up = holding(red_next) - holding(here)
            down = holding(here) - holding(blue_next)
            assert up == down  # two-successor averaging identity, exact
            stakes[(i, j)] = up
    return BetPlan(spec=spec, holdings=holdings, stakes=stakes)
