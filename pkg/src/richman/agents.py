"""Bidding strategies.

Every strategy is written from the point of view of the player trying to
reach *their* terminal, on an "oriented" copy of the arena: Blue plays the
graph as-is; Red plays the graph with the terminals swapped and every cost
replaced by 1 - cost.  That mirror turns steepest ascent into steepest
descent and lets one implementation serve both colors.

Agents included:

* ``FullKnowledgeAgent`` ("optimal") sees both bankrolls.  In a losing or
  critical position it bids the classic half-gap (cost(dearest) -
  cost(cheapest))/2 of the total supply, capped at its bankroll, and moves
  to the cheapest successor.  In a strictly winning position it plays the
  finite-horizon ladder: find the smallest t with upper-iterate(v, t) below
  its share, bid half the successor gap of table t-1 (plus an optional
  raise), and move to the successor cheapest in table t-1.  That wins
  within t moves no matter how ties are broken; bidding off the limiting
  costs instead can wander down a cheap-but-long branch and miss the bound.
* ``SafetyRatioAgent`` ("safety") never reads the opponent's bankroll: it
  bids own_money * (cost(v) - cheapest successor cost) / cost(v), which
  keeps own_share / cost(v) from ever decreasing.
* ``UniformRandomBidAgent`` ("uniform-random-bid") is a seeded chaos monkey
  for tests.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graphs import GameGraph
from .solver import (
    CostTable,
    SolverError,
    _average_step,
    _boundary,
    descent_distances,
    extremal_successors,
)

__all__ = [
    "AGENT_NAMES",
    "Agent",
    "BidDecision",
    "FullKnowledgeAgent",
    "GameState",
    "PlayerView",
    "SafetyRatioAgent",
    "UniformRandomBidAgent",
    "full_knowledge_agent",
    "make_agent",
    "optimal_bid",
    "random_turn_optimal_move",
    "safety_ratio",
    "safety_ratio_agent",
]

ZERO = Fraction(0)
ONE = Fraction(1)

COLORS = ("blue", "red")


@dataclass(frozen=True)
class GameState:
    """Token position plus both bankrolls (exact rationals)."""

    position: str
    blue_money: Fraction
    red_money: Fraction

    @property
    def total(self) -> Fraction:
        return self.blue_money + self.red_money

    def money(self, color: str) -> Fraction:
        if color == "blue":
            return self.blue_money
        if color == "red":
            return self.red_money
        raise ValueError(f"unknown color {color!r}")


@dataclass(frozen=True)
class PlayerView:
    """What one player is shown before bidding.

    ``opponent_money`` is None when the opponent's bankroll is withheld;
    agents that need it must fail loudly rather than guess.
    """

    color: str
    position: str
    own_money: Fraction
    opponent_money: Fraction | None


@dataclass(frozen=True)
class BidDecision:
    """A sealed bid plus the move to make if the bid wins."""

    bid: Fraction
    move_to: str


class Agent(ABC):
    """A bidding policy: view -> BidDecision, deterministic given the rng."""

    name = "agent"

    @abstractmethod
    def decide(self, view: PlayerView, rng: random.Random) -> BidDecision:
        raise NotImplementedError


def optimal_bid(
    costs: CostTable | Mapping[str, Fraction], g: GameGraph, v: str, total: Fraction
) -> Fraction:
    """The indifference bid at v: half the successor cost gap, times total.

    For an exact table this equals both (cost(v) - cheapest) * total and
    (dearest - cost(v)) * total, so it is the same bid for either player.
    """
    lo, hi = extremal_successors(g, costs, v)
    return (costs[hi] - costs[lo]) / 2 * total


def safety_ratio(
    costs: CostTable | Mapping[str, Fraction],
    v: str,
    own_share: Fraction,
    color: str = "blue",
) -> Fraction | None:
    """own_share divided by the player's cost of v; None where that cost is 0.

    Blue's cost is cost(v); Red's is 1 - cost(v).
    """
    cost = costs[v] if color == "blue" else ONE - costs[v]
    if cost == 0:
        return None
    return own_share / cost


def random_turn_optimal_move(
    costs: CostTable | Mapping[str, Fraction], g: GameGraph, v: str, mover: str
) -> str:
    """Coin-flip-game move: Blue to the cheapest successor, Red the dearest."""
    lo, hi = extremal_successors(g, costs, v)
    return lo if mover == "blue" else hi


def _oriented(
    g: GameGraph, costs: CostTable | Mapping[str, Fraction], color: str
) -> tuple[GameGraph, CostTable]:
    """The arena as seen by ``color``: its goal is the blue terminal, its
    costs run 0 at the goal to 1 at the opponent's terminal."""
    if color == "blue":
        if isinstance(costs, CostTable):
            return g, costs
        return g, CostTable(dict(costs), "exact")
    if color != "red":
        raise ValueError(f"unknown color {color!r}")
    swapped = GameGraph.from_parts(g.vertices, g.edges, blue=g.red, red=g.blue)
    flipped = {v: ONE - costs[v] for v in g.vertices}
    return swapped, CostTable(flipped, "exact")


RAISE_MODES = ("none", "slack-half")


class FullKnowledgeAgent(Agent):
    """Sees both bankrolls; plays the half-gap bid, or the finite-horizon
    ladder when strictly ahead (see the module docstring)."""

    name = "optimal"

    def __init__(
        self,
        graph: GameGraph,
        costs: CostTable | Mapping[str, Fraction],
        color: str,
        raise_mode: str = "slack-half",
    ):
        if raise_mode not in RAISE_MODES:
            raise ValueError(f"raise_mode must be one of {RAISE_MODES}")
        self._graph, self._costs = _oriented(graph, costs, color)
        self._color = color
        self._raise_mode = raise_mode
        # Upper-iterate ladder on the oriented graph, grown on demand.
        self._ladder: list[dict[str, Fraction]] = [_boundary(self._graph, ONE)]

    def _horizon(self, v: str, share: Fraction) -> int:
        """Smallest t with upper-iterate(v, t) < share.  Exists whenever
        share exceeds the exact cost of v."""
        t = 0
        while self._ladder[t][v] >= share:
            t += 1
            if t == len(self._ladder):
                self._ladder.append(_average_step(self._graph, self._ladder[-1]))
            if t > 100_000:
                raise SolverError(f"no iterate at {v!r} ever drops below {share}")
        return t

    def decide(self, view: PlayerView, rng: random.Random) -> BidDecision:
        if view.opponent_money is None:
            raise ValueError("full-knowledge agent requires the opponent's bankroll")
        g, costs = self._graph, self._costs
        v = view.position
        own = view.own_money
        total = own + view.opponent_money
        succ = sorted(g.successors(v))
        if not succ:
            raise ValueError(f"cannot bid at terminal vertex {v!r}")

        if total > 0 and own / total > costs[v]:
            share = own / total
            t = self._horizon(v, share)
            prev = self._ladder[t - 1]
            lo_val = min(prev[u] for u in succ)
            hi_val = max(prev[u] for u in succ)
            bid = (hi_val - lo_val) / 2 * total
            if self._raise_mode == "slack-half":
                slack = (share - self._ladder[t][v]) * total
                bid += min(slack / 2, own - bid)
            move = min(succ, key=lambda u: (prev[u], u))
            return BidDecision(bid, move)

        lo, _ = extremal_successors(g, costs, v)
        bid = min((costs[v] - costs[lo]) * total, own)
        return BidDecision(bid, lo)


class SafetyRatioAgent(Agent):
    """Bids own_money * (cost(v) - cheapest)/cost(v); blind to the opponent.

    Moves to a cheapest successor; among those it prefers one with the
    shortest steepest-descent path to the goal (then lexicographic), so
    that won tiebreaks make progress instead of circling a plateau.
    """

    name = "safety"

    def __init__(
        self,
        graph: GameGraph,
        costs: CostTable | Mapping[str, Fraction],
        color: str,
    ):
        self._graph, self._costs = _oriented(graph, costs, color)
        self._color = color
        self._descent = descent_distances(self._graph, self._costs)

    def decide(self, view: PlayerView, rng: random.Random) -> BidDecision:
        g, costs = self._graph, self._costs
        v = view.position
        own = view.own_money
        succ = sorted(g.successors(v))
        if not succ:
            raise ValueError(f"cannot bid at terminal vertex {v!r}")
        floor = min(costs[u] for u in succ)
        if costs[v] == 0:
            bid = ZERO
        else:
            bid = own * (costs[v] - floor) / costs[v]
        dist = self._descent
        move = min(
            (u for u in succ if costs[u] == floor),
            key=lambda u: (dist[u] is None, dist[u] if dist[u] is not None else 0, u),
        )
        return BidDecision(bid, move)


class UniformRandomBidAgent(Agent):
    """Bids a uniform fraction of its bankroll and moves uniformly at random."""

    name = "uniform-random-bid"

    BITS = 32

    def __init__(self, graph: GameGraph, color: str):
        self._graph = graph
        self._color = color

    def decide(self, view: PlayerView, rng: random.Random) -> BidDecision:
        succ = sorted(self._graph.successors(view.position))
        if not succ:
            raise ValueError(f"cannot bid at terminal vertex {view.position!r}")
        fraction = Fraction(rng.getrandbits(self.BITS), 2**self.BITS)
        return BidDecision(view.own_money * fraction, rng.choice(succ))


def full_knowledge_agent(
    graph: GameGraph,
    costs: CostTable | Mapping[str, Fraction],
    color: str,
    raise_mode: str = "slack-half",
) -> Agent:
    return FullKnowledgeAgent(graph, costs, color, raise_mode=raise_mode)


def safety_ratio_agent(
    graph: GameGraph, costs: CostTable | Mapping[str, Fraction], color: str
) -> Agent:
    return SafetyRatioAgent(graph, costs, color)


AGENT_NAMES = ("optimal", "safety", "uniform-random-bid")


def make_agent(
    name: str,
    graph: GameGraph,
    costs: CostTable | Mapping[str, Fraction],
    color: str,
    raise_mode: str = "slack-half",
) -> Agent:
    """Agent registry used by the CLI; ``name`` is one of AGENT_NAMES."""
    if name == "optimal":
        return FullKnowledgeAgent(graph, costs, color, raise_mode=raise_mode)
    if name == "safety":
        return SafetyRatioAgent(graph, costs, color)
    if name == "uniform-random-bid":
        return UniformRandomBidAgent(graph, color)
    raise ValueError(f"unknown agent {name!r} (choose from {', '.join(AGENT_NAMES)})")
