"""Shared test helpers: seeded graph corpus and independent oracles.

The oracles here are deliberately written against *different* math than the
package: closed-form binomial sums for the series grid, the classic ruin
quotient for birth-death walks, and a by-hand 2x2 elimination for the
two-vertex path.  Tests freeze their outputs and compare the package
against them.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache

from richman import (
    CostTable,
    GameGraph,
    GameRecord,
    iterate_above,
    safety_ratio,
    solve_exact,
    validate,
)

FIG1_TEXT = """\
blue b
red r
edge v m
edge m b
edge m r
edge v c
edge c a
edge a v
"""

PATH_TEXT = """\
blue b
red r
edge v1 b
edge v1 v2
edge v2 v1
edge v2 r
"""

STAR_TEXT = """\
blue b
red r
edge v b
edge v r
"""

# Exact costs of the two-vertex path, derived independently by eliminating
# by substitution in { 2 R(v1) = 0 + R(v2),  2 R(v2) = R(v1) + 1 }:
# R(v2) = 2 R(v1), so 4 R(v1) = R(v1) + 1, so R(v1) = 1/3, R(v2) = 2/3.
PATH_EXACT = {"v1": Fraction(1, 3), "v2": Fraction(2, 3)}


def pascal_red_win(i: int, j: int, k: int) -> Fraction:
    """P(red team reaches k wins before blue), fair coin, from score (i, j).

    Closed form, not the grid recursion: red needs a more wins, blue needs
    m more; red wins iff it collects its a-th win before blue's m-th, i.e.
    sum over blue-win counts s < m of C(a-1+s, s) / 2^(a+s).
    """
    if j >= k:
        return Fraction(1)
    if i >= k:
        return Fraction(0)
    a = k - j
    m = k - i
    total = Fraction(0)
    for s in range(m):
        total += Fraction(math.comb(a - 1 + s, s), 2 ** (a + s))
    return total


def ruin_red_probability(position: int, n: int) -> Fraction:
    """Fair birth-death walk on 0..n absorbing at both ends; chance of
    hitting n (the red end) from ``position`` is position/n."""
    return Fraction(position, n)


def ring_graph(n: int) -> GameGraph:
    """Directed n-cycle where every vertex also exits to b, except the last,
    which exits to r instead.

    Unwinding cost(v_i) = cost(v_{i+1}) / 2 around the cycle gives
    cost(v_0) = (cost(v_0) + 1) / 2^n, so cost(v_i) = 2^(n-1-i) / (2^n - 1):
    denominators grow exponentially in n while the graph stays tiny.
    """
    names = [f"v{i:02d}" for i in range(n)]
    edges = []
    for i, v in enumerate(names):
        edges.append((v, names[(i + 1) % n]))
        edges.append((v, "b" if i < n - 1 else "r"))
    return GameGraph.from_parts(["b", "r"] + names, edges, "b", "r")


def random_game_graph(seed: int, n_interior: int, acyclic: bool, max_out: int = 3) -> GameGraph:
    """Seeded random validated arena with exactly n_interior non-terminals."""
    rng = random.Random(seed)
    names = [f"v{i:02d}" for i in range(n_interior)]
    while True:
        edges: set[tuple[str, str]] = set()
        for idx, v in enumerate(names):
            if acyclic:
                pool = names[idx + 1 :] + ["b", "r"]
            else:
                pool = [x for x in names if x != v] + ["b", "r"]
            k = rng.randint(1, min(max_out, len(pool)))
            for u in rng.sample(pool, k):
                edges.add((v, u))
        g = GameGraph.from_parts(["b", "r"] + names, edges, "b", "r")
        if validate(g).ok:
            return g


@lru_cache(maxsize=1)
def corpus200() -> tuple[GameGraph, ...]:
    """200 validated graphs, 1..10 non-terminals, alternating generator mode."""
    graphs = []
    for i in range(200):
        graphs.append(
            random_game_graph(seed=9000 + i, n_interior=1 + i % 10, acyclic=i % 2 == 0)
        )
    return tuple(graphs)


@lru_cache(maxsize=512)
def exact_table(g: GameGraph) -> CostTable:
    return solve_exact(g)


def first_vertex_reaching_goal(g: GameGraph, t_cap: int = 64) -> tuple[str, int] | None:
    """(v, t): first sorted non-terminal whose upper iterate drops below 1,
    with the smallest such t."""
    tables = iterate_above(g, t_cap)
    for v in g.non_terminals:
        for t, table in enumerate(tables):
            if table[v] < 1:
                return v, t
    return None


def first_vertex_with_cost_above(g: GameGraph, floor: Fraction) -> str | None:
    costs = exact_table(g)
    for v in g.non_terminals:
        if costs[v] > floor:
            return v
    return None


def first_vertex_with_cost_between(g: GameGraph, lo: Fraction, hi: Fraction) -> str | None:
    costs = exact_table(g)
    for v in g.non_terminals:
        if lo < costs[v] < hi:
            return v
    return None


@lru_cache(maxsize=1)
def acyclic50() -> tuple[GameGraph, ...]:
    """50 acyclic graphs, each with a non-terminal costing strictly between
    1/100 and 1 — which also guarantees a vertex that can reach the blue
    goal, so every strategy scenario in the suite has an eligible start."""
    graphs = []
    i = 0
    while len(graphs) < 50:
        seed = 7000 + i
        i += 1
        g = random_game_graph(seed=seed, n_interior=2 + i % 8, acyclic=True)
        if first_vertex_with_cost_between(g, Fraction(1, 100), Fraction(1)) is None:
            continue
        graphs.append(g)
    return tuple(graphs)


def money_before(step) -> tuple[Fraction, Fraction]:
    """Reconstruct both bankrolls at the start of a step from its record."""
    if step.winner == "blue":
        return step.blue_after + step.transfer, step.red_after - step.transfer
    return step.blue_after - step.transfer, step.red_after + step.transfer


def check_money_conservation(record: GameRecord) -> None:
    totals = {before[0] + before[1] for before in map(money_before, record.steps)}
    totals |= {s.blue_after + s.red_after for s in record.steps}
    assert len(totals) <= 1, f"money not conserved: {sorted(totals)}"


def safety_ratios(record: GameRecord, costs: CostTable, color: str) -> list[Fraction | None]:
    """The player's safety ratio at the start of every step plus the end.

    None encodes an infinite ratio (the player's cost there is zero).
    """
    out: list[Fraction | None] = []
    for step in record.steps:
        blue_money, red_money = money_before(step)
        total = blue_money + red_money
        own = blue_money if color == "blue" else red_money
        out.append(safety_ratio(costs, step.position, own / total, color=color))
    if record.steps:
        last = record.steps[-1]
        total = last.blue_after + last.red_after
        own = last.blue_after if color == "blue" else last.red_after
        out.append(safety_ratio(costs, record.final_position, own / total, color=color))
    return out


def check_safety_ratio_monotone(record: GameRecord, costs: CostTable, color: str) -> None:
    """Exact non-decrease of the safety ratio along a trace (None = infinite)."""
    ratios = safety_ratios(record, costs, color)
    for earlier, later in zip(ratios, ratios[1:]):
        if earlier is None:
            assert later is None, f"{color} ratio fell from infinite to {later}"
        elif later is not None:
            assert later >= earlier, f"{color} ratio fell: {earlier} -> {later}"
