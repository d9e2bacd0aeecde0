"""Cost tables for bidding games, computed exactly.

The cost of a vertex is the fraction of the total money Blue must hold to
force a win from there: 0 at the blue terminal, 1 at the red terminal, and
at every other vertex the average of the cheapest and the dearest successor
cost.  On a finite arena that averaging identity has a unique solution with
the terminal boundary values, and it is always rational.

Two routes are implemented and cross-checked by the test suite:

* monotone iteration from above / below in exact rational arithmetic,
  followed by continued-fraction reconstruction of the limit, and
* enumeration of (min-successor, max-successor) policies, each solved as an
  exact linear system and accepted only when the chosen successors really
  attain the extremes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .graphs import GameGraph, validate

__all__ = [
    "ApproxSolve",
    "CostTable",
    "LimitExceededError",
    "NotConvergedError",
    "Policy",
    "SolverError",
    "descent_distances",
    "extremal_successors",
    "iterate_above",
    "iterate_below",
    "rationalize",
    "satisfies_exact_identity",
    "solve_exact",
    "solve_exact_by_enumeration",
    "solve_iterative",
    "steepest_descent_closure",
]

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITERS = 100_000
DEFAULT_MAX_DEN = 10**6
POLICY_ENUM_LIMIT = 10


class SolverError(Exception):
    """Base class for solver failures."""


class NotConvergedError(SolverError):
    """Iteration stopped at max_iters with the bracket still wider than tol.

    The achieved bracket is reported as-is: ``upper``, ``lower``, ``gap``
    and ``iterations`` describe what was actually computed.
    """

    def __init__(self, gap: Fraction, iterations: int, upper: "CostTable", lower: "CostTable"):
        self.gap = gap
        self.iterations = iterations
        self.upper = upper
        self.lower = lower
        super().__init__(f"no convergence after {iterations} iterations, gap {float(gap):.3e}")


class LimitExceededError(SolverError):
    """Exact fallback would need policy enumeration on too large a graph."""

    def __init__(self, non_terminals: int, limit: int):
        self.non_terminals = non_terminals
        self.limit = limit
        super().__init__(
            f"policy enumeration needed but graph has {non_terminals} non-terminal "
            f"vertices (limit {limit})"
        )


@dataclass(frozen=True)
class CostTable:
    """Vertex costs plus a tag saying how they were computed.

    ``kind`` is one of "exact", "upper-iterate", "lower-iterate", "approx";
    iterate tables carry their step index in ``step``.
    """

    costs: Mapping[str, Fraction]
    kind: str
    step: int | None = None

    def __getitem__(self, v: str) -> Fraction:
        return self.costs[v]

    def get(self, v: str, default: Fraction | None = None) -> Fraction | None:
        return self.costs.get(v, default)

    @property
    def label(self) -> str:
        if self.step is None:
            return self.kind
        return f"{self.kind}({self.step})"

    def to_json_dict(self) -> dict:
        table = {
            v: {"num": c.numerator, "den": c.denominator, "float": float(c)}
            for v, c in sorted(self.costs.items())
        }
        return {"kind": self.label, "costs": table}


@dataclass(frozen=True)
class ApproxSolve:
    """Bracketing pair of iterate tables: lower(v) <= cost(v) <= upper(v)."""

    upper: CostTable
    lower: CostTable
    iterations: int
    gap: Fraction


@dataclass(frozen=True)
class Policy:
    """A choice, per non-terminal vertex, of a cheapest and a dearest successor."""

    lo: Mapping[str, str]
    hi: Mapping[str, str]


def _require_valid(g: GameGraph) -> None:
    report = validate(g)
    if not report.ok:
        first = report.violations[0]
        raise ValueError(f"invalid graph: {first.code} at {first.subject!r} ({first.message})")


def _boundary(g: GameGraph, fill: Fraction) -> dict[str, Fraction]:
    costs = {v: fill for v in g.vertices}
    costs[g.blue] = ZERO
    costs[g.red] = ONE
    return costs


def _average_step(g: GameGraph, costs: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """One synchronous sweep of cost(v) <- (min + max over successors) / 2."""
    out = dict(costs)
    for v in g.non_terminals:
        values = [costs[u] for u in g.successors(v)]
        out[v] = (min(values) + max(values)) / 2
    out[g.blue] = ZERO
    out[g.red] = ONE
    return out


def _iterate(g: GameGraph, t_max: int, fill: Fraction, kind: str) -> list[CostTable]:
    _require_valid(g)
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    costs = _boundary(g, fill)
    tables = [CostTable(dict(costs), kind, 0)]
    for t in range(1, t_max + 1):
        costs = _average_step(g, costs)
        tables.append(CostTable(dict(costs), kind, t))
    return tables


def iterate_above(g: GameGraph, t_max: int) -> list[CostTable]:
    """Iterates started at 1 on the non-terminals; weakly decreasing in t.

    Table t answers: what share does Blue need to force a win in at most t
    moves?  Index 0 is the starting table.
    """
    return _iterate(g, t_max, ONE, "upper-iterate")


def iterate_below(g: GameGraph, t_max: int) -> list[CostTable]:
    """Iterates started at 0 on the non-terminals; weakly increasing in t.

    Table t answers: what share does Blue need to stop Red from forcing a
    win in at most t moves?
    """
    return _iterate(g, t_max, ZERO, "lower-iterate")


def _gap(g: GameGraph, upper: Mapping[str, Fraction], lower: Mapping[str, Fraction]) -> Fraction:
    return max(upper[v] - lower[v] for v in g.vertices)


def solve_iterative(
    g: GameGraph,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> ApproxSolve:
    """Run both iterations in lockstep until the bracket closes to tol.

    All arithmetic is exact; only the stopping test compares against the
    float tolerance.  Raises NotConvergedError rather than returning a
    bracket wider than tol.
    """
    _require_valid(g)
    upper = _boundary(g, ONE)
    lower = _boundary(g, ZERO)
    t = 0
    gap = _gap(g, upper, lower)
    while gap > tol and t < max_iters:
        upper = _average_step(g, upper)
        lower = _average_step(g, lower)
        t += 1
        gap = _gap(g, upper, lower)
    result = ApproxSolve(
        upper=CostTable(upper, "upper-iterate", t),
        lower=CostTable(lower, "lower-iterate", t),
        iterations=t,
        gap=gap,
    )
    if gap > tol:
        raise NotConvergedError(gap, t, result.upper, result.lower)
    return result


def satisfies_exact_identity(g: GameGraph, table: CostTable) -> bool:
    """True when the table is a genuine cost table for g.

    Checks the terminal boundary, the [0, 1] range, and the averaging
    identity 2 cost(v) = min + max over successors, all exactly.
    """
    costs = table.costs
    if costs.get(g.blue) != ZERO or costs.get(g.red) != ONE:
        return False
    for v in g.vertices:
        c = costs.get(v)
        if c is None or c < ZERO or c > ONE:
            return False
    for v in g.non_terminals:
        values = [costs[u] for u in g.successors(v)]
        if 2 * costs[v] != min(values) + max(values):
            return False
    return True


def rationalize(approx: CostTable, g: GameGraph, max_den: int = DEFAULT_MAX_DEN) -> CostTable | None:
    """Snap each value to its best rational with denominator <= max_den.

    Uses continued-fraction best approximation per vertex, then verifies
    the exact averaging identity; returns None when verification fails.
    """
    costs: dict[str, Fraction] = {}
    for v in g.vertices:
        costs[v] = Fraction(approx.costs[v]).limit_denominator(max_den)
    costs[g.blue] = ZERO
    costs[g.red] = ONE
    table = CostTable(costs, "exact")
    if satisfies_exact_identity(g, table):
        return table
    return None


def _policy_hint(g: GameGraph, approx: Mapping[str, Fraction]) -> tuple[tuple[str, str], ...]:
    hint = []
    for v in g.non_terminals:
        succ = sorted(g.successors(v))
        lo = min(succ, key=lambda u: (approx[u], u))
        hi = max(succ, key=lambda u: (approx[u], u))
        hint.append((lo, hi))
    return tuple(hint)


def _solve_fraction_system(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over Fractions; None when the system is singular."""
    n = len(rhs)
    a = [row[:] for row in matrix]
    b = rhs[:]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
                b[r] -= factor * b[col]
    x = [ZERO] * n
    for i in reversed(range(n)):
        s = b[i]
        for j in range(i + 1, n):
            s -= a[i][j] * x[j]
        x[i] = s / a[i][i]
    return x


def solve_exact_by_enumeration(
    g: GameGraph,
    limit: int = POLICY_ENUM_LIMIT,
    hint: tuple[tuple[str, str], ...] | None = None,
) -> CostTable:
    """Exact solve by trying (lo, hi) successor policies.

    Each policy induces the linear system 2 cost(v) = cost(lo(v)) + cost(hi(v))
    with the terminal boundary; it is accepted only when the solution lies in
    [0, 1] and lo/hi genuinely attain the min/max over all successors.
    Singular policies are skipped.  The optional hint is tried first; it only
    affects search order, never acceptance.
    """
    _require_valid(g)
    interior = list(g.non_terminals)
    if len(interior) > limit:
        raise LimitExceededError(len(interior), limit)
    succ = {v: sorted(g.successors(v)) for v in interior}
    index = {v: i for i, v in enumerate(interior)}

    def attempt(policy: tuple[tuple[str, str], ...]) -> CostTable | None:
        n = len(interior)
        a = [[ZERO] * n for _ in range(n)]
        b = [ZERO] * n
        for i, v in enumerate(interior):
            a[i][i] += 2
            for target in policy[i]:
                if target == g.red:
                    b[i] += 1
                elif target != g.blue:
                    a[i][index[target]] -= 1
        solution = _solve_fraction_system(a, b)
        if solution is None:
            return None
        costs = {g.blue: ZERO, g.red: ONE}
        for i, v in enumerate(interior):
            if solution[i] < ZERO or solution[i] > ONE:
                return None
            costs[v] = solution[i]
        for i, v in enumerate(interior):
            values = [costs[u] for u in succ[v]]
            lo, hi = policy[i]
            if costs[lo] != min(values) or costs[hi] != max(values):
                return None
        return CostTable(costs, "exact")

    if hint is not None:
        found = attempt(hint)
        if found is not None:
            return found

    pair_choices = [
        [(lo, hi) for lo in succ[v] for hi in succ[v]]
        for v in interior
    ]
    for policy in itertools.product(*pair_choices):
        if policy == hint:
            continue
        found = attempt(policy)
        if found is not None:
            return found
    raise SolverError("no policy admitted a valid cost table")


def solve_exact(
    g: GameGraph,
    *,
    tol: float = 1e-12,
    max_iters: int = DEFAULT_MAX_ITERS,
    max_den: int = DEFAULT_MAX_DEN,
    enum_limit: int = POLICY_ENUM_LIMIT,
) -> CostTable:
    """Exact cost table: iterate, reconstruct rationals, verify; else enumerate.

    Reconstruction is attempted at max_den and once more at twice that.
    Policy enumeration is the fallback and is refused with
    LimitExceededError on graphs above enum_limit non-terminals.
    """
    hint_costs: Mapping[str, Fraction] | None = None
    try:
        approx = solve_iterative(g, tol=tol, max_iters=max_iters)
        for den in (max_den, 2 * max_den):
            exact = rationalize(approx.upper, g, max_den=den)
            if exact is not None:
                return exact
        hint_costs = approx.upper.costs
    except NotConvergedError as err:
        hint_costs = err.upper.costs
    hint = _policy_hint(g, hint_costs) if hint_costs is not None else None
    return solve_exact_by_enumeration(g, limit=enum_limit, hint=hint)


def extremal_successors(
    g: GameGraph, costs: CostTable | Mapping[str, Fraction], v: str
) -> tuple[str, str]:
    """(cheapest, dearest) successor of v, ties broken lexicographically."""
    succ = sorted(g.successors(v))
    if not succ:
        raise ValueError(f"{v!r} is a terminal vertex")
    lo = min(succ, key=lambda u: (costs[u], u))
    hi = min(succ, key=lambda u: (-costs[u], u))
    return lo, hi


def steepest_descent_closure(
    g: GameGraph, costs: CostTable | Mapping[str, Fraction], v: str
) -> frozenset[str]:
    """All vertices reachable from v along steepest-descent edges.

    An edge (x, u) is steepest-descent when cost(u) is minimal over the
    successors of x.  v itself is included.  If cost(v) < 1 the closure
    contains the blue terminal.
    """
    if v not in g.vertices:
        raise KeyError(v)
    seen = {v}
    frontier = [v]
    while frontier:
        x = frontier.pop()
        succ = g.successors(x)
        if not succ:
            continue
        floor = min(costs[u] for u in succ)
        for u in succ:
            if costs[u] == floor and u not in seen:
                seen.add(u)
                frontier.append(u)
    return frozenset(seen)


def descent_distances(
    g: GameGraph, costs: CostTable | Mapping[str, Fraction]
) -> dict[str, int | None]:
    """Length of the shortest steepest-descent path to the blue terminal.

    None marks vertices with no descent path to blue (their cost is 1, or
    they sit in a region that only descends elsewhere).
    """
    reverse: dict[str, list[str]] = {v: [] for v in g.vertices}
    for x in g.non_terminals:
        succ = g.successors(x)
        if not succ:
            continue
        floor = min(costs[u] for u in succ)
        for u in succ:
            if costs[u] == floor:
                reverse[u].append(x)
    dist: dict[str, int | None] = {v: None for v in g.vertices}
    dist[g.blue] = 0
    frontier = [g.blue]
    while frontier:
        next_frontier: list[str] = []
        for u in frontier:
            here = dist[u]
            assert here is not None
            for x in reverse[u]:
                if dist[x] is None:
                    dist[x] = here + 1
                    next_frontier.append(x)
        frontier = next_frontier
    return dist
