"""Game arenas: finite directed graphs with a blue and a red terminal vertex.

Text format (UTF-8, line oriented):

* blank lines and lines starting with ``#`` are ignored,
* exactly one ``blue <id>`` line and exactly one ``red <id>`` line,
* zero or more ``edge <from> <to>`` lines.

A vertex id is any whitespace-free token other than ``#``.  The canonical
serialization emits the blue line, the red line, then the edges sorted
lexicographically by (from, to); parsing it back yields an equal graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable


__all__ = [
    "GameGraph",
    "GraphFormatError",
    "ValidationReport",
    "Violation",
    "parse_game_graph",
    "serialize_game_graph",
    "validate",
]


class GraphFormatError(ValueError):
    """Graph text that cannot be parsed.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _check_vertex_id(token: str, line: int | None = None) -> str:
    if not token or token == "#" or any(ch.isspace() for ch in token):
        raise GraphFormatError(f"bad vertex id {token!r}", line)
    return token


@dataclass(frozen=True)
class GameGraph:
    """Immutable arena.  ``blue`` and ``red`` are the terminal vertices.

    Edges out of a terminal may exist in the edge set (the parser keeps
    them) but they are never reported as successors: play stops there.
    """

    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]
    blue: str
    red: str

    @classmethod
    def from_parts(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]],
        blue: str,
        red: str,
    ) -> "GameGraph":
        vs = frozenset(vertices) | {blue, red}
        es = frozenset((a, b) for a, b in edges)
        vs = vs | {a for a, _ in es} | {b for _, b in es}
        return cls(vertices=vs, edges=es, blue=blue, red=red)

    @cached_property
    def _adjacency(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            out.setdefault(a, set()).add(b)
        return {v: frozenset(ts) for v, ts in out.items()}

    @cached_property
    def non_terminals(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices - {self.blue, self.red}))

    def is_terminal(self, v: str) -> bool:
        if v not in self.vertices:
            raise KeyError(v)
        return v == self.blue or v == self.red

    def successors(self, v: str) -> frozenset[str]:
        """Successor set used for play; empty exactly at the terminals."""
        if v not in self.vertices:
            raise KeyError(v)
        if v == self.blue or v == self.red:
            return frozenset()
        return self._adjacency.get(v, frozenset())

    def terminal_value(self, v: str) -> Fraction:
        """Cost of a terminal: 0 at blue, 1 at red."""
        if v == self.blue:
            return Fraction(0)
        if v == self.red:
            return Fraction(1)
        raise ValueError(f"{v!r} is not a terminal vertex")


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


def validate(g: GameGraph) -> ValidationReport:
    """Check the structural rules of a playable arena.

    Reported codes: BLUE_EQUALS_RED, MISSING_TERMINAL, BAD_EDGE_ENDPOINT,
    TERMINAL_SELF_LOOP, DEAD_END (non-terminal without outgoing edges) and
    UNREACHABLE_TERMINALS (no directed path to either terminal).
    """
    found: list[Violation] = []

    if g.blue == g.red:
        found.append(Violation("BLUE_EQUALS_RED", g.blue, "blue and red are the same vertex"))
    for name, t in (("blue", g.blue), ("red", g.red)):
        if t not in g.vertices:
            found.append(Violation("MISSING_TERMINAL", t, f"{name} vertex {t!r} is not in the vertex set"))
    for a, b in sorted(g.edges):
        for end in (a, b):
            if end not in g.vertices:
                found.append(Violation("BAD_EDGE_ENDPOINT", end, f"edge ({a}, {b}) mentions unknown vertex {end!r}"))
    for t in sorted({g.blue, g.red}):
        if (t, t) in g.edges:
            found.append(Violation("TERMINAL_SELF_LOOP", t, f"terminal {t!r} has a self-loop"))

    outgoing: dict[str, set[str]] = {v: set() for v in g.vertices}
    incoming: dict[str, set[str]] = {v: set() for v in g.vertices}
    for a, b in g.edges:
        if a in outgoing and b in incoming:
            outgoing[a].add(b)
            incoming[b].add(a)

    for v in g.non_terminals:
        if not outgoing[v]:
            found.append(Violation("DEAD_END", v, f"non-terminal {v!r} has no outgoing edges"))

    # Reverse search from the terminals: every vertex must reach one of them.
    reached = {t for t in (g.blue, g.red) if t in g.vertices}
    frontier = list(reached)
    while frontier:
        v = frontier.pop()
        for p in incoming[v]:
            if p not in reached:
                reached.add(p)
                frontier.append(p)
    for v in sorted(g.vertices - reached):
        found.append(Violation("UNREACHABLE_TERMINALS", v, f"no path from {v!r} to a terminal"))

    found.sort(key=lambda w: (w.code, w.subject))
    return ValidationReport(ok=not found, violations=tuple(found))


def parse_game_graph(text: str) -> GameGraph:
    blue: str | None = None
    red: str | None = None
    edges: set[tuple[str, str]] = set()
    mentioned: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        keyword = parts[0]
        if keyword in ("blue", "red"):
            if len(parts) != 2:
                raise GraphFormatError(f"expected '{keyword} <id>'", lineno)
            vid = _check_vertex_id(parts[1], lineno)
            if keyword == "blue":
                if blue is not None:
                    raise GraphFormatError("duplicate blue declaration", lineno)
                blue = vid
            else:
                if red is not None:
                    raise GraphFormatError("duplicate red declaration", lineno)
                red = vid
            mentioned.add(vid)
        elif keyword == "edge":
            if len(parts) != 3:
                raise GraphFormatError("expected 'edge <from> <to>'", lineno)
            a = _check_vertex_id(parts[1], lineno)
            b = _check_vertex_id(parts[2], lineno)
            edges.add((a, b))
            mentioned.update((a, b))
        else:
            raise GraphFormatError(f"unknown directive {keyword!r}", lineno)

    if blue is None:
        raise GraphFormatError("missing blue declaration")
    if red is None:
        raise GraphFormatError("missing red declaration")
    if blue == red:
        raise GraphFormatError("blue and red must be distinct vertices")
    return GameGraph.from_parts(mentioned, edges, blue, red)


def serialize_game_graph(g: GameGraph) -> str:
    lines = [f"blue {g.blue}", f"red {g.red}"]
    lines.extend(f"edge {a} {b}" for a, b in sorted(g.edges))
    return "\n".join(lines) + "\n"
