"""Red-blue colourings and their classification.

A colouring is a tuple with one entry per vertex, ``RED = 0`` or ``BLUE = 1``.
Its bi-chromatic edges form a matching cut exactly when the colouring is
valid; the stronger classes correspond to disconnected perfect matchings and
perfect matching cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Sequence

from .errors import GraphError, InvalidColouring
from .graph import Edge, Graph
from .matching import has_perfect_matching

RED = 0
BLUE = 1

Colouring = tuple[int, ...]


class ColouringClass(IntEnum):
    INVALID = 0
    VALID_ONLY = 1
    PERFECT_EXTENDABLE = 2
    PERFECT = 3


MONOCHROMATIC = "monochromatic"
TWO_OPPOSITE = "two-opposite-neighbours"


def colouring_from_str(s: str) -> Colouring:
    """``"RBBR"`` -> ``(0, 1, 1, 0)``."""
    table = {"R": RED, "B": BLUE}
    try:
        return tuple(table[ch] for ch in s.upper() if not ch.isspace() and ch != ",")
    except KeyError as exc:
        raise InvalidColouring(f"colour letters must be R or B, got {exc.args[0]!r}") from None


def colouring_to_str(c: Sequence[int]) -> str:
    return "".join("RB"[x] for x in c)


def swap(c: Sequence[int]) -> Colouring:
    return tuple(1 - x for x in c)


@dataclass(frozen=True)
class ColouringReport:
    cls: ColouringClass
    red: frozenset[int]
    blue: frozenset[int]
    red_interface: frozenset[int]
    blue_interface: frozenset[int]
    cut: tuple[Edge, ...]
    reason: str | None = None
    witness: int | None = None

    @property
    def valid(self) -> bool:
        return self.cls >= ColouringClass.VALID_ONLY


def _check_total(g: Graph, c: Sequence[int]) -> None:
    if len(c) != g.n:
        raise InvalidColouring(f"colouring covers {len(c)} vertices, graph has {g.n}")
    for v, x in enumerate(c):
        if x not in (RED, BLUE):
            raise InvalidColouring(f"vertex {v} has colour {x!r}, expected RED or BLUE")


def classify(
    g: Graph,
    c: Sequence[int],
    perfect_matching: Callable[[Graph], bool] | None = None,
) -> ColouringReport:
    """Strongest class of ``c`` on the connected graph ``g``.

    ``perfect_matching`` decides perfect matchability of the leftover graphs
    ``G[R - R']`` and ``G[B - B']``; it defaults to the blossom matcher.
    """
    _check_total(g, c)
    if not g.is_connected():
        raise GraphError("colourings are only classified on connected graphs")
    if perfect_matching is None:
        perfect_matching = lambda h: has_perfect_matching(h).exists  # noqa: E731
    red = frozenset(v for v in range(g.n) if c[v] == RED)
    blue = frozenset(v for v in range(g.n) if c[v] == BLUE)
    cut = tuple(sorted((u, v) for u, v in g.edges if c[u] != c[v]))
    opp = [0] * g.n
    for u, v in cut:
        opp[u] += 1
        opp[v] += 1
    ri = frozenset(v for v in red if opp[v])
    bi = frozenset(v for v in blue if opp[v])

    def report(cls: ColouringClass, reason: str | None = None, w: int | None = None) -> ColouringReport:
        return ColouringReport(cls, red, blue, ri, bi, cut, reason, w)

    bad = next((v for v in range(g.n) if opp[v] >= 2), None)
    if bad is not None:
        return report(ColouringClass.INVALID, TWO_OPPOSITE, bad)
    if not red or not blue:
        return report(ColouringClass.INVALID, MONOCHROMATIC)
    if ri == red and bi == blue:
        return report(ColouringClass.PERFECT)
    leftover_red, _ = g.induced(red - ri)
    leftover_blue, _ = g.induced(blue - bi)
    if perfect_matching(leftover_red) and perfect_matching(leftover_blue):
        return report(ColouringClass.PERFECT_EXTENDABLE)
    return report(ColouringClass.VALID_ONLY)


def cut_edges(g: Graph, c: Sequence[int]) -> list[Edge]:
    """The matching cut of a valid colouring: its bi-chromatic edges."""
    _check_total(g, c)
    cut = sorted((u, v) for u, v in g.edges if c[u] != c[v])
    if not cut:
        raise InvalidColouring("colouring uses a single colour; it has no cut")
    seen: set[int] = set()
    for u, v in cut:
        for x in (u, v):
            if x in seen:
                raise InvalidColouring(f"vertex {x} has two opposite-coloured neighbours")
            seen.add(x)
    return cut


def leftover_sets(g: Graph, c: Sequence[int]) -> tuple[list[int], list[int]]:
    """Vertices of ``R - R'`` and ``B - B'``."""
    opp = [False] * g.n
    for u, v in g.edges:
        if c[u] != c[v]:
            opp[u] = opp[v] = True
    red = [v for v in range(g.n) if c[v] == RED and not opp[v]]
    blue = [v for v in range(g.n) if c[v] == BLUE and not opp[v]]
    return red, blue
