"""Maximum-cardinality matching in general graphs.

The fast path is Edmonds' blossom algorithm in its classic O(n^3) form
(breadth-first search for an augmenting path, contracting odd cycles by
re-pointing their vertices to a common base).  An exhaustive matcher is kept
as an independent oracle for small graphs.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import GraphError
from .graph import Edge, Graph

EXHAUSTIVE_LIMIT = 20


def is_matching(g: Graph, edges: Iterable[Edge]) -> bool:
    """Pairwise disjoint edges of ``g``."""
    seen: set[int] = set()
    for u, v in edges:
        if not g.has_edge(u, v) or u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True


def is_perfect_matching(g: Graph, edges: Iterable[Edge]) -> bool:
    edges = list(edges)
    return is_matching(g, edges) and 2 * len(edges) == g.n


def _augment_from(g: Graph, root: int, mate: list[int]) -> bool:
    n = g.n
    adj = g.adj
    base = list(range(n))
    parent = [-1] * n
    used = [False] * n
    used[root] = True
    q = deque([root])

    def lca(a: int, b: int) -> int:
        on_path = [False] * n
        while True:
            a = base[a]
            on_path[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if on_path[b]:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while q:
        v = q.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark(v, cur, to, blossom)
                mark(to, cur, v, blossom)
                for x in range(n):
                    if blossom[base[x]]:
                        base[x] = cur
                        if not used[x]:
                            used[x] = True
                            q.append(x)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    # flip the alternating path ending at the free vertex `to`
                    x = to
                    while x != -1:
                        px = parent[x]
                        nxt = mate[px]
                        mate[x] = px
                        mate[px] = x
                        x = nxt
                    return True
                used[mate[to]] = True
                q.append(mate[to])
    return False


def maximum_matching(g: Graph) -> list[Edge]:
    """A maximum-cardinality matching, as a sorted list of ``(u, v)`` with ``u < v``.

    Deterministic: a greedy pass and the augmenting searches both scan
    vertices and neighbours in ascending order.
    """
    mate = [-1] * g.n
    for u in range(g.n):
        if mate[u] == -1:
            for w in g.adj[u]:
                if mate[w] == -1:
                    mate[u], mate[w] = w, u
                    break
    for root in range(g.n):
        if mate[root] == -1 and g.adj[root]:
            _augment_from(g, root, mate)
    return sorted((u, mate[u]) for u in range(g.n) if mate[u] > u)


class PerfectMatchingResult(NamedTuple):
    exists: bool
    matching: list[Edge] | None


def has_perfect_matching(g: Graph) -> PerfectMatchingResult:
    """Whether every vertex can be matched; the empty graph trivially can."""
    if g.n % 2:
        return PerfectMatchingResult(False, None)
    mm = maximum_matching(g)
    if 2 * len(mm) == g.n:
        return PerfectMatchingResult(True, mm)
    return PerfectMatchingResult(False, None)


# ---------------------------------------------------------------------------
# exhaustive oracle


def _check_small(g: Graph) -> None:
    if g.n > EXHAUSTIVE_LIMIT:
        raise GraphError(f"exhaustive matching limited to {EXHAUSTIVE_LIMIT} vertices, got {g.n}")


def exhaustive_maximum_matching_size(g: Graph) -> int:
    """Maximum matching size by branching on the lowest live vertex."""
    _check_small(g)
    nbr_masks = [sum(1 << w for w in g.adj[v]) for v in range(g.n)]

    @lru_cache(maxsize=None)
    def best(live: int) -> int:
        if live == 0:
            return 0
        v = (live & -live).bit_length() - 1
        rest = live & ~(1 << v)
        out = best(rest)  # v unmatched
        cand = nbr_masks[v] & rest
        while cand:
            w = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            out = max(out, 1 + best(rest & ~(1 << w)))
        return out

    return best((1 << g.n) - 1)


def exhaustive_perfect_matching(g: Graph, vertices: Iterable[int] | None = None) -> list[Edge] | None:
    """A perfect matching of ``g`` (or of the subgraph induced by ``vertices``)
    found by exhaustive branching, or ``None``."""
    live0 = (1 << g.n) - 1 if vertices is None else sum(1 << v for v in set(vertices))
    if bin(live0).count("1") > EXHAUSTIVE_LIMIT:
        raise GraphError(f"exhaustive matching limited to {EXHAUSTIVE_LIMIT} vertices")
    nbr_masks = [sum(1 << w for w in g.adj[v]) for v in range(g.n)]

    @lru_cache(maxsize=None)
    def solve(live: int) -> tuple[Edge, ...] | None:
        if live == 0:
            return ()
        v = (live & -live).bit_length() - 1
        rest = live & ~(1 << v)
        cand = nbr_masks[v] & rest
        while cand:
            w = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            sub = solve(rest & ~(1 << w))
            if sub is not None:
                return ((v, w),) + sub
        return None

    res = solve(live0)
    return None if res is None else sorted(res)
