"""Simple undirected graphs and the structural predicates the constructions need.

Vertices are the dense integers ``0..n-1``.  Graphs are immutable; builders
append vertices after the existing ones so that traces stay stable when a
construction is extended.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import BudgetExceeded, GraphError
from .trace import ReductionTrace, Role

INF = math.inf

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "adj", "_adjset")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        es: set[Edge] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            e2 = _norm(u, v)
            if e2 in es:
                raise GraphError(f"duplicate edge {e2}")
            es.add(e2)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in es:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.n = n
        self.edges = frozenset(es)
        self.adj = tuple(tuple(sorted(a)) for a in nbrs)
        self._adjset = tuple(frozenset(a) for a in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Subgraph induced by ``vertices``, relabelled densely in ascending order.

        Returns the subgraph and the list mapping new ids to old ids.
        """
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        es = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph(len(keep), es), keep

    def without(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> Graph:
        return Graph(self.n, list(self.edges) + [tuple(e) for e in extra])

    def bfs(self, source: int) -> list[float]:
        """Distances from ``source``; unreachable vertices get ``inf``."""
        dist: list[float] = [INF] * self.n
        dist[source] = 0
        q = deque([source])
        while q:
            u = q.popleft()
            for w in self.adj[u]:
                if dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return dist

    def bfs_order(self, source: int = 0) -> list[int]:
        seen = [False] * self.n
        seen[source] = True
        order = [source]
        q = deque([source])
        while q:
            u = q.popleft()
            for w in self.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    order.append(w)
                    q.append(w)
        return order

    def distance(self, u: int, v: int) -> float:
        return self.bfs(u)[v]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if not seen[s]:
                comp = self.bfs_order(s)
                for v in comp:
                    seen[v] = True
                comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.bfs_order(0)) == self.n


class GraphBuilder:
    """Mutable accumulator used by the gadget constructions."""

    def __init__(self, n: int = 0):
        self.n = n
        self.edges: set[Edge] = set()

    @classmethod
    def from_graph(cls, g: Graph) -> GraphBuilder:
        b = cls(g.n)
        b.edges = set(g.edges)
        return b

    def add_vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def add_vertices(self, k: int) -> list[int]:
        start = self.n
        self.n += k
        return list(range(start, start + k))

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        e = _norm(u, v)
        if e in self.edges:
            raise GraphError(f"duplicate edge {e}")
        self.edges.add(e)

    def remove_edge(self, u: int, v: int) -> None:
        self.edges.remove(_norm(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def add_copy(self, g: Graph, identify: dict[int, int] | None = None) -> list[int]:
        """Copy ``g`` into the builder, gluing vertex ``a`` of ``g`` onto existing
        vertex ``identify[a]``.  Non-glued vertices are appended in id order.
        Returns the map from ``g``'s vertices to builder vertices."""
        identify = identify or {}
        mapping = []
        for a in range(g.n):
            mapping.append(identify[a] if a in identify else self.add_vertex())
        for u, v in g.edge_list():
            self.add_edge(mapping[u], mapping[v])
        return mapping

    def build(self) -> Graph:
        return Graph(self.n, self.edges)


@dataclass(frozen=True)
class GraphProfile:
    n: int
    m: int
    connected: bool
    bipartite: bool
    max_degree: int
    regular_degree: int | None
    girth: float

    @property
    def subcubic(self) -> bool:
        return self.max_degree <= 3


def bipartition(g: Graph) -> list[int] | None:
    """A proper 2-colouring (side per vertex) or ``None`` if an odd cycle exists."""
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] != -1:
            continue
        side[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    q.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``inf`` for forests.

    BFS from every root; a non-tree edge ``xy`` seen from root ``r`` closes a
    closed walk of length ``d(x) + d(y) + 1`` which contains a cycle no longer
    than that, and the shortest cycle is found exactly from any of its vertices.
    """
    best = INF
    for r in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[r] = 0
        q = deque([r])
        while q:
            u = q.popleft()
            if 2 * dist[u] >= best:
                break
            for w in g.adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def profile(g: Graph) -> GraphProfile:
    degs = g.degrees()
    regular = degs[0] if degs and all(d == degs[0] for d in degs) else None
    return GraphProfile(
        n=g.n,
        m=g.m,
        connected=g.is_connected(),
        bipartite=is_bipartite(g),
        max_degree=max(degs, default=0),
        regular_degree=regular,
        girth=girth(g),
    )


# ---------------------------------------------------------------------------
# named graphs


def _path_edges(vs: Sequence[int]) -> list[Edge]:
    return [(vs[k], vs[k + 1]) for k in range(len(vs) - 1)]


def make_named(kind: str, *params: int) -> Graph:
    """Canonical small graphs.

    ``path t`` (P_t, t vertices), ``cycle s``, ``complete n``, ``star r``
    (K_{1,r}, centre 0), ``complete_bipartite a b`` (sides ``0..a-1`` and
    ``a..a+b-1``), ``petersen``, and ``hstar i``: claw centres ``u = 0`` with
    leaves 1, 2 and ``v = i + 2`` with leaves ``i + 3``, ``i + 4``, joined by the
    path ``0, 3, 4, ..., i + 1, i + 2`` of length ``i``.
    """

    def need(count: int) -> None:
        if len(params) != count:
            raise GraphError(f"{kind} takes {count} integer parameter(s), got {len(params)}")

    if kind == "path":
        need(1)
        (t,) = params
        if t < 1:
            raise GraphError("path needs at least one vertex")
        return Graph(t, _path_edges(range(t)))
    if kind == "cycle":
        need(1)
        (s,) = params
        if s < 3:
            raise GraphError(f"cycle length must be at least 3, got {s}")
        return Graph(s, _path_edges(range(s)) + [(s - 1, 0)])
    if kind == "complete":
        need(1)
        (k,) = params
        if k < 1:
            raise GraphError("complete graph needs at least one vertex")
        return Graph(k, [(a, b) for a in range(k) for b in range(a + 1, k)])
    if kind == "star":
        need(1)
        (r,) = params
        if r < 1:
            raise GraphError("star needs at least one leaf")
        return Graph(r + 1, [(0, j) for j in range(1, r + 1)])
    if kind == "complete_bipartite":
        need(2)
        a, b = params
        if a < 1 or b < 1:
            raise GraphError("both sides of K_{a,b} must be non-empty")
        return Graph(a + b, [(x, a + y) for x in range(a) for y in range(b)])
    if kind == "petersen":
        need(0)
        outer = [(k, (k + 1) % 5) for k in range(5)]
        spokes = [(k, k + 5) for k in range(5)]
        inner = [(5 + k, 5 + (k + 2) % 5) for k in range(5)]
        return Graph(10, outer + spokes + inner)
    if kind == "hstar":
        need(1)
        (i,) = params
        if i < 1:
            raise GraphError(f"hstar index must be at least 1, got {i}")
        v = i + 2
        spine = [0] + list(range(3, i + 2)) + [v]
        return Graph(i + 5, [(0, 1), (0, 2)] + _path_edges(spine) + [(v, i + 3), (v, i + 4)])
    raise GraphError(f"unknown graph kind {kind!r}")


# ---------------------------------------------------------------------------
# induced subgraphs


def induced_claw_centres(g: Graph) -> list[bool]:
    """Flags for vertices having three pairwise non-adjacent neighbours."""
    out = []
    for v in range(g.n):
        nb = g.adj[v]
        found = False
        k = len(nb)
        for a in range(k):
            if found:
                break
            for b in range(a + 1, k):
                if g.has_edge(nb[a], nb[b]):
                    continue
                for c in range(b + 1, k):
                    if not g.has_edge(nb[a], nb[c]) and not g.has_edge(nb[b], nb[c]):
                        found = True
                        break
                if found:
                    break
        out.append(found)
    return out


def _pattern_order(p: Graph) -> tuple[list[int], list[int]]:
    """Placement order for the pattern and an already-placed neighbour per vertex.

    Greedy: among unplaced vertices touching the placed set pick the one with
    the largest degree, then most placed neighbours, then lowest id; a new
    component starts at its lowest-id vertex of maximum degree.
    """
    placed = [False] * p.n
    order: list[int] = []
    anchor: list[int] = [-1] * p.n
    while len(order) < p.n:
        best = None
        for v in range(p.n):
            if placed[v]:
                continue
            links = sum(1 for w in p.adj[v] if placed[w])
            if order and links == 0 and any(
                not placed[x] and any(placed[w] for w in p.adj[x]) for x in range(p.n)
            ):
                continue
            key = (links > 0, p.degree(v), links, -v)
            if best is None or key > best[0]:
                best = (key, v)
        assert best is not None
        v = best[1]
        placed[v] = True
        anchor[v] = next((w for w in order if p.has_edge(v, w)), -1)
        order.append(v)
    return order, anchor


def contains_induced(
    host: Graph, pattern: Graph, budget: int | None = 10_000_000
) -> dict[int, int] | None:
    """An injective map pattern -> host whose image induces a copy of ``pattern``.

    Exhaustive backtracking; ``None`` means no induced copy exists.  Raises
    :class:`BudgetExceeded` after ``budget`` candidate tests instead of
    guessing.
    """
    if pattern.n == 0:
        return {}
    if pattern.n > host.n:
        return None
    order, anchor = _pattern_order(pattern)
    pclaw = induced_claw_centres(pattern)
    hclaw = induced_claw_centres(host) if any(pclaw) else None
    image: dict[int, int] = {}
    used = [False] * host.n
    nodes = 0

    def extend(k: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        p = order[k]
        a = anchor[p]
        cands = host.adj[image[a]] if a >= 0 else range(host.n)
        pdeg = pattern.degree(p)
        for c in cands:
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"induced-subgraph search exceeded {budget} nodes", nodes)
            if used[c] or host.degree(c) < pdeg:
                continue
            if hclaw is not None and pclaw[p] and not hclaw[c]:
                continue
            ok = True
            for q in order[:k]:
                if pattern.has_edge(p, q) != host.has_edge(c, image[q]):
                    ok = False
                    break
            if not ok:
                continue
            image[p] = c
            used[c] = True
            if extend(k + 1):
                return True
            used[c] = False
            del image[p]
        return False

    return dict(sorted(image.items())) if extend(0) else None


class HStarCheck(NamedTuple):
    free: bool
    witness: dict[int, int] | None = None
    index: int | None = None


def is_hstar_free(g: Graph, i: int, budget: int | None = 10_000_000) -> HStarCheck:
    """Whether ``g`` has no induced ``H_j^*`` for any ``1 <= j <= i``."""
    if i < 1:
        raise GraphError("hstar index bound must be at least 1")
    if not any(induced_claw_centres(g)):
        return HStarCheck(True)
    for j in range(1, i + 1):
        emb = contains_induced(g, make_named("hstar", j), budget)
        if emb is not None:
            return HStarCheck(False, emb, j)
    return HStarCheck(True)


# ---------------------------------------------------------------------------
# subdivision


def subdivide(
    g: Graph, p: int, edge: Edge | None = None
) -> tuple[Graph, ReductionTrace]:
    """Replace one edge (or every edge when ``edge`` is ``None``) by a path with
    ``p`` new internal vertices.

    New vertices are appended edge by edge in sorted edge order, running from
    the smaller endpoint to the larger one.  The trace tags them
    ``subdivision-point`` with ``origin = (u, v)`` and ``index = (position,)``.
    """
    if p < 0:
        raise GraphError("subdivision count must be non-negative")
    if edge is not None:
        e = _norm(*edge)
        if e not in g.edges:
            raise GraphError(f"{edge} is not an edge of the graph")
        selected = [e]
    else:
        selected = g.edge_list()
    b = GraphBuilder.from_graph(g)
    trace = ReductionTrace([Role("original", (v,)) for v in range(g.n)])
    for u, v in selected:
        if p == 0:
            continue
        b.remove_edge(u, v)
        internal = b.add_vertices(p)
        for pos, x in enumerate(internal, 1):
            trace.set(x, Role("subdivision-point", (u, v), (pos,)))
        chain = [u] + internal + [v]
        for a, c in _path_edges(chain):
            b.add_edge(a, c)
    paths = {}
    offset = g.n
    for u, v in selected:
        paths[(u, v)] = [u] + list(range(offset, offset + p)) + [v]
        offset += p
    trace.meta["paths"] = paths
    return b.build(), trace
