"""Immune graphs: graphs without a matching cut.

Immunity is certified in one of two ways.  The exhaustive route runs the MC
solver and records the nodes it spent.  The spectral route applies to
d-regular graphs, where edge expansion is at least ``(d - lambda2) / 2`` and
expansion above 1 rules out every matching cut.

:func:`find_immune` supplies gadget building blocks.  It tries the catalog
first, then chains of catalog graphs glued at single vertices, then random
regular graphs whose short cycles are removed by edge switching.  Every
candidate is re-verified before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import GraphError, MatchCutError
from .graph import Graph, GraphBuilder, girth, is_bipartite, make_named
from .matching import has_perfect_matching
from .solvers import DEFAULT_BUDGET, solve_mc

EXPANSION_LIMIT = 20
EXACT_SPECTRUM_LIMIT = 8
DEFAULT_TOL = 1e-9
DEFAULT_MARGIN = 1e-6
TRIES_PER_SIZE = 3


# ---------------------------------------------------------------------------
# expansion and spectrum


def edge_expansion(g: Graph, threshold: int = EXPANSION_LIMIT) -> Fraction:
    """Exact ``min |boundary(S)| / |S|`` over nonempty ``S`` with ``|S| <= n/2``."""
    if g.n > threshold:
        raise GraphError(f"edge expansion limited to {threshold} vertices, got {g.n}")
    if g.n < 2:
        raise GraphError("edge expansion needs at least two vertices")
    if not g.is_connected():
        raise GraphError("edge expansion is defined here for connected graphs")
    masks = np.arange(1, 1 << g.n, dtype=np.uint32)
    size = np.zeros(masks.size, dtype=np.int64)
    for v in range(g.n):
        size += (masks >> v) & 1
    keep = size <= g.n // 2
    masks, size = masks[keep], size[keep]
    boundary = np.zeros(masks.size, dtype=np.int64)
    for u, v in g.edges:
        boundary += ((masks >> u) ^ (masks >> v)) & 1
    best: Fraction | None = None
    for k in range(1, g.n // 2 + 1):
        low = int(boundary[size == k].min())
        cand = Fraction(low, k)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=float)
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1.0
    return a


def lambda2(g: Graph, tol: float = DEFAULT_TOL) -> float:
    """Second-largest adjacency eigenvalue, counted with multiplicity.

    Small graphs go through the exact characteristic polynomial; larger ones
    through a dense symmetric eigensolver.
    """
    if g.n < 2:
        raise GraphError("lambda2 needs at least two vertices")
    if g.n <= EXACT_SPECTRUM_LIMIT:
        import sympy

        mat = sympy.Matrix(g.n, g.n, lambda i, j: 1 if g.has_edge(i, j) else 0)
        lam = sympy.Symbol("lam")
        roots = sympy.Poly(mat.charpoly(lam).as_expr(), lam).real_roots()
        if len(roots) != g.n:
            raise MatchCutError("characteristic polynomial of a symmetric matrix lost real roots")
        digits = max(15, int(-np.log10(tol)) + 5)
        vals = sorted((float(r.evalf(digits)) for r in roots), reverse=True)
        return vals[1]
    try:
        vals = np.linalg.eigvalsh(adjacency_matrix(g))
    except np.linalg.LinAlgError as exc:
        raise MatchCutError(f"eigensolver did not converge: {exc}") from None
    return float(vals[-2])


# ---------------------------------------------------------------------------
# certificates


EXHAUSTIVE = "exhaustive"
SPECTRAL = "spectral"


@dataclass(frozen=True)
class ImmuneCertificate:
    method: str
    d: int | None = None
    lambda2: float | None = None
    bound: float | None = None
    safety_margin: float | None = None
    nodes: int | None = None

    def __post_init__(self) -> None:
        if self.method == SPECTRAL:
            if None in (self.d, self.lambda2, self.bound, self.safety_margin):
                raise ValueError("spectral certificate needs d, lambda2, bound and margin")
            if not self.bound > 1 + self.safety_margin:
                raise ValueError("spectral bound does not exceed 1 + margin")
        elif self.method == EXHAUSTIVE:
            if self.nodes is None:
                raise ValueError("exhaustive certificate needs a node count")
        else:
            raise ValueError(f"unknown certificate method {self.method!r}")


def regular_degree(g: Graph) -> int | None:
    degs = set(g.degrees())
    return degs.pop() if len(degs) == 1 else None


def spectral_certificate(
    g: Graph, tol: float = DEFAULT_TOL, margin: float = DEFAULT_MARGIN
) -> ImmuneCertificate | None:
    d = regular_degree(g)
    if d is None or g.n < 2:
        return None
    lam = lambda2(g, tol)
    bound = (d - lam) / 2
    if bound > 1 + margin:
        return ImmuneCertificate(SPECTRAL, d=d, lambda2=lam, bound=bound, safety_margin=margin)
    return None


def exhaustive_certificate(g: Graph, budget: int | None = DEFAULT_BUDGET) -> ImmuneCertificate | None:
    cert = solve_mc(g, budget)
    if cert.answer:
        return None
    return ImmuneCertificate(EXHAUSTIVE, nodes=cert.nodes)


def certify_immune(
    g: Graph,
    prefer: str = SPECTRAL,
    budget: int | None = DEFAULT_BUDGET,
    margin: float = DEFAULT_MARGIN,
) -> ImmuneCertificate | None:
    """A certificate of immunity, or ``None`` when neither route succeeds.

    ``None`` means "not certified", not "has a matching cut".  A solver budget
    overrun also yields ``None``.
    """
    if not g.is_connected():
        raise GraphError("immunity is certified on connected graphs")
    routes = (SPECTRAL, EXHAUSTIVE) if prefer == SPECTRAL else (EXHAUSTIVE, SPECTRAL)
    for route in routes:
        if route == SPECTRAL:
            cert = spectral_certificate(g, margin=margin)
        else:
            try:
                cert = exhaustive_certificate(g, budget)
            except MatchCutError:
                cert = None
        if cert is not None:
            return cert
    return None


def check_certificate(g: Graph, cert: ImmuneCertificate, budget: int | None = DEFAULT_BUDGET) -> bool:
    """Recompute the evidence behind ``cert`` on ``g``."""
    if cert.method == SPECTRAL:
        fresh = spectral_certificate(g, margin=cert.safety_margin or DEFAULT_MARGIN)
        return fresh is not None and fresh.d == cert.d
    return not solve_mc(g, budget).answer


def is_immune(g: Graph, budget: int | None = DEFAULT_BUDGET) -> bool:
    """True iff ``g`` has no matching cut; raises on budget overrun."""
    return not solve_mc(g, budget).answer


# ---------------------------------------------------------------------------
# catalog


@dataclass
class CatalogEntry:
    name: str
    graph: Graph
    certificate: ImmuneCertificate


@dataclass
class Catalog:
    """Verified immune graphs, consulted before any random search."""

    entries: list[CatalogEntry] = field(default_factory=list)

    @classmethod
    def default(cls) -> Catalog:
        cat = cls()
        cat.register("K4", make_named("complete", 4))
        cat.register("K3,3", make_named("complete_bipartite", 3, 3))
        return cat

    def register(
        self, name: str, g: Graph, cert: ImmuneCertificate | None = None, budget: int | None = DEFAULT_BUDGET
    ) -> CatalogEntry:
        """Add ``g`` after verifying it; a supplied certificate is re-checked."""
        if cert is None:
            cert = certify_immune(g, budget=budget)
            if cert is None:
                raise GraphError(f"catalog entry {name!r} could not be certified immune")
        elif not check_certificate(g, cert, budget):
            raise GraphError(f"catalog entry {name!r} fails its certificate")
        entry = CatalogEntry(name, g, cert)
        self.entries.append(entry)
        return entry

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path: str | Path, with_defaults: bool = True) -> Catalog:
        from .io import parse_catalog

        cat = cls.default() if with_defaults else cls()
        for name, g, cert in parse_catalog(Path(path).read_text()):
            cat.register(name, g, cert)
        return cat

    def save(self, path: str | Path) -> None:
        from .io import format_catalog

        Path(path).write_text(format_catalog((e.name, e.graph, e.certificate) for e in self.entries))


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class ProviderRequest:
    min_girth: int = 3
    must_be_bipartite: bool = False
    needs_perfect_matching: bool = False
    designated_distance: int = 0
    max_vertices: int = 200
    seed: int = 0
    attempts: int = 60
    budget: int | None = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.min_girth < 3:
            raise ValueError("min_girth must be at least 3")
        if self.designated_distance < 0:
            raise ValueError("designated_distance must be non-negative")


@dataclass(frozen=True)
class ImmuneGraph:
    graph: Graph
    s: int
    t: int
    certificate: ImmuneCertificate
    source: str = ""


def farthest_pairs(g: Graph, limit: int | None = None) -> list[tuple[int, int, int]]:
    """Pairs ``(dist, s, t)`` with ``s < t``, farthest first, lowest ids on ties."""
    out = []
    for s in range(g.n):
        dist = g.bfs(s)
        out.extend((int(dist[t]), s, t) for t in range(s + 1, g.n) if dist[t] != float("inf"))
    out.sort(key=lambda x: (-x[0], x[1], x[2]))
    return out if limit is None else out[:limit]


def farthest_pair(g: Graph) -> tuple[int, int, int]:
    pairs = farthest_pairs(g, 1)
    if not pairs:
        raise GraphError("graph has no pair of distinct connected vertices")
    return pairs[0]


def chain(g: Graph, s: int, t: int, copies: int) -> tuple[Graph, int, int]:
    """``copies`` copies of ``g`` with ``t`` of each copy identified with ``s`` of the next."""
    if copies < 1:
        raise ValueError("need at least one copy")
    b = GraphBuilder()
    first = b.add_copy(g)
    start, end = first[s], first[t]
    for _ in range(copies - 1):
        mp = b.add_copy(g, identify={s: end})
        end = mp[t]
    return b.build(), start, end


def _meets(req: ProviderRequest, g: Graph) -> bool:
    if g.n > req.max_vertices or not g.is_connected():
        return False
    if girth(g) < req.min_girth:
        return False
    if req.must_be_bipartite and not is_bipartite(g):
        return False
    if req.needs_perfect_matching and not has_perfect_matching(g).exists:
        return False
    return True


def _join_pairs(g: Graph, per_distance: int) -> list[tuple[int, int, int]]:
    """A few farthest-first pairs from every distance class."""
    taken: dict[int, int] = {}
    out = []
    for d, s, t in farthest_pairs(g):
        if taken.get(d, 0) < per_distance:
            taken[d] = taken.get(d, 0) + 1
            out.append((d, s, t))
    return out


def _chains_of(
    req: ProviderRequest, name: str, base: Graph, cert: ImmuneCertificate, pair_limit: int = 3
) -> ImmuneGraph | None:
    if girth(base) < req.min_girth or (req.must_be_bipartite and not is_bipartite(base)):
        return None
    if base.n == 1:
        return None
    copies = 1
    while copies * (base.n - 1) + 1 <= req.max_vertices:
        tried: set[Graph] = set()
        pairs = [(0, 0, 0)] if copies == 1 else _join_pairs(base, pair_limit)
        for _, a, b in pairs:
            h, _, _ = chain(base, a, b, copies)
            if h in tried:
                continue
            tried.add(h)
            if req.needs_perfect_matching and h.n % 2:
                continue
            d, s, t = farthest_pair(h)
            if d < req.designated_distance or not _meets(req, h):
                continue
            hc = cert if copies == 1 else certify_immune(h, prefer=EXHAUSTIVE, budget=req.budget)
            if hc is None:
                continue
            label = name if copies == 1 else f"{copies}x{name}"
            return ImmuneGraph(h, s, t, hc, label)
        copies += 1
    return None


def _moore_bound(d: int, g: int) -> int:
    r = (g - 1) // 2
    total = 1 + d * sum((d - 1) ** j for j in range(r))
    if g % 2 == 0:
        total = 2 * sum((d - 1) ** j for j in range(g // 2))
    return total


def _short_cycle_edges(n: int, edges: list[tuple[int, int]], g: int) -> list[int]:
    """Indices of edges that are loops, parallel, or on a cycle shorter than ``g``."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for idx, (u, v) in enumerate(edges):
        adj[u].append(idx)
        adj[v].append(idx)
    bad = []
    for idx, (u, v) in enumerate(edges):
        if u == v:
            bad.append(idx)
            continue
        # BFS from u to v avoiding this edge, up to depth g - 2
        dist = {u: 0}
        frontier = [u]
        found = False
        while frontier and not found:
            nxt = []
            for x in frontier:
                if dist[x] >= g - 2:
                    continue
                for e in adj[x]:
                    if e == idx:
                        continue
                    a, b = edges[e]
                    y = b if a == x else a
                    if y == v:
                        found = True
                        break
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
                if found:
                    break
            frontier = nxt
        if found:
            bad.append(idx)
    return bad


def random_regular(
    n: int, d: int, min_girth: int, rng: random.Random, bipartite: bool = False, steps: int = 4000
) -> Graph | None:
    """A random ``d``-regular simple graph with girth at least ``min_girth``.

    Starts from a random pairing (``d`` stacked permutations in the bipartite
    case, sides ``0..n/2-1`` and ``n/2..n-1``) and performs double-edge switches
    that never increase the number of bad edges.  Returns ``None`` if the
    switching stalls.
    """
    if bipartite:
        if n % 2:
            return None
        half = n // 2
        edges = []
        for _ in range(d):
            perm = list(range(half))
            rng.shuffle(perm)
            edges.extend((i, half + perm[i]) for i in range(half))
    else:
        if (n * d) % 2 or d >= n:
            return None
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = [(stubs[2 * i], stubs[2 * i + 1]) for i in range(len(stubs) // 2)]

    def score(es: list[tuple[int, int]]) -> tuple[int, list[int]]:
        bad = _short_cycle_edges(n, es, max(min_girth, 3))
        return len(bad), bad

    cur, bad = score(edges)
    for _ in range(steps):
        if cur == 0:
            break
        i = rng.choice(bad)
        j = rng.randrange(len(edges))
        if i == j:
            continue
        (a, b), (c, e) = edges[i], edges[j]
        if bipartite:
            new = [(a, e), (c, b)]
        else:
            new = [(a, c), (b, e)] if rng.random() < 0.5 else [(a, e), (b, c)]
        trial = list(edges)
        trial[i], trial[j] = new
        sc, sb = score(trial)
        if sc <= cur:
            edges, cur, bad = trial, sc, sb
    if cur:
        return None
    return Graph(n, edges)


def _random_plan(req: ProviderRequest) -> Iterator[tuple[int, int]]:
    """(n, d) pairs to try, smallest first."""
    degrees = [4, 5] if req.min_girth >= 5 else [3, 4]
    for d in degrees:
        low = max(_moore_bound(d, req.min_girth) + 2, d + 2)
        for n in range(low, req.max_vertices + 1):
            if req.must_be_bipartite and n % 2:
                continue
            if (n * d) % 2:
                continue
            yield n, d


def find_immune(req: ProviderRequest, catalog: Catalog | None = None) -> ImmuneGraph | None:
    """An immune graph with designated vertices meeting ``req``, or ``None``.

    Newly found random base graphs are registered in ``catalog`` when one is
    passed, so repeated requests reuse them.
    """
    cat = catalog if catalog is not None else Catalog.default()
    for entry in list(cat):
        hit = _chains_of(req, entry.name, entry.graph, entry.certificate)
        if hit is not None:
            return _verified(req, hit)
    rng = random.Random(req.seed)
    plan = [nd for nd in _random_plan(req) for _ in range(TRIES_PER_SIZE)]
    for attempt, (n, d) in enumerate(plan[: req.attempts]):
        base = random_regular(n, d, req.min_girth, rng, req.must_be_bipartite)
        if base is None or not base.is_connected():
            continue
        cert = certify_immune(base, budget=req.budget)
        if cert is None:
            continue
        name = f"rr{d}-n{n}-g{req.min_girth}-s{req.seed}-a{attempt}"
        if catalog is not None:
            catalog.register(name, base, cert)
        hit = _chains_of(req, name, base, cert)
        if hit is not None:
            return _verified(req, hit)
    return None


def _verified(req: ProviderRequest, hit: ImmuneGraph) -> ImmuneGraph:
    h = hit.graph
    if not _meets(req, h) or h.distance(hit.s, hit.t) < req.designated_distance:
        raise MatchCutError("provider produced a graph failing the request")
    if not check_certificate(h, hit.certificate, req.budget):
        raise MatchCutError("provider produced a graph failing its certificate")
    return hit


def glue(a: Graph, va: int, b: Graph, vb: int) -> Graph:
    """Identify vertex ``va`` of ``a`` with vertex ``vb`` of ``b``."""
    builder = GraphBuilder()
    builder.add_copy(a)
    builder.add_copy(b, identify={vb: va})
    return builder.build()


__all__ = [
    "Catalog",
    "CatalogEntry",
    "ImmuneCertificate",
    "ImmuneGraph",
    "ProviderRequest",
    "certify_immune",
    "chain",
    "check_certificate",
    "edge_expansion",
    "farthest_pair",
    "find_immune",
    "glue",
    "is_immune",
    "lambda2",
    "random_regular",
]
