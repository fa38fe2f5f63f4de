"""Shared graph corpora and the acceptance summary printer."""

from __future__ import annotations

import random
from functools import lru_cache

import networkx as nx
import numpy as np
import pytest

from matchcut.graph import Graph

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def from_nx(h: nx.Graph) -> Graph:
    nodes = sorted(h.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(idx[a], idx[b]) for a, b in h.edges()])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edge_list())
    return h


@lru_cache(maxsize=None)
def connected_graphs_upto7() -> tuple[Graph, ...]:
    """Every connected graph on 2..7 vertices, one per isomorphism class."""
    out = []
    for h in nx.graph_atlas_g():
        if 2 <= h.number_of_nodes() <= 7 and nx.is_connected(h):
            out.append(from_nx(h))
    return tuple(out)


@lru_cache(maxsize=None)
def connected_graphs_8() -> tuple[Graph, ...]:
    """Every connected graph on 8 vertices, one per isomorphism class.

    Each such graph has a non-cut vertex, so it arises from a connected
    7-vertex graph plus one vertex joined to a nonempty subset.
    """
    import pynauty

    seven = [g for g in connected_graphs_upto7() if g.n == 7]
    seen: set[bytes] = set()
    out = []
    for g in seven:
        for mask in range(1, 1 << 7):
            edges = list(g.edge_list()) + [(v, 7) for v in range(7) if mask >> v & 1]
            adj = {v: [] for v in range(8)}
            for a, b in edges:
                adj[a].append(b)
            cert = pynauty.certificate(pynauty.Graph(8, adjacency_dict=adj))
            if cert not in seen:
                seen.add(cert)
                out.append(Graph(8, edges))
    return tuple(out)


def random_connected(rng: random.Random, n: int, p: float) -> Graph:
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = Graph(n, edges)
        if g.is_connected():
            return g


def random_connected_graphs(count: int, nmin: int, nmax: int, seed: int) -> list[Graph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(nmin, nmax)
        out.append(random_connected(rng, n, rng.uniform(0.15, 0.6)))
    return out


def random_subcubic_connected(rng: random.Random, n: int) -> Graph:
    """Random spanning tree of max degree 3, then random extra edges keeping degree <= 3."""
    while True:
        deg = [0] * n
        edges = set()
        order = list(range(n))
        rng.shuffle(order)
        ok = True
        for k in range(1, n):
            v = order[k]
            cands = [u for u in order[:k] if deg[u] < 3]
            if not cands:
                ok = False
                break
            u = rng.choice(cands)
            edges.add((min(u, v), max(u, v)))
            deg[u] += 1
            deg[v] += 1
        if not ok:
            continue
        for _ in range(rng.randint(0, n)):
            u, v = rng.sample(range(n), 2)
            e = (min(u, v), max(u, v))
            if e not in edges and deg[u] < 3 and deg[v] < 3:
                edges.add(e)
                deg[u] += 1
                deg[v] += 1
        return Graph(n, edges)


def valid_colourings(g: Graph) -> list[tuple[int, ...]]:
    """Every valid red-blue colouring of ``g`` by direct enumeration (n <= 20)."""
    assert g.n <= 20
    masks = np.arange(1 << g.n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(g.n)) & 1
    ok = (masks != 0) & (masks != (1 << g.n) - 1)
    for v in range(g.n):
        nb = list(g.adj[v])
        if nb:
            opp = (bits[:, nb] != bits[:, [v]]).sum(axis=1)
            ok &= opp <= 1
    return [tuple(int(x) for x in bits[k]) for k in np.flatnonzero(ok)]


def gadget_host(gadget, tail: int = 1) -> tuple[Graph, list[int], list[int]]:
    """The gadget with a pendant path of ``tail`` vertices on each of ``u`` and ``v``."""
    g = gadget.graph
    edges = list(g.edge_list())
    a = list(range(g.n, g.n + tail))
    b = list(range(g.n + tail, g.n + 2 * tail))
    for side, end in ((a, gadget.u), (b, gadget.v)):
        prev = end
        for w in side:
            edges.append((prev, w))
            prev = w
    return Graph(g.n + 2 * tail, edges), a, b


def t_claim_violations(i: int) -> tuple[int, int, int]:
    """(violations, monochromatic count, bichromatic count) over all valid colourings."""
    from matchcut.colouring import cut_edges
    from matchcut.gadgets import T_cut_edges, build_T

    gad = build_T(i)
    host, _, _ = gadget_host(gad)
    us, vs = gad.trace.meta["u_strip"], gad.trace.meta["v_strip"]
    bad = mono = bi = 0
    for c in valid_colourings(host):
        if c[gad.u] == c[gad.v]:
            mono += 1
            bad += len({c[w] for w in range(gad.graph.n)}) != 1
        else:
            bi += 1
            ok = all(c[w] == c[gad.u] for w in us) and all(c[w] == c[gad.v] for w in vs)
            ok = ok and set(T_cut_edges(gad)) <= set(cut_edges(host, c))
            bad += not ok
    return bad, mono, bi


def g_claim_violations(i: int) -> tuple[int, int, int]:
    """The same tally over all perfect-extendable colourings of the G host."""
    from matchcut.colouring import classify
    from matchcut.gadgets import build_G
    from matchcut.matching import exhaustive_perfect_matching

    gad = build_G(i)
    host, _, b = gadget_host(gad, tail=2)
    tops, bots = gad.trace.meta["tops"], gad.trace.meta["bottoms"]
    u, v, u2 = gad.u, gad.v, gad.trace.meta["u_prime"]
    inside_partners = {tops[-1], bots[-2]}
    bad = mono = bi = 0
    for c in valid_colourings(host):
        rep = classify(host, c)
        red = [w for w in rep.red if w not in rep.red_interface]
        blue = [w for w in rep.blue if w not in rep.blue_interface]
        if exhaustive_perfect_matching(host, red) is None or exhaustive_perfect_matching(host, blue) is None:
            continue
        gadget_colours = {c[w] for w in range(gad.graph.n)}
        if len(gadget_colours) == 1:
            mono += 1
            continue
        bi += 1
        ok = {w for w in range(gad.graph.n) if c[w] == c[u]} == {u, u2}
        ok = ok and {(min(u, tops[1]), max(u, tops[1])), (min(u2, bots[1]), max(u2, bots[1]))} <= set(rep.cut)
        # v may not be matched outside the gadget in any extension
        left = blue if c[v] == 1 else red
        if v not in left:
            ok = False
        else:
            for w in host.adj[v]:
                if w in left and w not in inside_partners:
                    rest = [x for x in left if x not in (v, w)]
                    if exhaustive_perfect_matching(host, rest) is not None:
                        ok = False
        bad += not ok
    return bad, mono, bi


@pytest.fixture(scope="session")
def small_connected():
    return connected_graphs_upto7()


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[criterion] = (passed, detail)
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'} - {detail}")
