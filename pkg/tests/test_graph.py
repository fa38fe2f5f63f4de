import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import random_connected, to_nx
from matchcut.errors import BudgetExceeded, GraphError
from matchcut.graph import (
    Graph,
    GraphBuilder,
    bipartition,
    contains_induced,
    girth,
    induced_claw_centres,
    is_bipartite,
    is_hstar_free,
    make_named,
    profile,
    subdivide,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def test_rejects_loops_duplicates_and_range():
    with pytest.raises(GraphError):
        Graph(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 2)])


def test_named_graphs():
    assert make_named("path", 6).m == 5
    assert make_named("cycle", 6).m == 6
    assert make_named("complete", 4).m == 6
    assert make_named("complete_bipartite", 3, 3).m == 9
    pet = make_named("petersen")
    assert (pet.n, pet.m, set(pet.degrees()), girth(pet)) == (10, 15, {3}, 5)
    h1 = make_named("hstar", 1)
    assert (h1.n, h1.m) == (6, 5)
    assert sorted(h1.degrees()) == [1, 1, 1, 1, 3, 3]


def test_hstar_spine_length():
    for i in range(1, 5):
        h = make_named("hstar", i)
        centres = [v for v in range(h.n) if h.degree(v) == 3]
        assert len(centres) == 2
        assert h.distance(*centres) == i
        assert h.n == i + 5


def test_girth_examples():
    assert girth(make_named("path", 5)) == float("inf")
    assert girth(make_named("complete", 3)) == 3
    assert girth(make_named("cycle", 7)) == 7
    assert girth(make_named("complete_bipartite", 3, 3)) == 4


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_girth_matches_networkx(g):
    expected = nx.girth(to_nx(g))
    assert girth(g) == expected


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_bipartition_is_proper(g):
    side = bipartition(g)
    assert (side is not None) == nx.is_bipartite(to_nx(g))
    if side is not None:
        assert all(side[u] != side[v] for u, v in g.edges)


def test_bfs_and_components():
    g = Graph(5, [(0, 1), (1, 2), (3, 4)])
    assert g.bfs(0)[:3] == [0, 1, 2]
    assert g.distance(0, 3) == float("inf")
    assert sorted(map(sorted, g.components())) == [[0, 1, 2], [3, 4]]
    assert not g.is_connected()


def test_induced_and_without_keep_order():
    g = make_named("cycle", 5)
    h, keep = g.induced([4, 0, 1])
    assert keep == [0, 1, 4]
    assert sorted(h.edge_list()) == [(0, 1), (0, 2)]
    r, keep = g.without([0])
    assert keep == [1, 2, 3, 4] and r.m == 3


def test_builder_copy_identifies():
    b = GraphBuilder()
    k4 = make_named("complete", 4)
    b.add_copy(k4)
    mp = b.add_copy(k4, identify={0: 3})
    assert mp[0] == 3 and b.n == 7
    with pytest.raises(GraphError):
        b.add_edge(0, 0)
    with pytest.raises(GraphError):
        b.add_edge(0, 1)


def test_profile():
    p = profile(make_named("petersen"))
    assert p.regular_degree == 3 and p.subcubic and not p.bipartite and p.connected


def test_subdivide_counts_and_paths():
    c4 = make_named("cycle", 4)
    h, trace = subdivide(c4, 4)
    assert (h.n, h.m) == (20, 20)
    assert girth(h) == 20
    assert trace.meta["paths"][(0, 1)] == [0, 4, 5, 6, 7, 1]
    assert [r.kind for r in trace.roles[:4]] == ["original"] * 4
    assert trace.role(4).origin == (0, 1) and trace.role(4).index == (1,)
    single, _ = subdivide(make_named("path", 2), 4, edge=(0, 1))
    assert single.is_connected() and sorted(single.degrees()) == [1, 1, 2, 2, 2, 2]


def _nx_induced(host, pattern):
    return GraphMatcher(to_nx(host), to_nx(pattern)).subgraph_is_isomorphic()


def test_contains_induced_examples():
    h1 = make_named("hstar", 1)
    assert contains_induced(h1, h1) is not None
    assert contains_induced(make_named("hstar", 2), h1) is None
    assert contains_induced(make_named("complete", 5), make_named("path", 3)) is None
    emb = contains_induced(make_named("cycle", 6), make_named("path", 4))
    assert emb is not None and len(emb) == 4


@pytest.mark.parametrize("seed", range(40))
def test_contains_induced_matches_networkx(seed):
    rng = random.Random(seed)
    host = random_connected(rng, rng.randint(6, 11), rng.uniform(0.2, 0.5))
    pattern = make_named("hstar", rng.randint(1, 2)) if seed % 2 else random_connected(rng, 4, 0.5)
    emb = contains_induced(host, pattern)
    assert (emb is not None) == _nx_induced(host, pattern)
    if emb is not None:
        for a in range(pattern.n):
            for b in range(a + 1, pattern.n):
                assert pattern.has_edge(a, b) == host.has_edge(emb[a], emb[b])


def test_contains_induced_budget():
    host = make_named("complete_bipartite", 8, 8)
    with pytest.raises(BudgetExceeded):
        contains_induced(host, make_named("cycle", 5), budget=10)


def test_claw_centres():
    star = make_named("star", 4)
    assert induced_claw_centres(star) == [True] + [False] * 4
    assert not any(induced_claw_centres(make_named("complete", 4)))


def test_hstar_free():
    h2 = make_named("hstar", 2)
    res = is_hstar_free(h2, 2)
    assert not res.free and res.index == 2
    assert is_hstar_free(h2, 1).free
    assert is_hstar_free(make_named("cycle", 9), 3).free
    assert is_bipartite(h2)
