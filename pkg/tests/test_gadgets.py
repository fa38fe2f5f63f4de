import itertools

import pytest

from conftest import g_claim_violations, t_claim_violations
from matchcut.colouring import BLUE, RED
from matchcut.errors import PreconditionError
from matchcut.graph import girth, make_named
from matchcut.immunity import ProviderRequest, chain, find_immune
from matchcut.gadgets import (
    BICHROMATIC,
    SAME_MATCHED,
    SAME_UNMATCHED,
    U_SIDE,
    V_SIDE,
    Assembly,
    G_schema,
    build_clause_gadget,
    build_G,
    build_H,
    build_Hprime,
    build_T,
    build_variable_chain,
    chain_length,
    colour_clause_aux,
    cycle_length,
    round_up_odd,
    verify_H,
)
from matchcut.matching import has_perfect_matching, is_perfect_matching
from matchcut.trace import Role

K4_IMMUNE = find_immune(ProviderRequest(3, designated_distance=1))


# ---------------------------------------------------------------------------
# T


def test_T_small():
    t = build_T(1)
    assert (t.graph.n, t.graph.m) == (6, 8)
    assert t.graph.has_edge(0, 5) and t.graph.has_edge(1, 3)
    assert {(0, 2), (0, 3), (2, 3), (1, 4), (1, 5), (4, 5)} <= set(t.graph.edge_list())


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_T_structure(i):
    t = build_T(i)
    g = t.graph
    assert g.n == 4 * i + 2
    assert all(any(g.has_edge(a, b) for a in g.adj[v] for b in g.adj[v] if a < b) for v in range(g.n))
    assert g.without([0, 1])[0].n == 4 * i
    assert g.distance(t.u, t.v) >= i + 1


def test_T_errors():
    with pytest.raises(PreconditionError):
        build_T(0)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_T_claim(i):
    bad, mono, bi = t_claim_violations(i)
    assert bad == 0 and mono and bi


# ---------------------------------------------------------------------------
# G


def test_G_small():
    g = build_G(1).graph
    assert (g.n, g.m) == (8, 12)


@pytest.mark.parametrize("i", [1, 2, 3, 5])
def test_G_structure(i):
    gad = build_G(i)
    g = gad.graph
    assert g.n == 2 * i + 6 and g.n % 2 == 0
    tops = gad.trace.meta["tops"]
    u2 = gad.trace.meta["u_prime"]
    square, _ = g.induced([gad.u, u2, tops[1], gad.trace.meta["bottoms"][1]])
    assert square.m == 4 and set(square.degrees()) == {2}


@pytest.mark.parametrize("i", [1, 3, 5])
@pytest.mark.parametrize("case", [SAME_MATCHED, SAME_UNMATCHED, BICHROMATIC])
def test_G_schemas(i, case):
    gad = build_G(i)
    m = G_schema(gad, case)
    if case == SAME_UNMATCHED:
        rest, keep = gad.graph.without([gad.u, gad.v])
        fwd = {v: j for j, v in enumerate(keep)}
        assert is_perfect_matching(rest, [(fwd[a], fwd[b]) for a, b in m])
    else:
        assert is_perfect_matching(gad.graph, m)
    if case == BICHROMATIC:
        tops, bots = gad.trace.meta["tops"], gad.trace.meta["bottoms"]
        assert (0, tops[1]) in m and (min(2, bots[1]), max(2, bots[1])) in m


def test_G_schema_errors():
    with pytest.raises(ValueError):
        G_schema(build_G(1), "sideways")
    with pytest.raises(PreconditionError):
        build_G(0)
    assert [round_up_odd(i) for i in (1, 2, 3, 4)] == [1, 3, 3, 5]


@pytest.mark.parametrize("i", [1, 3])
def test_G_claim(i):
    bad, mono, bi = g_claim_violations(i)
    assert bad == 0 and mono and bi


# ---------------------------------------------------------------------------
# H' and H


def test_chain_length():
    assert chain_length(18) == 3
    assert chain_length(12) == 3
    assert chain_length(3) == 1
    assert chain_length(6) == 1
    assert chain_length(7) == 3


def test_Hprime_on_chain_of_K4():
    base, s, t = chain(make_named("complete", 4), 0, 1, 5)
    pm = has_perfect_matching(base).matching
    h = build_Hprime(base, s, t, pm, 3)
    x, y = h.parts["x"], h.parts["y"]
    assert base.distance(x, y) >= 2
    assert h.graph.m == base.m + 1 and h.graph.has_edge(x, y)
    assert girth(h.graph) >= 3
    assert is_perfect_matching(h.graph, h.pm_full)
    assert tuple(sorted((x, y))) in h.pm_minus and len(h.pm_minus) == len(h.pm_full) - 1


def test_Hprime_preconditions():
    k4 = make_named("complete", 4)
    pm = has_perfect_matching(k4).matching
    with pytest.raises(PreconditionError):
        build_Hprime(k4, 0, 1, pm, 3)
    c8 = make_named("cycle", 8)
    with pytest.raises(PreconditionError):
        build_Hprime(c8, 0, 4, has_perfect_matching(c8).matching, 3)
    with pytest.raises(PreconditionError):
        build_Hprime(k4, 0, 1, [(0, 1)], 3)


@pytest.mark.parametrize("g", [3, 4])
def test_build_H(g):
    h = build_H(g)
    assert h.copies == chain_length(g)
    assert girth(h.graph) >= g
    verify_H(h, g)
    assert h.s != h.t


# ---------------------------------------------------------------------------
# variable chain and clause gadget


def test_cycle_length():
    assert [cycle_length(g) for g in (3, 4, 5, 8, 9, 12)] == [4, 4, 8, 8, 12, 12]


@pytest.mark.parametrize("ell", [4, 8, 12])
def test_variable_chain(ell):
    g, trace = build_variable_chain(3, ell, 3, K4_IMMUNE)
    meta = trace.meta
    for x in (1, 2, 3):
        for side in (V_SIDE, U_SIDE):
            assert len(meta["cycle_ports"][x][side]) == ell // 2
            assert len(meta["clause_ports"][x][side]) == 3
    assert len(meta["links"]) == 2
    for cyc in meta["links"]:
        assert len(cyc) == ell == len(set(cyc))
        assert all(g.has_edge(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1]))
    assert g.is_connected() and girth(g) >= 3
    trace.validate(g.n)


def test_variable_chain_errors():
    with pytest.raises(PreconditionError):
        build_variable_chain(2, 6, 3, K4_IMMUNE)
    with pytest.raises(PreconditionError):
        build_variable_chain(2, 4, 5, K4_IMMUNE)
    with pytest.raises(PreconditionError):
        build_variable_chain(0, 4, 3, K4_IMMUNE)


def _bare_clause(g):
    asm = Assembly()
    vp = [asm.vertex(Role("clause-port", (k,), (V_SIDE, 1))) for k in range(1, g + 1)]
    up = [asm.vertex(Role("clause-port", (k,), (U_SIDE, 1))) for k in range(1, g + 1)]
    cg = build_clause_gadget(g, vp, up, asm)
    graph, _ = asm.build()
    return graph, cg


def _cycle_lengths_through_chord(cg):
    cyc = cg.aux_cycle()
    a, b = cg.chord
    i, j = sorted((cyc.index(a), cyc.index(b)))
    inner = j - i + 1
    return len(cyc), sorted((inner, len(cyc) - inner + 2))


@pytest.mark.parametrize("g", range(3, 9))
def test_clause_geometry(g):
    graph, cg = _bare_clause(g)
    cyc = cg.aux_cycle()
    assert all(graph.has_edge(x, y) for x, y in zip(cyc, cyc[1:] + cyc[:1]))
    assert graph.has_edge(*cg.chord)
    total, parts = _cycle_lengths_through_chord(cg)
    assert total == 4 * g
    m = g // 2
    assert parts == sorted((4 * m - 1, 4 * g - 4 * m + 3))
    assert graph.degree(cg.v_clause) == g
    assert set(graph.adj[cg.v_clause]) == set(cg.v_ports)


def test_clause_chord_even_g_lengths():
    for g in (4, 6, 8):
        _, cg = _bare_clause(g)
        assert _cycle_lengths_through_chord(cg)[1] == [2 * g - 1, 2 * g + 3]


def test_clause_errors():
    asm = Assembly()
    with pytest.raises(PreconditionError):
        build_clause_gadget(3, [0, 1], [2, 3, 4], asm)
    _, cg = _bare_clause(3)
    with pytest.raises(PreconditionError):
        colour_clause_aux(cg, 0)
    with pytest.raises(PreconditionError):
        colour_clause_aux(cg, 4)


def _locally_valid(cg, k, col):
    """Every aux vertex, clause vertex and u-port sees at most one opposite colour.

    Clause vertices are blue, the u-port of the true position blue, the others red.
    """
    g = cg.g
    c = dict(col)
    for w in cg.u_clause:
        c[w] = BLUE
    for p, q in enumerate(cg.u_ports, 1):
        c[q] = BLUE if p == k else RED
    chord_mate = {cg.chord[0]: cg.chord[1], cg.chord[1]: cg.chord[0]}
    nbrs = {}
    for j in range(g):
        nbrs[cg.a[j]] = [cg.u_ports[j], cg.u_clause[j]]
        nbrs[cg.b[j]] = [cg.u_ports[j], cg.u_clause[(j + 1) % g]]
    for w, m in chord_mate.items():
        nbrs[w].append(m)
    for j in range(g):
        nbrs[cg.u_clause[j]] = [cg.a[j], cg.b[j - 1]]
        nbrs[cg.u_ports[j]] = [cg.a[j], cg.b[j]]
    return all(sum(c[x] != c[w] for x in xs) <= 1 for w, xs in nbrs.items())


@pytest.mark.parametrize("g", range(3, 9))
def test_clause_aux_colouring_valid(g):
    _, cg = _bare_clause(g)
    for k in range(1, g + 1):
        col = colour_clause_aux(cg, k)
        assert col[cg.a[k - 1]] == col[cg.b[k - 1]] == BLUE
        assert col[cg.chord[0]] == col[cg.chord[1]]
        assert set(col) == set(cg.a) | set(cg.b)
        assert _locally_valid(cg, k, col)


def test_clause_aux_worked_example():
    _, cg = _bare_clause(8)
    col = colour_clause_aux(cg, 5)
    word = lambda vs: "".join("RB"[col[v]] for v in vs)  # noqa: E731
    assert word(cg.a) == "RBBBBRRR"
    # the worked example labels b one step later round the cycle: its b_j is our b_{j-1}
    shifted = cg.b[-1:] + cg.b[:-1]
    assert word(shifted) == "BRRRRBBB"


def test_clause_aux_exhaustive_g3():
    _, cg = _bare_clause(3)
    aux = list(cg.a) + list(cg.b)
    for k in (1, 2, 3):
        valid = set()
        for bits in itertools.product((RED, BLUE), repeat=6):
            col = dict(zip(aux, bits))
            if col[cg.a[k - 1]] == col[cg.b[k - 1]] == BLUE and _locally_valid(cg, k, col):
                valid.add(bits)
        got = colour_clause_aux(cg, k)
        assert tuple(got[w] for w in aux) in valid


def test_assembly_attach_records_copies():
    asm = Assembly()
    hub = asm.vertex(Role("hub", (1,), (V_SIDE,)))
    port = asm.attach_immune(K4_IMMUNE, hub, Role("clause-port", (1,), (V_SIDE, 1)))
    g, trace = asm.build()
    assert (g.n, g.m) == (4, 6) and g.has_edge(hub, port)
    assert trace.meta["copy_anchor"] == [hub]
