import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchcut.colouring import colouring_from_str
from matchcut.errors import ParseError, VerificationError
from matchcut.gadgets import Assembly, build_clause_gadget, build_G, build_H, build_T
from matchcut.graph import Graph, girth, make_named
from matchcut.immunity import Catalog
from matchcut.io import (
    format_catalog,
    format_certificate,
    format_cnf,
    format_graph,
    parse_catalog,
    parse_certificate,
    parse_graph,
    parse_graph_roles,
    parse_one_in_k_cnf,
)
from matchcut.reductions import reduce_pmc_subdivide
from matchcut.solvers import Certificate, solve
from matchcut.trace import Role


def test_parse_examples():
    assert parse_graph("p graph 2 1\ne 1 2\n") == make_named("path", 2)
    k3 = parse_graph("c triangle\np graph 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    assert k3 == make_named("complete", 3) and girth(k3) == 3


@pytest.mark.parametrize(
    "text, line",
    [
        ("p graph 2 1\ne 1 1\n", 2),
        ("p graph 2 2\ne 1 2\ne 2 1\n", 3),
        ("p graph 2 1\ne 1 3\n", 2),
        ("p graph x 1\n", 1),
        ("p graph 2\n", 1),
        ("e 1 2\n", 1),
        ("p graph 2 1\nq 1 2\n", 2),
        ("p graph 2 1\np graph 2 1\n", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_graph(text)
    assert exc.value.line == line


def test_parse_edge_count_mismatch():
    with pytest.raises(ParseError):
        parse_graph("p graph 3 2\ne 1 2\n")
    with pytest.raises(ParseError):
        parse_graph("c empty\n")


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else [])


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_graph_round_trip(g):
    assert parse_graph(format_graph(g, comments=["x"])) == g


def _gadget_corpus():
    out = [build_T(i) for i in (1, 2, 3)] + [build_G(i) for i in (1, 3)]
    docs = [(gd.graph, gd.trace.roles) for gd in out]
    asm = Assembly()
    vp = [asm.vertex(Role("clause-port", (k,), (0, 1))) for k in range(1, 4)]
    up = [asm.vertex(Role("clause-port", (k,), (1, 1))) for k in range(1, 4)]
    build_clause_gadget(3, vp, up, asm)
    docs.append(asm.build())
    h = build_H(3)
    docs.append((h.graph, [Role("immune-internal", (0,), (v,)) for v in range(h.graph.n)]))
    g, trace = reduce_pmc_subdivide(make_named("cycle", 4), 1)
    docs.append((g, trace.roles))
    return docs


def test_gadget_round_trip():
    for g, roles in _gadget_corpus():
        text = format_graph(g, roles=roles)
        assert parse_graph(text) == g
        assert parse_graph_roles(text) == list(roles)


def test_cnf_examples():
    f = parse_one_in_k_cnf("p cnf 3 1\n1 2 3 0\n", 3)
    assert f.clauses == ((1, 2, 3),) and set(f.occurrence.values()) == {1}
    assert parse_one_in_k_cnf(format_cnf(f), 3) == f
    with pytest.raises(ParseError):
        parse_one_in_k_cnf("p cnf 3 1\n1 2 0\n", 3)
    text = "p cnf 5 4\n1 2 3 0\n1 4 5 0\n1 2 4 0\n1 3 5 0\n"
    with pytest.raises(ParseError):
        parse_one_in_k_cnf(text, 3)
    with pytest.raises(ParseError):
        parse_one_in_k_cnf("p cnf 3 1\n1 -2 3 0\n", 3)
    with pytest.raises(ParseError):
        parse_one_in_k_cnf("p cnf 3 1\n1 1 3 0\n", 3)
    with pytest.raises(ParseError):
        parse_one_in_k_cnf("p cnf 3 2\n1 2 3 0\n", 3)


def test_certificate_round_trip_and_verify():
    p6 = make_named("path", 6)
    cert = Certificate("PMC", True, colouring_from_str("RBBRRB"), ((0, 1), (2, 3), (4, 5)))
    text = format_certificate(cert)
    assert parse_certificate(text, p6) == cert
    no = Certificate("MC", False)
    assert format_certificate(no) == "s MC NO\n"
    assert parse_certificate("s MC NO\n") == no


def test_certificate_tamper_rejected():
    p6 = make_named("path", 6)
    text = format_certificate(solve("PMC", p6))
    lines = text.splitlines()
    idx = next(k for k, line in enumerate(lines) if line.startswith("v 3 "))
    lines[idx] = "v 3 " + ("R" if lines[idx].endswith("B") else "B")
    with pytest.raises(VerificationError):
        parse_certificate("\n".join(lines), p6)


@pytest.mark.parametrize(
    "text",
    [
        "v 1 R\n",
        "s MC YES\nv 1 R\nv 3 B\n",
        "s MC YES\nv 1 G\n",
        "s XX YES\n",
        "s MC NO\nv 1 R\n",
        "s MC YES\nv 1 R\nv 1 B\n",
        "s MC YES\ns MC YES\n",
    ],
)
def test_certificate_parse_errors(text):
    with pytest.raises(ParseError):
        parse_certificate(text)


def test_certificate_wrong_size_or_edge():
    p3 = make_named("path", 3)
    with pytest.raises(ParseError):
        parse_certificate("s MC YES\nv 1 R\nv 2 B\n", p3)
    with pytest.raises(VerificationError):
        parse_certificate("s MC YES\nv 1 R\nv 2 B\nv 3 B\nm 1 3\n", p3)


def test_catalog_text_round_trip():
    cat = Catalog.default()
    entries = [(e.name, e.graph, e.certificate) for e in cat]
    assert parse_catalog(format_catalog(entries)) == entries
    with pytest.raises(ParseError):
        parse_catalog("k exhaustive 3\n")
