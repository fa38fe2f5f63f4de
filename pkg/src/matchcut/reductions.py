"""The four reduction pipelines and their witness transports.

* 1-in-g SAT to Matching Cut with girth at least ``g``;
* Matching Cut to Disconnected Perfect Matching with girth at least ``g``;
* edge replacement by T or G gadgets, giving ``(H_1*, ..., H_i*)``-free
  instances of Matching Cut or Disconnected Perfect Matching;
* 4-subdivision of every edge for Perfect Matching Cut.

Every reduction returns a :class:`Reduction` whose trace carries the source
instance, so the transport functions need nothing but the trace and a witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .colouring import BLUE, RED, ColouringClass, classify, cut_edges, swap
from .errors import InvalidColouring, PreconditionError, ProviderError, VerificationError
from .gadgets import (
    BICHROMATIC,
    SAME_MATCHED,
    SAME_UNMATCHED,
    U_SIDE,
    V_SIDE,
    Assembly,
    EdgeGadget,
    G_schema,
    MatchedGadget,
    build_clause_gadget,
    build_G,
    build_H,
    build_T,
    build_variable_chain,
    colour_clause_aux,
    colour_G,
    colour_T,
    cycle_length,
    round_up_odd,
)
from .graph import Edge, Graph, GraphBuilder, girth, is_hstar_free, subdivide
from .immunity import Catalog, ImmuneGraph, ProviderRequest, find_immune
from .matching import is_perfect_matching
from .solvers import Certificate, Formula
from .trace import ReductionTrace, Role


@dataclass(frozen=True)
class ReductionParams:
    g: int = 3
    i: int = 1
    t: int = 1

    def __post_init__(self) -> None:
        if self.g < 3:
            raise ValueError("g must be at least 3")
        if self.i < 1:
            raise ValueError("i must be at least 1")
        if self.t < 0:
            raise ValueError("t must be non-negative")

    @property
    def ell(self) -> int:
        return cycle_length(self.g)


class Reduction(NamedTuple):
    graph: Graph
    trace: ReductionTrace


def _check_connected(g: Graph) -> None:
    if not g.is_connected():
        raise PreconditionError("source graph must be connected")


def _require_class(g: Graph, col: Sequence[int], need: ColouringClass, what: str) -> None:
    rep = classify(g, col)
    if rep.cls < need:
        raise InvalidColouring(f"{what} colouring classifies as {rep.cls.name}, needs {need.name}")


# ---------------------------------------------------------------------------
# 1-in-g SAT to Matching Cut


def sat_provider_request(g: int, seed: int = 0) -> ProviderRequest:
    return ProviderRequest(min_girth=g, designated_distance=g // 2, seed=seed)


def reduce_sat_to_mc(
    f: Formula, immune: ImmuneGraph | None = None, catalog: Catalog | None = None, seed: int = 0
) -> Reduction:
    """Matching Cut instance of girth at least ``g = f.k`` equivalent to ``f``.

    Clause ``j`` uses, for its literal ``x`` at position ``p``, the clause
    ports numbered by the occurrence ordinal of that literal.
    """
    g = f.k
    if g < 3:
        raise PreconditionError("clause width must be at least 3")
    if immune is None:
        immune = find_immune(sat_provider_request(g, seed), catalog)
        if immune is None:
            raise ProviderError(f"no immune graph of girth {g} available")
    if girth(immune.graph) < g or immune.graph.distance(immune.s, immune.t) < g // 2:
        raise PreconditionError("immune graph violates the girth or distance requirement")
    ell = cycle_length(g)
    asm = Assembly()
    build_variable_chain(f.num_vars, ell, g, immune, asm)
    qports = asm.trace.meta["clause_ports"]
    gadgets = []
    for j, clause in enumerate(f.clauses):
        vp = [qports[x][V_SIDE][f.occurrence[(j, p)] - 1] for p, x in enumerate(clause)]
        up = [qports[x][U_SIDE][f.occurrence[(j, p)] - 1] for p, x in enumerate(clause)]
        gadgets.append(build_clause_gadget(g, vp, up, asm, clause=j))
    star = asm.vertex(Role("star-vertex"))
    for cg in gadgets:
        for w in (cg.v_clause, *cg.u_clause):
            asm.attach_immune(immune, star, None, port=w)
    graph, trace = asm.build()
    if not graph.is_connected():
        raise VerificationError("reduction output is disconnected")
    gr = girth(graph)
    if gr < g:
        raise VerificationError(f"reduction output has girth {gr} < {g}")
    trace.meta.update({"formula": f, "clause_gadgets": gadgets, "star": star, "graph": graph, "immune": immune})
    return Reduction(graph, trace)


def pull_back_sat(trace: ReductionTrace, colouring: Sequence[int]) -> tuple[bool, ...]:
    """Assignment read off a valid colouring: ``x`` is true iff ``v_x`` has the
    colour opposite to the star vertex."""
    g: Graph = trace.meta["graph"]
    f: Formula = trace.meta["formula"]
    _require_class(g, colouring, ColouringClass.VALID_ONLY, "SAT reduction")
    col = tuple(colouring)
    if col[trace.meta["star"]] == RED:
        col = swap(col)
    hubs = trace.meta["hubs"]
    assignment = tuple(col[hubs[x][V_SIDE]] == RED for x in range(1, f.num_vars + 1))
    if not f.satisfied_by(assignment):
        raise VerificationError("pulled-back assignment does not satisfy the formula")
    return assignment


def push_forward_sat(trace: ReductionTrace, assignment: Sequence[bool]) -> tuple[int, ...]:
    """Valid colouring built from a 1-in-g satisfying assignment.

    ``V_x`` is red and ``U_x`` blue when ``x`` is true, the other way round
    otherwise; everything around the star vertex is blue.
    """
    g: Graph = trace.meta["graph"]
    f: Formula = trace.meta["formula"]
    assignment = tuple(bool(a) for a in assignment)
    if not f.satisfied_by(assignment):
        raise PreconditionError("assignment does not set exactly one literal per clause")
    col = [BLUE] * g.n
    for v, r in enumerate(trace.roles):
        if r.kind in ("hub", "cycle-port", "clause-port"):
            x, side = r.origin[0], r.index[0]
            true = assignment[x - 1]
            col[v] = RED if true == (side == V_SIDE) else BLUE
    anchors = trace.meta["copy_anchor"]
    for v, r in enumerate(trace.roles):
        if r.kind == "immune-internal":
            col[v] = col[anchors[r.origin[0]]]
    for cg, clause in zip(trace.meta["clause_gadgets"], f.clauses):
        k = next(p for p, x in enumerate(clause, 1) if assignment[x - 1])
        for w, c in colour_clause_aux(cg, k).items():
            col[w] = c
    out = tuple(col)
    rep = classify(g, out)
    if not rep.valid:
        raise VerificationError(f"pushed-forward colouring is invalid ({rep.reason} at {rep.witness})")
    return out


# ---------------------------------------------------------------------------
# Matching Cut to Disconnected Perfect Matching


def reduce_mc_to_dpm(
    gprime: Graph,
    g: int = 3,
    gadget: MatchedGadget | None = None,
    request: ProviderRequest | None = None,
    catalog: Catalog | None = None,
) -> Reduction:
    """Two copies of ``gprime`` with every vertex joined to its twin by ``H(v, v')``.

    Layout: copy 1 is ``0..n-1``, copy 2 is ``n..2n-1`` (roles ``original``
    with ``index`` 1 and 2), then the interiors of the ``n`` gadgets in vertex
    order.
    """
    _check_connected(gprime)
    if gadget is None:
        gadget = build_H(g, request=request, catalog=catalog)
    n = gprime.n
    b = GraphBuilder(2 * n)
    roles = [Role("original", (v,), (1,)) for v in range(n)] + [Role("original", (v,), (2,)) for v in range(n)]
    for u, v in gprime.edge_list():
        b.add_edge(u, v)
        b.add_edge(n + u, n + v)
    maps = []
    for v in range(n):
        start = b.n
        mp = b.add_copy(gadget.graph, identify={gadget.s: v, gadget.t: n + v})
        roles += [Role("immune-internal", (v,), (a,)) for a in range(gadget.graph.n) if a not in (gadget.s, gadget.t)]
        assert b.n - start == gadget.graph.n - 2
        maps.append(mp)
    graph = b.build()
    trace = ReductionTrace(roles, {"source": gprime, "graph": graph, "gadget": gadget, "maps": maps, "g": g})
    trace.validate(graph.n)
    gr = girth(graph)
    if gr < g:
        raise VerificationError(f"reduction output has girth {gr} < {g}")
    return Reduction(graph, trace)


def push_forward_mc_to_dpm(trace: ReductionTrace, colouring: Sequence[int]) -> Certificate:
    """DPM certificate from a valid colouring of the source graph."""
    src: Graph = trace.meta["source"]
    graph: Graph = trace.meta["graph"]
    gadget: MatchedGadget = trace.meta["gadget"]
    cut = cut_edges(src, colouring)
    n = src.n
    col = [0] * graph.n
    for v in range(n):
        for a in range(gadget.graph.n):
            col[trace.meta["maps"][v][a]] = colouring[v]
    matched = {x for e in cut for x in e}
    pm = [e for u, v in cut for e in ((u, v), (n + u, n + v))]
    for v in range(n):
        mp = trace.meta["maps"][v]
        inside = gadget.pm_minus if v in matched else gadget.pm_full
        pm += [tuple(sorted((mp[a], mp[c]))) for a, c in inside]
    pm = sorted(tuple(sorted(e)) for e in pm)
    cert = Certificate("DPM", True, tuple(col), tuple(pm))
    if not is_perfect_matching(graph, pm):
        raise VerificationError("pushed-forward matching is not perfect")
    _require_class(graph, cert.colouring, ColouringClass.PERFECT_EXTENDABLE, "pushed-forward")
    return cert


def pull_back_dpm_to_mc(trace: ReductionTrace, colouring: Sequence[int]) -> tuple[int, ...]:
    """Valid colouring of the source: the colours of the first copy."""
    graph: Graph = trace.meta["graph"]
    src: Graph = trace.meta["source"]
    _require_class(graph, colouring, ColouringClass.VALID_ONLY, "DPM reduction")
    out = tuple(colouring[v] for v in range(src.n))
    _require_class(src, out, ColouringClass.VALID_ONLY, "pulled-back")
    return out


# ---------------------------------------------------------------------------
# edge replacement


def _replace_edges(g0: Graph, gadget: EdgeGadget) -> Reduction:
    _check_connected(g0)
    b = GraphBuilder(g0.n)
    roles = [Role("original", (v,)) for v in range(g0.n)]
    maps: dict[Edge, list[int]] = {}
    for u, v in g0.edge_list():
        mp = b.add_copy(gadget.graph, identify={gadget.u: u, gadget.v: v})
        for a in range(gadget.graph.n):
            if a in (gadget.u, gadget.v):
                continue
            r = gadget.trace.role(a)
            roles.append(Role(r.kind, (u, v), r.index))
        maps[(u, v)] = mp
    graph = b.build()
    trace = ReductionTrace(roles, {"source": g0, "graph": graph, "gadget": gadget, "maps": maps})
    trace.validate(graph.n)
    return Reduction(graph, trace)


def reduce_mc_hstarfree(g0: Graph, i: int, verify: bool = False) -> Reduction:
    """Replace every edge ``uv`` (``u < v``) by a T gadget with index ``i``."""
    red = _replace_edges(g0, build_T(i))
    red.trace.meta.update({"i": i, "problem": "MC"})
    if verify and not is_hstar_free(red.graph, i).free:
        raise VerificationError("T-gadget output contains an induced H*")
    return red


def push_forward_hstar_mc(trace: ReductionTrace, colouring: Sequence[int]) -> tuple[int, ...]:
    g0: Graph = trace.meta["source"]
    graph: Graph = trace.meta["graph"]
    _require_class(g0, colouring, ColouringClass.VALID_ONLY, "source")
    gadget: EdgeGadget = trace.meta["gadget"]
    col = [0] * graph.n
    for (u, v), mp in trace.meta["maps"].items():
        for a, c in colour_T(gadget, colouring[u], colouring[v]).items():
            col[mp[a]] = c
    out = tuple(col)
    _require_class(graph, out, ColouringClass.VALID_ONLY, "pushed-forward")
    return out


def pull_back_hstar_mc(trace: ReductionTrace, colouring: Sequence[int]) -> tuple[tuple[int, ...], list[Edge]]:
    """Colouring of the source and its cut ``{uv : c(u) != c(v)}``."""
    g0: Graph = trace.meta["source"]
    _require_class(trace.meta["graph"], colouring, ColouringClass.VALID_ONLY, "reduced")
    out = tuple(colouring[v] for v in range(g0.n))
    _require_class(g0, out, ColouringClass.VALID_ONLY, "pulled-back")
    return out, [(u, v) for u, v in g0.edge_list() if out[u] != out[v]]


def reduce_dpm_hstarfree(g0: Graph, i: int, verify: bool = False) -> Reduction:
    """Replace every edge ``uv`` (``u < v``) by a G gadget; ``i`` is rounded up to odd."""
    j = round_up_odd(i)
    red = _replace_edges(g0, build_G(j))
    red.trace.meta.update({"i": i, "gadget_i": j, "problem": "DPM"})
    if verify and not is_hstar_free(red.graph, i).free:
        raise VerificationError("G-gadget output contains an induced H*")
    return red


def push_forward_hstar_dpm(trace: ReductionTrace, cert: Certificate) -> Certificate:
    """DPM certificate of the reduced graph from one of the source graph."""
    g0: Graph = trace.meta["source"]
    graph: Graph = trace.meta["graph"]
    gadget: EdgeGadget = trace.meta["gadget"]
    if cert.colouring is None or cert.matching is None:
        raise PreconditionError("need a YES certificate with colouring and matching")
    c = cert.colouring
    m = {tuple(sorted(e)) for e in cert.matching}
    if not is_perfect_matching(g0, m):
        raise InvalidColouring("source matching is not perfect")
    _require_class(g0, c, ColouringClass.VALID_ONLY, "source")
    col = [0] * graph.n
    pm: list[Edge] = []
    for (u, v), mp in trace.meta["maps"].items():
        if c[u] != c[v]:
            case = BICHROMATIC
        elif (u, v) in m:
            case = SAME_MATCHED
        else:
            case = SAME_UNMATCHED
        for a, x in colour_G(gadget, c[u], c[v]).items():
            col[mp[a]] = x
        pm += [tuple(sorted((mp[a], mp[b]))) for a, b in G_schema(gadget, case)]
    out = Certificate("DPM", True, tuple(col), tuple(sorted(pm)))
    if not is_perfect_matching(graph, pm):
        raise VerificationError("pushed-forward matching is not perfect")
    rep = classify(graph, out.colouring)
    if rep.cls < ColouringClass.PERFECT_EXTENDABLE or not set(rep.cut) <= set(pm):
        raise VerificationError("pushed-forward certificate fails verification")
    return out


def pull_back_hstar_dpm(trace: ReductionTrace, cert: Certificate) -> Certificate:
    """Source DPM: ``uv`` is matched iff its colours differ, or they agree and
    both ends are matched into the gadget of ``uv``."""
    g0: Graph = trace.meta["source"]
    graph: Graph = trace.meta["graph"]
    if cert.colouring is None or cert.matching is None:
        raise PreconditionError("need a YES certificate with colouring and matching")
    if not is_perfect_matching(graph, cert.matching):
        raise InvalidColouring("reduced matching is not perfect")
    partner = {}
    for a, b in cert.matching:
        partner[a], partner[b] = b, a
    c = tuple(cert.colouring[v] for v in range(g0.n))
    m = []
    for (u, v), mp in trace.meta["maps"].items():
        inside = set(mp) - {u, v}
        if c[u] != c[v] or (partner[u] in inside and partner[v] in inside):
            m.append((u, v))
    out = Certificate("DPM", True, c, tuple(sorted(m)))
    if not is_perfect_matching(g0, m):
        raise VerificationError("pulled-back matching is not perfect")
    rep = classify(g0, c)
    if rep.cls < ColouringClass.PERFECT_EXTENDABLE or not set(rep.cut) <= set(m):
        raise VerificationError("pulled-back certificate fails verification")
    return out


# ---------------------------------------------------------------------------
# subdivision for Perfect Matching Cut


def reduce_pmc_subdivide(g0: Graph, t: int) -> Reduction:
    """Every edge replaced by a path with ``4t`` internal vertices."""
    _check_connected(g0)
    if t < 1:
        raise PreconditionError("t must be at least 1")
    graph, trace = subdivide(g0, 4 * t)
    trace.meta.update({"source": g0, "graph": graph, "t": t})
    return Reduction(graph, trace)


FORWARD = "forward"
BACKWARD = "backward"


def transport_pmc(trace: ReductionTrace, direction: str, colouring: Sequence[int]) -> tuple[int, ...]:
    """Move a perfect colouring across the subdivision.

    Forward, a path from ``u`` (colour ``c``) to ``v`` is filled with blocks
    ``c, -c, -c, c`` when ``v`` also has colour ``c`` and ``-c, -c, c, c``
    otherwise.  Backward is restriction to the original vertices.
    """
    g0: Graph = trace.meta["source"]
    graph: Graph = trace.meta["graph"]
    if direction == FORWARD:
        _require_class(g0, colouring, ColouringClass.PERFECT, "source")
        col = list(colouring) + [0] * (graph.n - g0.n)
        for (u, v), path in trace.meta["paths"].items():
            c = colouring[u]
            block = (c, 1 - c, 1 - c, c) if colouring[v] == c else (1 - c, 1 - c, c, c)
            for pos, w in enumerate(path[1:-1]):
                col[w] = block[pos % 4]
        out = tuple(col)
        _require_class(graph, out, ColouringClass.PERFECT, "pushed-forward")
        return out
    if direction == BACKWARD:
        _require_class(graph, colouring, ColouringClass.PERFECT, "subdivided")
        out = tuple(colouring[v] for v in range(g0.n))
        _require_class(g0, out, ColouringClass.PERFECT, "pulled-back")
        return out
    raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
