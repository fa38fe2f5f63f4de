"""Gadget graphs used by the hardness reductions.

Each builder returns the graph together with a :class:`ReductionTrace`, so the
reductions can map colourings and matchings in and out of the gadget.

Vertex numbering is fixed and documented per builder; tests and the CLI rely
on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Sequence

from .colouring import BLUE, RED
from .errors import PreconditionError, ProviderError, VerificationError
from .graph import Edge, Graph, GraphBuilder, girth
from .immunity import Catalog, ImmuneGraph, ProviderRequest, find_immune
from .matching import has_perfect_matching, is_perfect_matching
from .solvers import DEFAULT_BUDGET, solve_mc
from .trace import ReductionTrace, Role


# ---------------------------------------------------------------------------
# edge replacement gadgets


@dataclass(frozen=True)
class EdgeGadget:
    """A gadget replacing one edge ``uv``; ``u`` and ``v`` are vertices 0 and 1."""

    graph: Graph
    u: int
    v: int
    trace: ReductionTrace
    i: int


def build_T(i: int) -> EdgeGadget:
    """Two squared-path strips joined by two crossing edges.

    Numbering: ``u = 0``, ``v = 1``, ``u_j = 1 + j`` and ``v_j = 1 + 2i + j``
    for ``j = 1..2i``.
    """
    if i < 1:
        raise PreconditionError("T gadget needs i >= 1")
    b = GraphBuilder(2 + 4 * i)
    roles = [Role("original", (0,)), Role("original", (1,))]
    ustrip = [0] + [1 + j for j in range(1, 2 * i + 1)]
    vstrip = [1] + [1 + 2 * i + j for j in range(1, 2 * i + 1)]
    roles += [Role("strip-u", (), (j,)) for j in range(1, 2 * i + 1)]
    roles += [Role("strip-v", (), (j,)) for j in range(1, 2 * i + 1)]
    for strip in (ustrip, vstrip):
        for j in range(2 * i):
            b.add_edge(strip[j], strip[j + 1])
            if j + 2 <= 2 * i:
                b.add_edge(strip[j], strip[j + 2])
    b.add_edge(0, vstrip[-1])
    b.add_edge(1, ustrip[-1])
    trace = ReductionTrace(roles, {"u_strip": ustrip, "v_strip": vstrip})
    return EdgeGadget(b.build(), 0, 1, trace, i)


def T_cut_edges(gadget: EdgeGadget) -> tuple[Edge, Edge]:
    """The two edges cut when ``u`` and ``v`` get different colours."""
    us, vs = gadget.trace.meta["u_strip"], gadget.trace.meta["v_strip"]
    return tuple(sorted((tuple(sorted((gadget.u, vs[-1]))), tuple(sorted((gadget.v, us[-1]))))))  # type: ignore[return-value]


def colour_T(gadget: EdgeGadget, cu: int, cv: int) -> dict[int, int]:
    """Colours of all gadget vertices given the colours of ``u`` and ``v``."""
    out = {v: cu for v in gadget.trace.meta["u_strip"]}
    out.update({v: cv for v in gadget.trace.meta["v_strip"]})
    return out


def build_G(i: int) -> EdgeGadget:
    """A ladder of diamonds between the columns ``(u, u')`` and ``(v', v)``.

    Numbering: ``u = 0``, ``v = 1``, ``u' = 2``, column ``k = 1..i+1`` has top
    ``2k + 1`` and bottom ``2k + 2``, and ``v' = 2i + 5``.  Consecutive columns
    from column 1 to ``(v', v)`` are joined by a diamond (top-top,
    bottom-bottom, bottom-top); columns 0 and 1 by the two parallel edges only.
    """
    if i < 1:
        raise PreconditionError("G gadget needs i >= 1")
    u, v, u2 = 0, 1, 2
    tops = [u] + [2 * k + 1 for k in range(1, i + 2)] + [2 * i + 5]
    bots = [u2] + [2 * k + 2 for k in range(1, i + 2)] + [v]
    n = 2 * i + 6
    roles = [Role("original", (0,)), Role("original", (1,)), Role("column-bottom", (), (0,))]
    roles += [None] * (n - 3)  # type: ignore[list-item]
    for k in range(1, i + 2):
        roles[tops[k]] = Role("column-top", (), (k,))
        roles[bots[k]] = Role("column-bottom", (), (k,))
    roles[tops[-1]] = Role("column-top", (), (i + 2,))
    b = GraphBuilder(n)
    for k in range(i + 3):
        b.add_edge(tops[k], bots[k])
    b.add_edge(tops[0], tops[1])
    b.add_edge(bots[0], bots[1])
    for k in range(1, i + 2):
        b.add_edge(tops[k], tops[k + 1])
        b.add_edge(bots[k], bots[k + 1])
        b.add_edge(bots[k], tops[k + 1])
    trace = ReductionTrace(roles, {"tops": tops, "bottoms": bots, "u_prime": u2, "v_prime": tops[-1]})
    return EdgeGadget(b.build(), u, v, trace, i)


SAME_MATCHED = "same-matched"
SAME_UNMATCHED = "same-unmatched"
BICHROMATIC = "bichromatic"


def G_schema(gadget: EdgeGadget, case: str) -> list[Edge]:
    """The matching installed inside the G gadget for one of the three cases.

    ``same-matched`` covers every gadget vertex, ``same-unmatched`` every
    vertex except ``u`` and ``v``, ``bichromatic`` every vertex, with ``u`` and
    ``u'`` matched into column 1.
    """
    tops, bots = gadget.trace.meta["tops"], gadget.trace.meta["bottoms"]
    i = gadget.i
    last = i + 2
    if case == SAME_MATCHED:
        m = [(tops[k], bots[k]) for k in range(last + 1)]
    elif case == SAME_UNMATCHED:
        # zig-zag u', B1, T1, T2, B2, B3, T3, ... ending at v'
        walk = [bots[0]]
        for k in range(1, last):
            walk += [bots[k], tops[k]] if k % 2 else [tops[k], bots[k]]
        walk.append(tops[last])
        m = [(walk[j], walk[j + 1]) for j in range(0, len(walk), 2)]
    elif case == BICHROMATIC:
        m = [(tops[0], tops[1]), (bots[0], bots[1])]
        m += [(tops[k], bots[k]) for k in range(2, last + 1)]
    else:
        raise ValueError(f"unknown case {case!r}")
    return sorted(tuple(sorted(e)) for e in m)


def colour_G(gadget: EdgeGadget, cu: int, cv: int) -> dict[int, int]:
    """Monochromatic if ``cu == cv``; otherwise only ``u`` and ``u'`` take ``cu``."""
    out = {w: cv for w in range(gadget.graph.n)}
    out[gadget.u] = cu
    out[gadget.trace.meta["u_prime"]] = cu
    return out


def round_up_odd(i: int) -> int:
    return i if i % 2 else i + 1


# ---------------------------------------------------------------------------
# perfect-matching gadgets H'(s,t) and H(s,t)


@dataclass(frozen=True)
class MatchedGadget:
    """An immune gadget with perfect matchings of itself and of itself minus ``{s, t}``."""

    graph: Graph
    s: int
    t: int
    pm_full: tuple[Edge, ...]
    pm_minus: tuple[Edge, ...]
    copies: int = 1
    parts: dict = field(default_factory=dict, compare=False)


def build_Hprime(
    base: Graph,
    s: int,
    t: int,
    m: Sequence[Edge],
    g: int,
    check_immune: bool = True,
    budget: int | None = DEFAULT_BUDGET,
) -> MatchedGadget:
    """Add the edge between the matching partners of ``s`` and ``t``.

    Requires ``base`` immune with girth at least ``g``, ``dist(s, t) >= g + 1``
    and ``m`` a perfect matching of ``base``.
    """
    if g < 3:
        raise PreconditionError("target girth must be at least 3")
    m = [tuple(sorted(e)) for e in m]
    if not is_perfect_matching(base, m):
        raise PreconditionError("m is not a perfect matching of the base graph")
    if girth(base) < g:
        raise PreconditionError(f"base girth {girth(base)} is below {g}")
    d = base.distance(s, t)
    if d < g + 1:
        raise PreconditionError(f"dist(s, t) = {d} is below {g + 1}")
    if check_immune and solve_mc(base, budget).answer:
        raise PreconditionError("base graph has a matching cut")
    partner = {}
    for a, b in m:
        partner[a], partner[b] = b, a
    x, y = partner[s], partner[t]
    if base.distance(x, y) < g - 1:
        raise PreconditionError("partners of s and t are closer than g - 1")
    h = base.with_edges([(x, y)])
    xy = tuple(sorted((x, y)))
    minus = [e for e in m if s not in e and t not in e] + [xy]
    return MatchedGadget(h, s, t, tuple(sorted(m)), tuple(sorted(minus)), 1, {"x": x, "y": y})


def chain_length(g: int) -> int:
    k = ceil(g / 6)
    return k if k % 2 else k + 1


def hprime_request(g: int, **overrides) -> ProviderRequest:
    fields = dict(min_girth=g, needs_perfect_matching=True, designated_distance=g + 1)
    fields.update(overrides)
    return ProviderRequest(**fields)


def build_H(
    g: int,
    request: ProviderRequest | None = None,
    catalog: Catalog | None = None,
    base: ImmuneGraph | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> MatchedGadget:
    """Chain ``k`` copies of ``H'(s, t)``, ``t`` of each copy glued to ``s`` of the next.

    ``k`` is the smallest odd integer ``>= ceil(g/6)``, rounded as
    ``ceil(g/6) + 1`` when that ceiling is even.  Perfect matchings alternate
    between the full matching and the matching that avoids ``{s, t}``.
    """
    if g < 3:
        raise PreconditionError("H gadget needs g >= 3")
    if base is None:
        req = request or hprime_request(g)
        base = find_immune(req, catalog)
        if base is None:
            raise ProviderError(f"no immune base graph found for girth {g}")
    pm = has_perfect_matching(base.graph)
    if not pm.exists:
        raise PreconditionError("immune base graph has no perfect matching")
    unit = build_Hprime(base.graph, base.s, base.t, pm.matching, g, budget=budget)
    k = chain_length(g)
    b = GraphBuilder()
    full: list[Edge] = []
    minus: list[Edge] = []
    start = end = -1
    for c in range(k):
        mp = b.add_copy(unit.graph, identify=None if c == 0 else {unit.s: end})
        if c == 0:
            start = mp[unit.s]
        end = mp[unit.t]
        # odd copies in 1-based counting take the full matching in H
        pick_full, pick_minus = (unit.pm_full, unit.pm_minus) if c % 2 == 0 else (unit.pm_minus, unit.pm_full)
        full += [tuple(sorted((mp[a], mp[bb]))) for a, bb in pick_full]
        minus += [tuple(sorted((mp[a], mp[bb]))) for a, bb in pick_minus]
    h = b.build()
    gadget = MatchedGadget(h, start, end, tuple(sorted(full)), tuple(sorted(minus)), k, {"base": base, "unit": unit})
    verify_H(gadget, g, budget)
    return gadget


def verify_H(gadget: MatchedGadget, g: int, budget: int | None = DEFAULT_BUDGET) -> None:
    """Check immunity, girth and both matching witnesses; raise on failure."""
    h = gadget.graph
    if girth(h) < g:
        raise VerificationError(f"H has girth {girth(h)} < {g}")
    if not is_perfect_matching(h, gadget.pm_full):
        raise VerificationError("full witness is not a perfect matching of H")
    rest, back = h.without([gadget.s, gadget.t])
    fwd = {v: j for j, v in enumerate(back)}
    if any(gadget.s in e or gadget.t in e for e in gadget.pm_minus):
        raise VerificationError("reduced witness touches s or t")
    if not is_perfect_matching(rest, [(fwd[a], fwd[b]) for a, b in gadget.pm_minus]):
        raise VerificationError("reduced witness is not a perfect matching of H - {s, t}")
    if solve_mc(h, budget).answer:
        raise VerificationError("H has a matching cut")


# ---------------------------------------------------------------------------
# 1-in-g SAT gadgets


def cycle_length(g: int) -> int:
    """Smallest multiple of 4 that is at least ``g``."""
    return 4 * ceil(g / 4)


class Assembly:
    """Graph builder that records a role for every vertex it creates."""

    def __init__(self) -> None:
        self.b = GraphBuilder()
        self.trace = ReductionTrace()
        self.copies = 0

    def vertex(self, role: Role) -> int:
        v = self.b.add_vertex()
        self.trace.set(v, role)
        return v

    def edge(self, u: int, v: int) -> None:
        self.b.add_edge(u, v)

    def attach_immune(self, immune: ImmuneGraph, anchor: int, port_role: Role | None, port: int | None = None) -> int:
        """Glue a fresh copy of ``immune`` with ``s`` on ``anchor``.

        Its ``t`` becomes a new vertex with ``port_role``, or is glued onto
        ``port`` when given.  Returns the ``t`` vertex.
        """
        cid = self.copies
        self.copies += 1
        ident = {immune.s: anchor}
        if port is not None:
            ident[immune.t] = port
        mapping = []
        for a in range(immune.graph.n):
            if a in ident:
                mapping.append(ident[a])
            elif a == immune.t:
                assert port_role is not None
                mapping.append(self.vertex(port_role))
            else:
                mapping.append(self.vertex(Role("immune-internal", (cid,), (a,))))
        for a, c in immune.graph.edge_list():
            self.edge(mapping[a], mapping[c])
        self.trace.meta.setdefault("immune_copies", []).append(mapping)
        self.trace.meta.setdefault("copy_anchor", []).append(anchor)
        return mapping[immune.t]

    def build(self) -> tuple[Graph, ReductionTrace]:
        g = self.b.build()
        self.trace.validate(g.n)
        return g, self.trace


V_SIDE = 0
U_SIDE = 1


def build_variable_chain(
    n_vars: int, ell: int, g: int, immune: ImmuneGraph, assembly: Assembly | None = None
) -> tuple[Graph, ReductionTrace]:
    """Variable gadgets for ``x_1..x_n`` joined consecutively by ``ell``-cycles.

    Each variable ``x`` has hubs ``v_x`` (side 0) and ``u_x`` (side 1); each hub
    carries ``ell/2`` cycle ports and ``g`` clause ports, every port hanging
    off its hub through its own copy of ``immune``.  ``trace.meta`` holds
    ``hubs[x][side]``, ``cycle_ports[x][side][j-1]`` and
    ``clause_ports[x][side][j-1]`` (variables 1-based, ``hubs[0]`` unused).
    """
    if n_vars < 1:
        raise PreconditionError("need at least one variable")
    if ell % 4 or ell < 4:
        raise PreconditionError(f"cycle length {ell} is not a positive multiple of 4")
    if ell < g:
        raise PreconditionError(f"cycle length {ell} is below girth {g}")
    asm = assembly or Assembly()
    hubs: list[list[int]] = [[]]
    cports: list[list[list[int]]] = [[]]
    qports: list[list[list[int]]] = [[]]
    for x in range(1, n_vars + 1):
        hs, cs, qs = [], [], []
        for side in (V_SIDE, U_SIDE):
            hub = asm.vertex(Role("hub", (x,), (side,)))
            hs.append(hub)
            cs.append([asm.attach_immune(immune, hub, Role("cycle-port", (x,), (side, j))) for j in range(1, ell // 2 + 1)])
            qs.append([asm.attach_immune(immune, hub, Role("clause-port", (x,), (side, j))) for j in range(1, g + 1)])
        hubs.append(hs)
        cports.append(cs)
        qports.append(qs)
    links = []
    q = ell // 4
    for x in range(1, n_vars):
        A = [cports[x][V_SIDE][j + q - 1] for j in range(1, q + 1)]
        B = [cports[x][U_SIDE][j + q - 1] for j in range(1, q + 1)]
        C = [cports[x + 1][V_SIDE][j - 1] for j in range(1, q + 1)]
        D = [cports[x + 1][U_SIDE][j - 1] for j in range(1, q + 1)]
        cyc = []
        for j in range(q):
            cyc += [A[j], C[j], B[j], D[j]]
        for a, c in zip(cyc, cyc[1:] + cyc[:1]):
            asm.edge(a, c)
        links.append(cyc)
    asm.trace.meta.update(
        {"hubs": hubs, "cycle_ports": cports, "clause_ports": qports, "links": links, "ell": ell, "g": g}
    )
    if assembly is not None:
        return asm.b.build(), asm.trace
    return asm.build()


@dataclass(frozen=True)
class ClauseGadget:
    """Vertices of one clause gadget; lists are indexed by position ``k - 1``."""

    clause: int
    v_clause: int
    u_clause: tuple[int, ...]
    a: tuple[int, ...]
    b: tuple[int, ...]
    v_ports: tuple[int, ...]
    u_ports: tuple[int, ...]

    @property
    def g(self) -> int:
        return len(self.a)

    @property
    def chord(self) -> tuple[int, int]:
        return self.a[0], self.b[self.g // 2 - 1]

    def aux_cycle(self) -> list[int]:
        """The 4g-cycle ``a_1 q_1 b_1 u^2 a_2 q_2 ... b_g u^1``."""
        out = []
        for k in range(self.g):
            out += [self.a[k], self.u_ports[k], self.b[k], self.u_clause[(k + 1) % self.g]]
        return out


def build_clause_gadget(
    g: int, v_ports: Sequence[int], u_ports: Sequence[int], asm: Assembly, clause: int = 0
) -> ClauseGadget:
    """Clause vertices and auxiliary vertices wired to the chosen ports.

    ``v_clause`` is joined to every v-port; ``a_k`` and ``b_k`` to the u-port at
    position ``k``; ``a_k`` to ``u^k`` and ``b_k`` to ``u^{k+1}`` (cyclically);
    plus the chord ``a_1 b_{floor(g/2)}``.
    """
    if g < 3:
        raise PreconditionError("clause gadget needs g >= 3")
    if len(v_ports) != g or len(u_ports) != g:
        raise PreconditionError(f"clause gadget needs {g} v-ports and {g} u-ports")
    vc = asm.vertex(Role("clause-vertex", (clause,), (0,)))
    uc = [asm.vertex(Role("clause-vertex", (clause,), (k,))) for k in range(1, g + 1)]
    a = [asm.vertex(Role("aux-a", (clause,), (k,))) for k in range(1, g + 1)]
    b = [asm.vertex(Role("aux-b", (clause,), (k,))) for k in range(1, g + 1)]
    for k in range(g):
        asm.edge(vc, v_ports[k])
        asm.edge(a[k], u_ports[k])
        asm.edge(b[k], u_ports[k])
        asm.edge(a[k], uc[k])
        asm.edge(b[k], uc[(k + 1) % g])
    asm.edge(a[0], b[g // 2 - 1])
    return ClauseGadget(clause, vc, tuple(uc), tuple(a), tuple(b), tuple(v_ports), tuple(u_ports))


def colour_clause_aux(gadget: ClauseGadget, k: int) -> dict[int, int]:
    """Colours of ``a_1..a_g, b_1..b_g`` when position ``k`` (1-based) holds the true literal.

    ``a_k`` and ``b_k`` are blue.  Walking backwards round the cyclic order
    ``a_1 b_1 a_2 b_2 ... a_g b_g`` from ``b_{k-1}`` the colours alternate red,
    blue, ...; the second chord end copies the colour of the first one and
    the alternation restarts after it.
    """
    g = gadget.g
    if not 1 <= k <= g:
        raise PreconditionError(f"true position {k} outside 1..{g}")
    order = [w for j in range(g) for w in (gadget.a[j], gadget.b[j])]
    chord = set(gadget.chord)
    col = {gadget.a[k - 1]: BLUE, gadget.b[k - 1]: BLUE}
    first_chord = next((col[w] for w in chord if w in col), None)
    pos = order.index(gadget.a[k - 1])
    nxt = RED
    for step in range(1, 2 * g - 1):
        w = order[(pos - step) % (2 * g)]
        if w in chord:
            if first_chord is None:
                first_chord = nxt
                col[w] = nxt
            else:
                col[w] = first_chord
        else:
            col[w] = nxt
        nxt = 1 - col[w]
    return col

