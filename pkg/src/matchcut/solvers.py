"""Exact decision procedures for Matching Cut, Disconnected Perfect Matching
and Perfect Matching Cut, with certificates, plus the brute-force oracle and a
Restricted Positive 1-in-k SAT solver.

All three graph problems are searched as red-blue colourings.  The engine
colours vertices one at a time and propagates the local rules after every
assignment:

* a coloured vertex that already has an opposite-coloured neighbour forces all
  its other neighbours to its own colour;
* an uncoloured vertex with two neighbours of one colour must take that colour;
* for perfect colourings, a vertex without an opposite neighbour whose last
  free neighbour is the only candidate forces that neighbour to the other
  colour.

Triangles and immune blocks therefore collapse almost immediately, which keeps
the reduction outputs tractable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .colouring import BLUE, RED, ColouringClass, classify, cut_edges, leftover_sets
from .errors import BudgetExceeded, FormulaError, GraphError, VerificationError
from .graph import Edge, Graph
from .matching import exhaustive_perfect_matching, has_perfect_matching, is_perfect_matching

PROBLEMS = ("MC", "DPM", "PMC")
DEFAULT_BUDGET = 10_000_000
BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class Certificate:
    """Answer to one problem instance.

    For MC and PMC ``matching`` holds the cut edges; for DPM it is a full
    perfect matching of the graph containing the cut.
    """

    problem: str
    answer: bool
    colouring: tuple[int, ...] | None = None
    matching: tuple[Edge, ...] | None = None
    nodes: int = 0

    def __post_init__(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")

    def same_answer(self, other: Certificate) -> bool:
        return self.problem == other.problem and self.answer == other.answer


# ---------------------------------------------------------------------------
# search engine


class _ColourSearch:
    def __init__(self, g: Graph, perfect: bool, budget: int | None):
        self.g = g
        self.adj = g.adj
        self.deg = [len(a) for a in g.adj]
        self.perfect = perfect
        self.budget = budget
        self.col = [-1] * g.n
        self.cnt = ([0] * g.n, [0] * g.n)
        self.trail: list[int] = []
        self.queue: list[int] = []
        self.nodes = 0

    def _set(self, v: int, c: int) -> bool:
        cur = self.col[v]
        if cur != -1:
            return cur == c
        self.col[v] = c
        self.trail.append(v)
        cc = self.cnt[c]
        q = self.queue
        for w in self.adj[v]:
            cc[w] += 1
            q.append(w)
        q.append(v)
        return True

    def _check(self, x: int) -> bool:
        col = self.col
        cx = col[x]
        r = self.cnt[RED][x]
        b = self.cnt[BLUE][x]
        if cx == -1:
            if r >= 2 and b >= 2:
                return False
            if r >= 2:
                return self._set(x, RED)
            if b >= 2:
                return self._set(x, BLUE)
            return True
        opp = b if cx == RED else r
        if opp >= 2:
            return False
        if opp == 1:
            if r + b < self.deg[x]:
                for w in self.adj[x]:
                    if col[w] == -1:
                        self._set(w, cx)
            return True
        if self.perfect:
            free = self.deg[x] - r - b
            if free == 0:
                return False
            if free == 1:
                w = next(w for w in self.adj[x] if col[w] == -1)
                return self._set(w, 1 - cx)
        return True

    def assign(self, v: int, c: int) -> bool:
        """Assign and propagate; on failure the state must be undone by the caller."""
        self.queue.clear()
        if not self._set(v, c):
            return False
        q = self.queue
        while q:
            if not self._check(q.pop()):
                q.clear()
                return False
        return True

    def undo(self, mark: int) -> None:
        trail = self.trail
        col = self.col
        cnt = self.cnt
        adj = self.adj
        while len(trail) > mark:
            v = trail.pop()
            cc = cnt[col[v]]
            for w in adj[v]:
                cc[w] -= 1
            col[v] = -1

    def _pick(self) -> int:
        col = self.col
        r, b = self.cnt
        best = -1
        best_key = -1
        for v in range(self.g.n):
            if col[v] == -1:
                key = r[v] + b[v]
                if key > best_key:
                    best, best_key = v, key
        return best

    def solutions(self) -> Iterator[tuple[int, ...]]:
        """Every completion of the current partial colouring, depth first."""
        stack: list[list[int]] = []
        while True:
            v = self._pick()
            if v == -1:
                yield tuple(self.col)
            else:
                self.nodes += 1
                if self.budget is not None and self.nodes > self.budget:
                    raise BudgetExceeded(f"search exceeded {self.budget} nodes", self.nodes)
                first = BLUE if self.cnt[BLUE][v] > self.cnt[RED][v] else RED
                stack.append([v, len(self.trail), first, 0])
            while stack:
                top = stack[-1]
                self.undo(top[1])
                if top[3] == 2:
                    stack.pop()
                    continue
                c = top[2] if top[3] == 0 else 1 - top[2]
                top[3] += 1
                if self.assign(top[0], c):
                    break
            else:
                return


def _check_connected(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("input graph must be connected")


def _valid_colourings(g: Graph, budget: int | None, search: _ColourSearch | None = None) -> Iterator[tuple[int, ...]]:
    """All valid colourings with vertex 0 red, each exactly once.

    Colourings are grouped by their first blue vertex in BFS order from 0; the
    group for position k is searched with the BFS prefix red and that vertex
    blue.  The prefix is extended incrementally, so once it fails to propagate
    no later group can be non-empty.
    """
    s = search or _ColourSearch(g, perfect=False, budget=budget)
    if g.n < 2:
        return
    order = g.bfs_order(0)
    if not s.assign(order[0], RED):
        return
    for k in range(1, g.n):
        v = order[k]
        mark = len(s.trail)
        if s.assign(v, BLUE):
            yield from s.solutions()
        s.undo(mark)
        if not s.assign(v, RED):
            return


def solve_mc(g: Graph, budget: int | None = DEFAULT_BUDGET) -> Certificate:
    _check_connected(g)
    s = _ColourSearch(g, perfect=False, budget=budget)
    for col in _valid_colourings(g, budget, s):
        return Certificate("MC", True, col, tuple(cut_edges(g, col)), s.nodes)
    return Certificate("MC", False, nodes=s.nodes)


def perfect_extension(g: Graph, col: Sequence[int]) -> list[Edge] | None:
    """A perfect matching of ``g`` containing the cut of ``col``, if any."""
    red, blue = leftover_sets(g, col)
    if len(red) % 2 or len(blue) % 2:
        return None
    cut = [(u, v) for u, v in g.edges if col[u] != col[v]]
    out = list(cut)
    for side in (red, blue):
        h, back = g.induced(side)
        pm = has_perfect_matching(h)
        if not pm.exists:
            return None
        out.extend((back[a], back[b]) for a, b in pm.matching)
    return sorted(tuple(sorted(e)) for e in out)


def solve_dpm(g: Graph, budget: int | None = DEFAULT_BUDGET) -> Certificate:
    _check_connected(g)
    s = _ColourSearch(g, perfect=False, budget=budget)
    for col in _valid_colourings(g, budget, s):
        pm = perfect_extension(g, col)
        if pm is not None:
            return Certificate("DPM", True, col, tuple(pm), s.nodes)
    return Certificate("DPM", False, nodes=s.nodes)


def solve_pmc(g: Graph, budget: int | None = DEFAULT_BUDGET) -> Certificate:
    _check_connected(g)
    s = _ColourSearch(g, perfect=True, budget=budget)
    if g.n >= 2 and s.assign(0, RED):
        for col in s.solutions():
            return Certificate("PMC", True, col, tuple(cut_edges(g, col)), s.nodes)
    return Certificate("PMC", False, nodes=s.nodes)


SOLVERS = {"MC": solve_mc, "DPM": solve_dpm, "PMC": solve_pmc}


def solve(problem: str, g: Graph, budget: int | None = DEFAULT_BUDGET) -> Certificate:
    try:
        fn = SOLVERS[problem.upper()]
    except KeyError:
        raise ValueError(f"unknown problem {problem!r}") from None
    return fn(g, budget)


# ---------------------------------------------------------------------------
# brute force oracle


def _opposite_counts(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    masks = np.arange(1 << g.n, dtype=np.uint32)
    opp = np.zeros((max(g.n, 1), masks.size), dtype=np.uint8)
    for u, v in g.edges:
        x = (((masks >> u) ^ (masks >> v)) & 1).astype(np.uint8)
        opp[u] += x
        opp[v] += x
    return masks, opp


def brute_force_decide(problem: str, g: Graph, threshold: int = BRUTE_FORCE_LIMIT) -> Certificate:
    """Ground truth by enumerating all ``2^n`` colourings.

    Bit ``v`` of the enumeration index is the colour of vertex ``v``.  DPM
    extensions are checked with the exhaustive matcher, independent of the
    blossom code used by :func:`solve_dpm`.
    """
    problem = problem.upper()
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if g.n > threshold:
        raise GraphError(f"brute force limited to {threshold} vertices, got {g.n}")
    _check_connected(g)
    if g.n < 2:
        return Certificate(problem, False)
    masks, opp = _opposite_counts(g)
    full = (1 << g.n) - 1
    ok = (opp.max(axis=0) <= 1) & (masks != 0) & (masks != full)
    if problem == "PMC":
        ok &= opp.min(axis=0) == 1
    hits = masks[ok]

    def decode(mask: int) -> tuple[int, ...]:
        return tuple((mask >> v) & 1 for v in range(g.n))

    if problem in ("MC", "PMC"):
        if hits.size == 0:
            return Certificate(problem, False)
        col = decode(int(hits[0]))
        return Certificate(problem, True, col, tuple(cut_edges(g, col)))
    for mask in hits:
        col = decode(int(mask))
        red, blue = leftover_sets(g, col)
        if len(red) % 2 or len(blue) % 2:
            continue
        pr = exhaustive_perfect_matching(g, red)
        if pr is None:
            continue
        pb = exhaustive_perfect_matching(g, blue)
        if pb is None:
            continue
        pm = sorted(cut_edges(g, col) + pr + pb)
        return Certificate("DPM", True, col, tuple(pm))
    return Certificate("DPM", False)


# ---------------------------------------------------------------------------
# certificate verification


def verify_certificate(g: Graph, cert: Certificate) -> None:
    """Re-check a YES certificate from scratch; raise :class:`VerificationError`.

    NO certificates carry no witness and are only checked for shape here.
    """
    if not cert.answer:
        if cert.colouring is not None or cert.matching is not None:
            raise VerificationError("a NO certificate must not carry a witness")
        return
    if cert.colouring is None:
        raise VerificationError("YES certificate without a colouring")
    if len(cert.colouring) != g.n:
        raise VerificationError("colouring does not cover every vertex")
    rep = classify(g, cert.colouring)
    need = {
        "MC": ColouringClass.VALID_ONLY,
        "DPM": ColouringClass.PERFECT_EXTENDABLE,
        "PMC": ColouringClass.PERFECT,
    }[cert.problem]
    if rep.cls < need:
        raise VerificationError(
            f"colouring classifies as {rep.cls.name}, {cert.problem} needs {need.name}"
            + (f" ({rep.reason} at vertex {rep.witness})" if rep.reason else "")
        )
    if cert.matching is None:
        return
    matching = [tuple(sorted(e)) for e in cert.matching]
    for u, v in matching:
        if not g.has_edge(u, v):
            raise VerificationError(f"matching edge ({u}, {v}) is not an edge of the graph")
    if cert.problem == "DPM":
        if not is_perfect_matching(g, matching):
            raise VerificationError("DPM matching is not a perfect matching")
        if not set(rep.cut) <= set(matching):
            raise VerificationError("DPM matching does not contain the cut")
    elif sorted(matching) != sorted(rep.cut):
        raise VerificationError("matching differs from the cut of the colouring")


# ---------------------------------------------------------------------------
# Restricted Positive 1-in-k SAT


@dataclass(frozen=True)
class Formula:
    """Positive 1-in-k formula over variables ``1..num_vars``.

    ``occurrence[(j, p)]`` is the 1-based ordinal of the variable at position
    ``p`` of clause ``j`` among all occurrences of that variable, scanning the
    clauses in order.
    """

    k: int
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    occurrence: dict[tuple[int, int], int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise FormulaError("clause width must be positive")
        seen: dict[int, int] = {}
        occ: dict[tuple[int, int], int] = {}
        for j, cl in enumerate(self.clauses):
            if len(cl) != self.k:
                raise FormulaError(f"clause {j + 1} has {len(cl)} literals, expected {self.k}")
            if len(set(cl)) != len(cl):
                raise FormulaError(f"clause {j + 1} repeats a variable")
            for p, x in enumerate(cl):
                if x <= 0:
                    raise FormulaError(f"clause {j + 1} has non-positive literal {x}")
                if x > self.num_vars:
                    raise FormulaError(f"clause {j + 1} uses variable {x} > {self.num_vars}")
                seen[x] = seen.get(x, 0) + 1
                if seen[x] > self.k:
                    raise FormulaError(f"variable {x} occurs more than {self.k} times")
                occ[(j, p)] = seen[x]
        object.__setattr__(self, "occurrence", occ)

    @classmethod
    def of(cls, k: int, clauses: Sequence[Sequence[int]], num_vars: int | None = None) -> Formula:
        cls_t = tuple(tuple(c) for c in clauses)
        if num_vars is None:
            num_vars = max((x for c in cls_t for x in c), default=0)
        return cls(k, num_vars, cls_t)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[x - 1]`` is the value of variable ``x``."""
        if len(assignment) != self.num_vars:
            return False
        return all(sum(bool(assignment[x - 1]) for x in cl) == 1 for cl in self.clauses)


def solve_one_in_k_sat(f: Formula) -> tuple[bool, ...] | None:
    """An assignment making exactly one variable true per clause, or ``None``.

    Backtracks on the clause with the fewest open variables, choosing which of
    them is the true one; variables outside every clause are set false.
    """
    val: list[int] = [-1] * (f.num_vars + 1)
    by_var: dict[int, list[int]] = {}
    for j, cl in enumerate(f.clauses):
        for x in cl:
            by_var.setdefault(x, []).append(j)

    def consistent() -> bool:
        for cl in f.clauses:
            t = sum(1 for x in cl if val[x] == 1)
            if t > 1 or (t == 0 and all(val[x] == 0 for x in cl)):
                return False
        return True

    def rec() -> bool:
        open_clause = None
        for cl in f.clauses:
            if any(val[x] == 1 for x in cl):
                continue
            free = [x for x in cl if val[x] == -1]
            if open_clause is None or len(free) < len(open_clause):
                open_clause = free
        if open_clause is None:
            return True
        for x in open_clause:
            changed = [x] + [y for y in open_clause if y != x]
            prev = [val[y] for y in changed]
            val[x] = 1
            for y in changed[1:]:
                val[y] = 0
            # the true variable falsifies every other variable of its clauses
            forced = []
            for j in by_var[x]:
                for y in f.clauses[j]:
                    if y != x and val[y] == -1:
                        val[y] = 0
                        forced.append(y)
            if consistent() and rec():
                return True
            for y in forced:
                val[y] = -1
            for y, p in zip(changed, prev):
                val[y] = p
        return False

    if not rec():
        return None
    return tuple(val[x] == 1 for x in range(1, f.num_vars + 1))
