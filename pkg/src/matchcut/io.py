"""Text formats: graphs, 1-in-k CNF formulas, certificates and the immune catalog.

Files use 1-based vertex ids; everything in memory is 0-based.

Graph::

    c comment
    p graph <n> <m>
    e <u> <v>            (m lines)

Certificate::

    s <MC|DPM|PMC> <YES|NO>
    v <id> <R|B>         (YES only, one per vertex)
    m <u> <v>            (YES only, the cut, or the full matching for DPM)

Catalog: graph blocks, each preceded by ``c name <name>`` and followed by one
``k exhaustive <nodes>`` or ``k spectral <d> <lambda2> <bound> <margin>`` line.
"""

from __future__ import annotations

from typing import Iterable

from .errors import ParseError
from .graph import Graph
from .immunity import EXHAUSTIVE, SPECTRAL, ImmuneCertificate
from .solvers import PROBLEMS, Certificate, Formula
from .trace import Role, format_roles, parse_roles


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if parts and parts[0] != "c":
            yield lineno, parts


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


# ---------------------------------------------------------------------------
# graphs


def parse_graph(text: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, parts in _lines(text):
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second header line", lineno)
            if len(parts) != 4 or parts[1] != "graph":
                raise ParseError("header must be 'p graph <n> <m>'", lineno)
            n, m = _int(parts[2], lineno), _int(parts[3], lineno)
            if n < 0 or m < 0:
                raise ParseError("negative vertex or edge count", lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge line before header", lineno)
            if len(parts) != 3:
                raise ParseError("edge line must be 'e <u> <v>'", lineno)
            u, v = _int(parts[1], lineno), _int(parts[2], lineno)
            if u == v:
                raise ParseError(f"loop at vertex {u}", lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
            e = (min(u, v) - 1, max(u, v) - 1)
            if e in seen:
                raise ParseError(f"duplicate edge {min(u, v)} {max(u, v)}", lineno)
            seen.add(e)
            edges.append(e)
        elif tag == "r":
            continue
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p graph' header")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, edges)


def format_graph(g: Graph, comments: Iterable[str] = (), roles: Iterable[Role] | None = None) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p graph {g.n} {g.m}")
    out += [f"e {u + 1} {v + 1}" for u, v in g.edge_list()]
    text = "\n".join(out) + "\n"
    if roles is not None:
        text += format_roles(roles)
    return text


def parse_graph_roles(text: str) -> list[Role]:
    """The role sidecar lines embedded in a graph document."""
    return parse_roles("\n".join(line for line in text.splitlines() if line.startswith("r ")))


# ---------------------------------------------------------------------------
# formulas


def parse_one_in_k_cnf(text: str, k: int) -> Formula:
    if k < 3:
        raise ParseError("clause width k must be at least 3")
    nv = nc = None
    clauses: list[tuple[int, ...]] = []
    seen: dict[int, int] = {}
    for lineno, parts in _lines(text):
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("header must be 'p cnf <vars> <clauses>'", lineno)
            nv, nc = _int(parts[2], lineno), _int(parts[3], lineno)
            continue
        if nv is None:
            raise ParseError("clause before header", lineno)
        lits = [_int(tok, lineno) for tok in parts]
        if lits[-1] != 0 or 0 in lits[:-1]:
            raise ParseError("clause must end with a single 0", lineno)
        lits = lits[:-1]
        if any(x < 0 for x in lits):
            raise ParseError("negative literal; only positive literals are allowed", lineno)
        if len(lits) != k:
            raise ParseError(f"clause has {len(lits)} literals, expected {k}", lineno)
        if len(set(lits)) != k:
            raise ParseError("variable repeated within a clause", lineno)
        for x in lits:
            if x > nv:
                raise ParseError(f"variable {x} exceeds declared {nv}", lineno)
            seen[x] = seen.get(x, 0) + 1
            if seen[x] > k:
                raise ParseError(f"variable {x} occurs more than {k} times", lineno)
        clauses.append(tuple(lits))
    if nv is None:
        raise ParseError("missing 'p cnf' header")
    if len(clauses) != nc:
        raise ParseError(f"header announces {nc} clauses, found {len(clauses)}")
    return Formula(k, nv, tuple(clauses))


def format_cnf(f: Formula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# certificates


def format_certificate(cert: Certificate) -> str:
    lines = [f"s {cert.problem} {'YES' if cert.answer else 'NO'}"]
    if cert.answer:
        if cert.colouring is not None:
            lines += [f"v {v + 1} {'RB'[c]}" for v, c in enumerate(cert.colouring)]
        if cert.matching is not None:
            lines += [f"m {u + 1} {v + 1}" for u, v in cert.matching]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, g: Graph | None = None) -> Certificate:
    """Parse a certificate; with ``g`` given it is re-verified before it is returned."""
    problem = answer = None
    colours: dict[int, int] = {}
    matching: list[tuple[int, int]] = []
    for lineno, parts in _lines(text):
        tag = parts[0]
        if tag == "s":
            if problem is not None:
                raise ParseError("second status line", lineno)
            if len(parts) != 3 or parts[1] not in PROBLEMS or parts[2] not in ("YES", "NO"):
                raise ParseError("status must be 's <MC|DPM|PMC> <YES|NO>'", lineno)
            problem, answer = parts[1], parts[2] == "YES"
        elif tag == "v":
            if len(parts) != 3 or parts[2] not in ("R", "B"):
                raise ParseError("colour line must be 'v <id> <R|B>'", lineno)
            v = _int(parts[1], lineno) - 1
            if v < 0 or v in colours:
                raise ParseError(f"bad or repeated vertex id {v + 1}", lineno)
            colours[v] = "RB".index(parts[2])
        elif tag == "m":
            if len(parts) != 3:
                raise ParseError("matching line must be 'm <u> <v>'", lineno)
            u, v = _int(parts[1], lineno) - 1, _int(parts[2], lineno) - 1
            matching.append((min(u, v), max(u, v)))
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if problem is None:
        raise ParseError("missing status line")
    if not answer:
        if colours or matching:
            raise ParseError("NO certificate carries witness lines")
        return Certificate(problem, False)
    if sorted(colours) != list(range(len(colours))):
        missing = next(v for v in range(len(colours) + 1) if v not in colours)
        raise ParseError(f"vertex {missing + 1} is uncoloured")
    col = tuple(colours[v] for v in range(len(colours)))
    cert = Certificate(problem, True, col, tuple(sorted(matching)) if matching else None)
    if g is not None:
        from .solvers import verify_certificate

        if len(col) != g.n:
            raise ParseError(f"certificate colours {len(col)} vertices, graph has {g.n}")
        verify_certificate(g, cert)
    return cert


# ---------------------------------------------------------------------------
# catalog


def format_catalog(entries: Iterable[tuple[str, Graph, ImmuneCertificate]]) -> str:
    blocks = []
    for name, g, cert in entries:
        text = format_graph(g, comments=[f"name {name}"])
        if cert.method == SPECTRAL:
            text += f"k spectral {cert.d} {cert.lambda2!r} {cert.bound!r} {cert.safety_margin!r}\n"
        else:
            text += f"k exhaustive {cert.nodes}\n"
        blocks.append(text)
    return "\n".join(blocks)


def parse_catalog(text: str) -> list[tuple[str, Graph, ImmuneCertificate]]:
    out = []
    block: list[str] = []
    name = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        if parts[:2] == ["c", "name"] and len(parts) == 3:
            name = parts[2]
            continue
        if parts[0] == "k":
            if name is None:
                raise ParseError("certificate line without a preceding 'c name'", lineno)
            g = parse_graph("\n".join(block))
            if len(parts) == 3 and parts[1] == EXHAUSTIVE:
                cert = ImmuneCertificate(EXHAUSTIVE, nodes=_int(parts[2], lineno))
            elif len(parts) == 6 and parts[1] == SPECTRAL:
                try:
                    d, lam, bound, margin = int(parts[2]), float(parts[3]), float(parts[4]), float(parts[5])
                except ValueError:
                    raise ParseError("malformed spectral certificate", lineno) from None
                cert = ImmuneCertificate(SPECTRAL, d=d, lambda2=lam, bound=bound, safety_margin=margin)
            else:
                raise ParseError("certificate line must be 'k exhaustive N' or 'k spectral d l b m'", lineno)
            out.append((name, g, cert))
            block, name = [], None
            continue
        block.append(raw)
    if block and any(line.split()[0] != "c" for line in block if line.split()):
        raise ParseError("catalog ends with a graph lacking a certificate")
    return out
