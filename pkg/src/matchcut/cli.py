"""Command-line interface.  Exit status: 0 yes/pass, 1 no/fail, 2 error or budget."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .errors import BudgetExceeded, MatchCutError, VerificationError
from .gadgets import Assembly, build_clause_gadget, build_G, build_H, build_Hprime, build_T, hprime_request
from .graph import girth, is_hstar_free, profile
from .immunity import (
    Catalog,
    ProviderRequest,
    certify_immune,
    edge_expansion,
    find_immune,
    lambda2,
)
from .io import format_catalog, format_certificate, format_graph, parse_certificate, parse_graph, parse_one_in_k_cnf
from .matching import has_perfect_matching
from .reductions import (
    reduce_dpm_hstarfree,
    reduce_mc_hstarfree,
    reduce_mc_to_dpm,
    reduce_pmc_subdivide,
    reduce_sat_to_mc,
)
from .solvers import BRUTE_FORCE_LIMIT, DEFAULT_BUDGET, brute_force_decide, solve, verify_certificate
from .trace import Role

OK, NO, ERROR = 0, 1, 2


def _read_graph(path: str):
    return parse_graph(Path(path).read_text())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    cert = solve(args.problem.upper(), g, args.budget)
    _emit(format_certificate(cert), args.out)
    print(f"c nodes {cert.nodes}", file=sys.stderr)
    return OK if cert.answer else NO


def cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    cert = parse_certificate(Path(args.cert).read_text())
    if cert.answer:
        try:
            verify_certificate(g, cert)
        except (VerificationError, MatchCutError) as exc:
            print(f"REJECTED: {exc}")
            return NO
        print(f"ACCEPTED {cert.problem} YES")
        return OK
    if g.n > BRUTE_FORCE_LIMIT:
        print(f"UNCHECKED: NO answers are confirmed by enumeration only up to {BRUTE_FORCE_LIMIT} vertices")
        return ERROR
    truth = brute_force_decide(cert.problem, g)
    if truth.answer:
        print(f"REJECTED: enumeration finds a {cert.problem} witness")
        return NO
    print(f"ACCEPTED {cert.problem} NO (exhaustive enumeration)")
    return OK


def _emit_reduction(graph, trace, comments, out) -> int:
    _emit(format_graph(graph, comments=comments, roles=trace.roles), out)
    return OK


def cmd_reduce(args: argparse.Namespace) -> int:
    if args.kind == "sat2mc":
        f = parse_one_in_k_cnf(Path(args.file).read_text(), args.g)
        red = reduce_sat_to_mc(f, seed=args.seed)
        return _emit_reduction(*red, [f"sat2mc g={args.g} star={red.trace.meta['star'] + 1}"], args.out)
    g0 = _read_graph(args.file)
    if args.kind == "mc2dpm":
        req = hprime_request(args.g, seed=args.seed)
        red = reduce_mc_to_dpm(g0, args.g, request=req)
        return _emit_reduction(*red, [f"mc2dpm g={args.g}"], args.out)
    if args.kind == "hstar":
        fn = reduce_mc_hstarfree if args.problem == "mc" else reduce_dpm_hstarfree
        red = fn(g0, args.i)
        return _emit_reduction(*red, [f"hstar {args.problem} i={args.i}"], args.out)
    red = reduce_pmc_subdivide(g0, args.t)
    return _emit_reduction(*red, [f"subdivide t={args.t}"], args.out)


def cmd_check(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    what = args.what
    if what == "girth":
        gr = girth(g)
        print(f"girth {gr}")
        return OK if args.g is None or gr >= args.g else NO
    if what == "hstarfree":
        res = is_hstar_free(g, args.i)
        if res.free:
            print(f"free of H*_1..H*_{args.i}")
            return OK
        emb = " ".join(f"{a + 1}->{b + 1}" for a, b in sorted(res.witness.items()))
        print(f"contains induced H*_{res.index}: {emb}")
        return NO
    if what == "immune":
        cert = certify_immune(g, budget=args.budget)
        if cert is None:
            print("not certified immune")
            return NO
        print(f"immune ({cert.method})")
        return OK
    if what == "expansion":
        h = edge_expansion(g)
        print(f"h {h}")
        return OK if h > 1 else NO
    if what == "lambda2":
        print(f"lambda2 {lambda2(g)!r}")
        return OK
    p = profile(g)
    for key, val in vars(p).items():
        print(f"{key} {val}")
    print(f"perfect_matching {has_perfect_matching(g).exists}")
    return OK


def cmd_search(args: argparse.Namespace) -> int:
    catalog = Catalog.load(args.catalog) if args.catalog and Path(args.catalog).exists() else Catalog.default()
    before = len(catalog)
    req = ProviderRequest(
        min_girth=args.girth,
        must_be_bipartite=args.bipartite,
        needs_perfect_matching=args.pm,
        designated_distance=args.dist,
        max_vertices=args.max_vertices,
        seed=args.seed,
    )
    hit = find_immune(req, catalog)
    if hit is None:
        print("c no immune graph found within budget")
        return NO
    cert = hit.certificate
    comments = [f"immune {hit.source} s={hit.s + 1} t={hit.t + 1} certificate={cert.method}"]
    _emit(format_graph(hit.graph, comments=comments), args.out)
    if args.catalog and len(catalog) > before:
        Path(args.catalog).write_text(format_catalog((e.name, e.graph, e.certificate) for e in catalog))
    return OK


def cmd_gadget(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind in ("t", "g"):
        gad = (build_T if kind == "t" else build_G)(args.i)
        _emit(format_graph(gad.graph, [f"gadget {kind} i={args.i} u=1 v=2"], gad.trace.roles), args.out)
        return OK
    if kind in ("h", "hprime"):
        if kind == "h":
            mg = build_H(args.g, request=hprime_request(args.g, seed=args.seed))
        else:
            base = find_immune(hprime_request(args.g, seed=args.seed))
            if base is None:
                print("c no immune base graph found", file=sys.stderr)
                return ERROR
            mg = build_Hprime(base.graph, base.s, base.t, has_perfect_matching(base.graph).matching, args.g)
        roles = [Role("immune-internal", (0,), (v,)) for v in range(mg.graph.n)]
        _emit(format_graph(mg.graph, [f"gadget {kind} g={args.g} s={mg.s + 1} t={mg.t + 1}"], roles), args.out)
        return OK
    asm = Assembly()
    vp = [asm.vertex(Role("clause-port", (k,), (0, 1))) for k in range(1, args.g + 1)]
    up = [asm.vertex(Role("clause-port", (k,), (1, 1))) for k in range(1, args.g + 1)]
    build_clause_gadget(args.g, vp, up, asm)
    graph, trace = asm.build()
    _emit(format_graph(graph, [f"gadget clause g={args.g}"], trace.roles), args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matchcut", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide MC, DPM or PMC and print a certificate")
    s.add_argument("problem", choices=["mc", "dpm", "pmc"])
    s.add_argument("file")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="independently re-check a certificate")
    v.add_argument("file")
    v.add_argument("cert")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="run a reduction and print the constructed graph")
    rs = r.add_subparsers(dest="kind", required=True)
    a = rs.add_parser("sat2mc")
    a.add_argument("--g", type=int, required=True)
    a.add_argument("file")
    a = rs.add_parser("mc2dpm")
    a.add_argument("--g", type=int, required=True)
    a.add_argument("file")
    a = rs.add_parser("hstar")
    a.add_argument("problem", choices=["mc", "dpm"])
    a.add_argument("--i", type=int, required=True)
    a.add_argument("file")
    a = rs.add_parser("subdivide")
    a.add_argument("--t", type=int, required=True)
    a.add_argument("file")
    for a in rs.choices.values():
        a.add_argument("--seed", type=int, default=0)
        a.add_argument("--out")
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("check", help="structural and spectral checks")
    c.add_argument("what", choices=["girth", "hstarfree", "immune", "expansion", "lambda2", "profile"])
    c.add_argument("file")
    c.add_argument("--i", type=int, default=1)
    c.add_argument("--g", type=int)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.set_defaults(func=cmd_check)

    se = sub.add_parser("search", help="search for an immune graph")
    se.add_argument("what", choices=["immune"])
    se.add_argument("--girth", type=int, required=True)
    se.add_argument("--bipartite", action="store_true")
    se.add_argument("--pm", action="store_true")
    se.add_argument("--dist", type=int, default=0)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--max-vertices", type=int, default=200)
    se.add_argument("--catalog", help="catalog file to read and extend")
    se.add_argument("--out")
    se.set_defaults(func=cmd_search)

    ga = sub.add_parser("gadget", help="emit a gadget with its role sidecar")
    ga.add_argument("kind", choices=["t", "g", "h", "hprime", "clause"])
    ga.add_argument("--i", type=int, default=1)
    ga.add_argument("--g", type=int, default=3)
    ga.add_argument("--seed", type=int, default=0)
    ga.add_argument("--out")
    ga.set_defaults(func=cmd_gadget)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded after {exc.nodes} nodes", file=sys.stderr)
        return ERROR
    except (MatchCutError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
