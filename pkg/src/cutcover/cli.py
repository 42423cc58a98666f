"""Command-line entry point.

Exit codes: 0 SAT / true / success, 1 UNSAT / false, 2 error, 3 budget exhausted.
Digraphs travel as text on stdin/stdout, certificates as JSON.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from . import bounds, constructive, generators, reductions, symmetric
from .cover import (ArcColoring, CutCover, CutFamily, certificate_from_json, cover_to_json,
                    verify_certificate)
from .digraph import Digraph, read_digraph, read_graph, to_dot, write_digraph
from .homomorphism import hom_to_path_power, verify_hom
from .solver import (Budget, BudgetExceededError, Outcome, SolveConstraints, decide_one_cut,
                     decide_two_cuts, min_k, solve_parallel)

EXIT_OK, EXIT_NO, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    pass


def _read_text(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out: Optional[str] = None) -> None:
    text = json.dumps(obj, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _stats(obj) -> None:
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)


def _budget(args) -> Budget:
    return Budget(nodes=args.node_budget, seconds=args.time_budget)


def _add_budget(p):
    p.add_argument("--node-budget", type=int, default=None, help="maximum search nodes")
    p.add_argument("--time-budget", type=float, default=None, help="maximum seconds")


def _constraints(path: Optional[str]) -> Optional[SolveConstraints]:
    """JSON keys: pin {v: [elements]}, domains {v: [[elements], ...]},
    sizes {v: [sizes]}, exclude [[a, v]], subset [[x, y]]."""
    if not path:
        return None
    data = _read_json(path)
    cons = SolveConstraints()
    for v, s in data.get("pin", {}).items():
        cons.pin(int(v), s)
    for v, fam in data.get("domains", {}).items():
        cons.restrict(int(v), [sum(1 << (a - 1) for a in s) for s in fam])
    for v, sizes in data.get("sizes", {}).items():
        cons.allow_sizes(int(v), sizes)
    for a, v in data.get("exclude", []):
        cons.exclude(int(a), int(v))
    for x, y in data.get("subset", []):
        cons.require_subset(int(x), int(y))
    return cons


# -- subcommands --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    D = read_digraph(_read_text(args.digraph))
    cert = certificate_from_json(_read_text(args.certificate))
    verdict = verify_certificate(D, cert)
    _emit({"valid": verdict.ok, "witness": verdict.witness})
    return EXIT_OK if verdict else EXIT_NO


def cmd_solve(args) -> int:
    D = read_digraph(_read_text(args.digraph))
    res = solve_parallel(D, args.k, _constraints(args.constraints), _budget(args), args.jobs)
    _stats(res.stats())
    if res.outcome is Outcome.SAT:
        _emit(cover_to_json(res.cover), args.out)
        return EXIT_OK
    return EXIT_NO if res.outcome is Outcome.UNSAT else EXIT_BUDGET


def cmd_decide(args) -> int:
    D = read_digraph(_read_text(args.digraph))
    k = args.k
    if k == 0:
        ok, info = D.num_arcs == 0, {"method": "no-arcs"}
    elif k == 1:
        r = decide_one_cut(D)
        ok, info = r.ok, {"method": "one-cut", "witness": r.witness}
        if r.ok:
            info["cut"] = sorted(r.cut)
    elif k == 2:
        r = decide_two_cuts(D)
        ok, info = r.ok, {"method": "two-cuts", "odd_cycle": list(r.odd_cycle) if r.odd_cycle else None}
        if r.ok:
            info["cover"] = cover_to_json(r.cover)
    else:
        res = solve_parallel(D, k, None, _budget(args), args.jobs)
        _stats(res.stats())
        if res.outcome is Outcome.BUDGET_EXCEEDED:
            return EXIT_BUDGET
        ok, info = res.sat, {"method": "exact"}
        if res.sat:
            info["cover"] = cover_to_json(res.cover)
    _emit({"covered": ok, "k": k, **info})
    return EXIT_OK if ok else EXIT_NO


def cmd_hom(args) -> int:
    D = read_digraph(_read_text(args.digraph))
    res = hom_to_path_power(D, args.n, args.d)
    if res.ok:
        assert verify_hom(D, args.n, args.d, res.labeling)
    _emit(res.to_json())
    return EXIT_OK if res.ok else EXIT_NO


_GEN_TAGS = ("path-power", "tournament", "block-path", "block-path-prime", "layered",
             "random-dag", "class-member")


def cmd_gen(args) -> int:
    tag = args.tag
    need = {"path-power": ("n", "d"), "tournament": ("n",), "block-path": ("k", "l"),
            "block-path-prime": ("k", "l"), "layered": ("d", "k"), "random-dag": ("n",),
            "class-member": ("n", "dminus", "dplus")}[tag]
    missing = [("-" if len(p) == 1 else "--") + p for p in need if getattr(args, p) is None]
    if missing:
        raise CliError(f"gen {tag} needs {' '.join(missing)}")
    rng = random.Random(args.seed)
    if tag == "path-power":
        inst = generators.gen_path_power(args.n, args.d)
    elif tag == "tournament":
        inst = generators.gen_transitive_tournament(args.n)
    elif tag == "block-path":
        inst = generators.gen_block_path(args.k, args.l)
    elif tag == "block-path-prime":
        inst = generators.gen_block_path_prime(args.k, args.l)
    elif tag == "layered":
        inst = generators.gen_layered_indegree(args.d, args.k, args.size_limit)
    elif tag == "random-dag":
        D = generators.random_dag(args.n, args.p, rng, args.max_indegree)
        inst = generators.GeneratedInstance(D, tag, {"n": args.n, "p": args.p, "seed": args.seed})
    else:
        D = generators.random_class_member(args.n, args.dminus, args.dplus, rng)
        inst = generators.GeneratedInstance(D, tag, {"n": args.n, "dminus": args.dminus,
                                                      "dplus": args.dplus, "seed": args.seed})
    if args.sidecar:
        with open(args.sidecar, "w") as fh:
            fh.write(inst.sidecar_json() + "\n")
    if args.dot:
        sys.stdout.write(to_dot(inst.digraph))
    else:
        sys.stdout.write(write_digraph(inst.digraph, [f"{inst.tag} {json.dumps(inst.params, sort_keys=True)}"]))
    return EXIT_OK


def cmd_reduce(args) -> int:
    G = read_graph(_read_text(args.graph))
    if args.planar:
        P = reductions.search_port_gadget(args.variant)
        Q = reductions.search_port_gadget("Q")
        inst = reductions.reduce_planar_coloring(G, P, Q)
    else:
        if not (args.gadget and args.bundle):
            raise CliError("reduce needs --gadget and --bundle (or --planar)")
        H = read_digraph(_read_text(args.gadget))
        g = reductions.Gadget.from_bundle(H, _read_json(args.bundle))
        if not g.validated:
            raise CliError("gadget bundle is not marked validated; run 'gadget validate'")
        inst = reductions.reduce_coloring_to_cutcover(G, g)
    if args.sidecar:
        with open(args.sidecar, "w") as fh:
            fh.write(inst.sidecar_json() + "\n")
    sys.stdout.write(write_digraph(inst.digraph, [f"{inst.tag} {json.dumps(inst.params, sort_keys=True)}"]))
    return EXIT_OK


def cmd_gadget(args) -> int:
    if args.action == "search":
        kind = args.kind or "P12"
        g = reductions.search_port_gadget(kind)
        role = "Q" if kind == "Q" else "P"
        prof = reductions.check_port_gadget(g, role)
        ok = prof.realises_all and prof.forced_equal_singleton
        comments = [f"port gadget {kind}: labels {list(g.labels)} ports {list(g.ports)}",
                    f"degree target met: {g.meets_degrees}"]
        sys.stdout.write(write_digraph(g.digraph, comments))
        _stats({"valid": ok, "exists_pinned": prof.exists_pinned,
                "forced_equal_singleton": prof.forced_equal_singleton})
        return EXIT_OK if ok else EXIT_NO
    D = read_digraph(_read_text(args.digraph))
    if args.action == "find":
        try:
            g = reductions.find_gadget(D, args.k, _budget(args))
        except reductions.BudgetError as exc:
            raise BudgetExceededError(str(exc)) from exc
        if args.out_digraph:
            with open(args.out_digraph, "w") as fh:
                fh.write(write_digraph(g.digraph, ["cut-off gadget"]))
        else:
            sys.stdout.write(write_digraph(g.digraph, ["cut-off gadget"]))
        _emit(g.bundle(), args.out_bundle) if args.out_bundle else _stats(g.bundle())
        return EXIT_OK
    if not args.bundle:
        raise CliError("gadget validate needs --bundle")
    g = reductions.Gadget.from_bundle(D, _read_json(args.bundle))
    try:
        rep = reductions.gadget_checks(g.digraph, g.x, g.y, g.k, _budget(args))
    except reductions.BudgetError as exc:
        raise BudgetExceededError(str(exc)) from exc
    ok = all(rep.values())
    _emit({"validated": ok, "checks": rep})
    return EXIT_OK if ok else EXIT_NO


def cmd_normalize(args) -> int:
    D = read_digraph(_read_text(args.digraph))
    cert = certificate_from_json(_read_text(args.certificate))
    if not isinstance(cert, CutCover):
        raise CliError("normalize expects a cover JSON with key 'sets'")
    out = symmetric.normalize_symmetric_cover(D, cert)
    _emit(cover_to_json(out), args.out)
    return EXIT_OK


def _table(rows, header):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).rjust(w) for x, w in zip(r, widths)) for r in [header] + rows]
    print("\n".join(lines))


def cmd_bounds(args) -> int:
    if args.table == "mk":
        rows = [[k, bounds.central_binomial(k), bounds.check_mk_bounds(k)] for k in range(1, args.kmax + 1)]
        header = ["k", "M(k)", "bounds_hold"]
    elif args.table == "delta":
        rows = []
        for k in range(1, args.kmax + 1):
            b = bounds.delta_bounds(k)
            rows.append([k, b.lower, b.upper, bounds.delta_iii_threshold(k), bounds.conjecture_threshold(k)])
        header = ["k", "lower", "upper", "threshold_2^k+1", "conjecture"]
    else:
        rows = []
        for a in range(-1, args.max + 1):
            for b in range(-1, args.max + 1):
                c = bounds.degree_class_bounds(a, b)
                rows.append([a, b, c.lower, c.upper])
        header = ["dminus", "dplus", "lower", "upper"]
    if args.json:
        _emit([dict(zip(header, r)) for r in rows])
    else:
        _table(rows, header)
    return EXIT_OK


def cmd_min_k(args) -> int:
    D = read_digraph(_read_text(args.digraph))
    k = min_k(D, args.kmax, _budget(args))
    _emit({"min_k": k})
    return EXIT_OK if k is not None else EXIT_NO


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    failures = run_selftest(args.seed, args.rounds, verbose=not args.json)
    if args.json:
        _emit({"seed": args.seed, "rounds": args.rounds, "failures": failures})
    return EXIT_OK if not failures else EXIT_NO


# -- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cutcover", description="k-cut covers of digraphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a certificate against a digraph")
    p.add_argument("digraph")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact k-cut cover search")
    p.add_argument("digraph", nargs="?")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--constraints", help="JSON with pin/domains/sizes/exclude/subset")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the cover JSON here instead of stdout")
    _add_budget(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decide", help="polynomial test for k <= 2, exact search above")
    p.add_argument("digraph", nargs="?")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_budget(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("hom", help="homomorphism to the path power P_n^d")
    p.add_argument("digraph", nargs="?")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("gen", help="generate a digraph")
    p.add_argument("tag", choices=_GEN_TAGS)
    for flag in ("-n", "-d", "-k", "-l"):
        p.add_argument(flag, type=int)
    p.add_argument("--dminus", type=int)
    p.add_argument("--dplus", type=int)
    p.add_argument("-p", type=float, default=0.3, help="arc probability for random-dag")
    p.add_argument("--max-indegree", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size-limit", type=int, default=generators.DEFAULT_SIZE_LIMIT)
    p.add_argument("--sidecar", help="write labels/params JSON here")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of the text format")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="graph colouring to cut cover")
    p.add_argument("graph", nargs="?")
    p.add_argument("--gadget", help="gadget digraph file")
    p.add_argument("--bundle", help="gadget bundle JSON")
    p.add_argument("--planar", action="store_true", help="use the bounded-degree port-gadget reduction")
    p.add_argument("--variant", choices=("P12", "P14"), default="P12")
    p.add_argument("--sidecar")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gadget", help="find, validate or search gadgets")
    p.add_argument("action", choices=("find", "validate", "search"))
    p.add_argument("digraph", nargs="?")
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--bundle")
    p.add_argument("--out-digraph")
    p.add_argument("--out-bundle")
    p.add_argument("--kind", choices=("P12", "P14", "Q"))
    _add_budget(p)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("normalize", help="middle-level cover of a symmetric digraph")
    p.add_argument("digraph")
    p.add_argument("certificate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("bounds", help="bound tables")
    p.add_argument("table", choices=("mk", "delta", "class"))
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--max", type=int, default=7, help="largest degree in the class table")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("min-k", help="least k with a cover")
    p.add_argument("digraph", nargs="?")
    p.add_argument("--kmax", type=int, default=6)
    _add_budget(p)
    p.set_defaults(func=cmd_min_k)

    p = sub.add_parser("selftest", help="randomised cross-checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=200)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"cutcover: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CliError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"cutcover: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
