"""Command-line entry point.

``--json`` prints a report ``{command, inputs, results, claims, timing_ms}``.
Exit codes: 0 success, 1 failed claim or internal inconsistency, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .automorphism import automorphism_group
from .cayley import cayley_graph, decompose, is_normal_edge_transitive
from .config import limits
from .dihedral import (
    aut_gc_structure,
    classify_4valent,
    enumerate_4valent,
    is_transitive_dihedral,
    mersenne_family,
    new_family_not_talebi,
    new_family_set,
    new_family_valid,
)
from .errors import InconsistencyDetected, NetcayError
from .frattini import (
    has_transitive_orbits,
    invariant_normal_lattice,
    is_generating,
    make_connection_set,
    parse_connection_set,
    phi_oracle_members,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    all_normal_subgroups,
    build_dihedral,
    frattini_subgroup,
    parse_group_spec,
)
from .harness import CASES, Claim, dumps_report, jsonable, run_case


class UsageError(NetcayError):
    """Bad command-line input detected after argument parsing."""


def _subgroup(N: Subgroup) -> dict:
    return {"order": N.order, "elements": list(N.elements)}


def _claims(claims) -> list[dict]:
    return [asdict(c) for c in claims]


def _connection(G: FiniteGroup, expr: str):
    return make_connection_set(G, parse_connection_set(G, expr))


# ------------------------------------------------------------- commands

def cmd_group_show(args) -> tuple[dict, dict, list]:
    G = parse_group_spec(args.spec)
    res = {
        "label": G.label,
        "order": G.order,
        "abelian": G.is_abelian,
        "element_orders": list(G.element_orders),
        "conjugacy_classes": len(G.conjugacy_classes),
        "normal_subgroups": len(all_normal_subgroups(G)),
        "aut_order": automorphism_group(G).order,
        "frattini": _subgroup(frattini_subgroup(G)),
    }
    return {"spec": args.spec}, res, []


def cmd_frattini(args):
    G = parse_group_spec(args.spec)
    C = _connection(G, args.set)
    lat = invariant_normal_lattice(C)
    res = {
        "connection_set": list(C.elements),
        "generating": is_generating(C),
        "aut_gc_order": C.aut_gc.order,
        "aut_gc_orbits": [list(o) for o in C.orbit_partition],
        "invariant_normal_subgroups": len(lat.all),
        "maximal": [_subgroup(N) for N in lat.maximal],
        "phi": _subgroup(lat.phi),
        "group_frattini": _subgroup(frattini_subgroup(G)),
    }
    claims = [Claim.check("Phi(G) is contained in Phi(G;C)", True, frattini_subgroup(G) <= lat.phi, "derived")]
    if args.oracle:
        members = list(phi_oracle_members(C))
        res["oracle_members"] = members
        claims.append(Claim.check("subset oracle agrees with Phi(G;C)", list(lat.phi.elements), members, "derived"))
    return {"spec": args.spec, "set": args.set, "oracle": args.oracle}, res, claims


def cmd_cayley_build(args):
    G = parse_group_spec(args.spec)
    gamma = cayley_graph(G, _connection(G, args.set))
    g6 = gamma.graph.to_graph6()
    if args.g6:
        Path(args.g6).write_text(g6 + "\n")
    res = {
        "vertices": gamma.graph.vertex_count,
        "edges": gamma.graph.edge_count,
        "valency": gamma.valency,
        "connected": gamma.graph.is_connected(),
        "graph6": g6,
    }
    return {"spec": args.spec, "set": args.set, "g6": args.g6}, res, []


def cmd_net_test(args):
    G = parse_group_spec(args.spec)
    C = _connection(G, args.set)
    gamma = cayley_graph(G, C)
    net = is_normal_edge_transitive(gamma)
    res = {
        "connection_set": list(C.elements),
        "normal_edge_transitive": net,
        "aut_gc_order": C.aut_gc.order,
        "aut_gc_orbits": [list(o) for o in C.orbit_partition],
    }
    claims = [Claim.check("orbit test agrees with the connected case", net, has_transitive_orbits(C), "derived")]
    return {"spec": args.spec, "set": args.set}, res, claims


def cmd_decompose(args):
    G = parse_group_spec(args.spec)
    gamma = cayley_graph(G, _connection(G, args.set))
    r = decompose(gamma, all_factorizations=args.all_factorizations)
    res = {
        "phi": _subgroup(r.phi),
        "k": r.k,
        "factors": [
            {
                "kernel": _subgroup(N),
                "quotient_order": Q.order,
                "quotient_connection_set": list(Q.connection.elements),
                "graph6": Q.graph.to_graph6(),
            }
            for N, Q in r.factors
        ],
        "zeta": list(r.zeta.map),
        "witnesses": [[[list(e), list(w)] for e, w in sorted(wit.items())] for wit in r.witnesses],
        "quotient_graph6": r.quotient_graph.graph.to_graph6(),
    }
    if r.all_factorizations is not None:
        res["all_factorizations"] = [[list(N.elements) for N in S] for S in r.all_factorizations]
    return {"spec": args.spec, "set": args.set, "all_factorizations": args.all_factorizations}, res, []


def cmd_dihedral_classify(args):
    G = build_dihedral(args.n)
    S = parse_connection_set(G, args.set)
    cls = classify_4valent(args.n, S)
    res = {"set": list(S), "class": cls.to_dict()}
    if cls.kind != "NotNET":
        st = aut_gc_structure(args.n, cls)
        res["aut_gc"] = {"label": st.label, "order": st.order, "generators": [list(g) for g in st.generators]}
    claims = [Claim.check("family match agrees with the orbit test", is_transitive_dihedral(args.n, S), cls.kind != "NotNET", "derived")]
    return {"n": args.n, "set": args.set}, res, claims


def cmd_dihedral_enumerate(args):
    rows = enumerate_4valent(args.n)
    counts: dict[str, int] = {}
    for _, cls in rows:
        counts[cls.kind] = counts.get(cls.kind, 0) + 1
    res = {
        "orbits": [{"representative": list(C), "class": cls.to_dict()} for C, cls in rows],
        "counts": dict(sorted(counts.items())),
    }
    return {"n": args.n}, res, []


def cmd_dihedral_mersenne(args):
    t = mersenne_family(args.p, args.q)
    n = t[0]
    check = new_family_valid(*t)
    cls = classify_4valent(n, new_family_set(n, *t[1:4]))
    res = {
        "params": dict(zip(("n", "i", "j", "k", "ell", "m"), t)),
        "clauses": dict(check.clauses),
        "class": cls.to_dict(),
    }
    claims = [
        Claim.check("new-family conditions hold", True, bool(check), "derived"),
        Claim.check("classified as NewFamily", "NewFamily", cls.kind, "derived"),
        Claim.check("no automorphic image in the Talebi families", True, new_family_not_talebi(n, t[1:]), "derived"),
    ]
    return {"p": args.p, "q": args.q}, res, claims


def cmd_casebook_run(args):
    ids = [args.case] if args.case else sorted(CASES)
    reports = [run_case(c) for c in ids]
    claims = []
    for rep in reports:
        claims.extend(rep.claims)
        if rep.error:
            claims.append(Claim(f"{rep.case_id}: case completed", None, rep.error, False, "derived"))
    res = {"cases": [rep.to_dict() for rep in reports]}
    return {"case": args.case}, res, claims


# --------------------------------------------------------------- parser

def _add_globals(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--json", action="store_true", default=default, help="print a JSON report")
    p.add_argument("--order-cap", type=int, default=default, help="largest group order to accept")
    p.add_argument("--seed", type=int, default=default, help="reserved; every algorithm is deterministic")


class _Sub:
    """Subparser factory that attaches the shared global flags to every leaf."""

    def __init__(self, action, common):
        self.action, self.common = action, common

    def add_parser(self, name, **kw):
        return self.action.add_parser(name, parents=[self.common], **kw)

    def nested(self, name, dest="action"):
        return _Sub(self.action.add_parser(name).add_subparsers(dest=dest, required=True), self.common)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netcay", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    _add_globals(p, argparse.SUPPRESS)
    p.set_defaults(json=False, order_cap=None, seed=None)
    # global flags may also follow the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, argparse.SUPPRESS)
    sub = _Sub(p.add_subparsers(dest="command", required=True), common)

    g = sub.nested("group")
    s = g.add_parser("show", help="basic invariants of a group")
    s.add_argument("spec")
    s.set_defaults(func=cmd_group_show)

    s = sub.add_parser("frattini", help="Phi(G;C) and the invariant normal lattice")
    s.add_argument("spec")
    s.add_argument("--set", required=True)
    s.add_argument("--oracle", action="store_true", help="cross-check with the subset oracle (|G| <= 16)")
    s.set_defaults(func=cmd_frattini)

    c = sub.nested("cayley")
    s = c.add_parser("build", help="build Cay(G;C)")
    s.add_argument("spec")
    s.add_argument("--set", required=True)
    s.add_argument("--g6", metavar="PATH", help="write graph6 to PATH")
    s.set_defaults(func=cmd_cayley_build)

    nt = sub.nested("net")
    s = nt.add_parser("test", help="normal edge-transitivity of a connected Cayley graph")
    s.add_argument("spec")
    s.add_argument("--set", required=True)
    s.set_defaults(func=cmd_net_test)

    s = sub.add_parser("decompose", help="subdirect decomposition of a NET Cayley graph")
    s.add_argument("spec")
    s.add_argument("--set", required=True)
    s.add_argument("--all-factorizations", action="store_true")
    s.set_defaults(func=cmd_decompose)

    d = sub.nested("dihedral")
    s = d.add_parser("classify", help="family of a 4-element set in D_2n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--set", required=True)
    s.set_defaults(func=cmd_dihedral_classify)
    s = d.add_parser("enumerate", help="all 4-valent NET Cayley graphs of D_2n up to Aut")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_dihedral_enumerate)
    s = d.add_parser("mersenne", help="new-family parameters from primes p, q")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=cmd_dihedral_mersenne)

    cb = sub.nested("casebook")
    s = cb.add_parser("run", help="run scripted cases")
    s.add_argument("--case", default=None)
    s.set_defaults(func=cmd_casebook_run)
    return p


def _command_name(args) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def _print_human(report: dict, out) -> None:
    print(report["command"], file=out)
    for key, val in report["results"].items():
        text = json.dumps(jsonable(val), sort_keys=True)
        if len(text) > 160:
            text = text[:157] + "..."
        print(f"  {key}: {text}", file=out)
    for c in report["claims"]:
        print(f"  [{'PASS' if c['passed'] else 'FAIL'}] {c['description']}", file=out)


def _error(args_json: bool, exc: BaseException, code: int) -> int:
    if args_json:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.order_cap is not None and args.order_cap < 1:
        return _error(args.json, UsageError("--order-cap must be positive"), 2)
    saved = limits.order_cap
    if args.order_cap is not None:
        limits.order_cap = args.order_cap
    t0 = time.perf_counter()
    try:
        inputs, results, claims = args.func(args)
    except InconsistencyDetected as exc:
        return _error(args.json, exc, 1)
    except (NetcayError, ValueError, OSError) as exc:
        return _error(args.json, exc, 2)
    finally:
        limits.order_cap = saved
    report = {
        "command": _command_name(args),
        "inputs": inputs,
        "results": results,
        "claims": _claims(claims),
        "timing_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    if args.json:
        print(dumps_report(report))
    else:
        _print_human(report, sys.stdout)
    return 0 if all(c.passed for c in claims) else 1


if __name__ == "__main__":
    sys.exit(main())
