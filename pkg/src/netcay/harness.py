"""Scripted scenarios that recompute published values and compare them.

Each case returns a ``CaseReport`` whose claims hold the expected value, the
computed value and whether they agree. Reports are plain data and
deterministic, so two runs serialize to identical bytes.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from importlib import resources
from math import gcd
from typing import Any, Callable

from .automorphism import automorphism_group
from .cayley import (
    cayley_graph,
    cayley_of_product_equals_product,
    decompose,
    is_normal_edge_transitive,
    quotient_cayley,
    zeta_map,
)
from .dihedral import (
    FourValentClass,
    DihedralAut,
    aut_gc_structure,
    classify_4valent,
    mersenne_family,
    new_family_not_talebi,
    new_family_set,
    new_family_valid,
    talebi_a_set,
    talebi_a_valid,
    talebi_b_set,
    talebi_b_valid,
)
from .errors import BadParameters, NetcayError, UnknownCase
from .frattini import (
    has_transitive_orbits,
    invariant_normal_lattice,
    is_generating,
    is_transitive_set,
    make_connection_set,
    normal_c_closure,
    relative_frattini,
)
from .graphs import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    direct_product_graph,
    disjoint_union,
    graph_isomorphic,
    hypercube,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    all_normal_subgroups,
    build_cyclic,
    build_dihedral,
    build_elementary_abelian,
    build_from_table,
    from_vector,
    frattini_subgroup,
    quotient,
)


@dataclass(frozen=True)
class Claim:
    description: str
    expected: Any
    computed: Any
    passed: bool
    source: str = "stated"

    @classmethod
    def check(cls, description: str, expected: Any, computed: Any, source: str = "stated") -> Claim:
        return cls(description, expected, computed, expected == computed, source)


@dataclass
class CaseReport:
    case_id: str
    claims: list[Claim] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.claims)

    def add(self, description: str, expected: Any, computed: Any, source: str = "stated") -> Claim:
        c = Claim.check(description, expected, computed, source)
        self.claims.append(c)
        return c

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "passed": self.passed,
            "error": self.error,
            "claims": [asdict(c) for c in self.claims],
            "artifacts": dict(sorted(self.artifacts.items())),
        }


# ------------------------------------------------------------ fixtures

def symmetric_group_table(d: int) -> list[list[int]]:
    """Multiplication table of Sym(d) on lexicographically ordered permutations.

    The product x*y applies x first, then y.
    """
    perms = list(itertools.permutations(range(d)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(y[x[i]] for i in range(d))] for y in perms] for x in perms]


def load_s5() -> FiniteGroup:
    from .groups import read_table_file

    path = resources.files("netcay") / "data" / "s5.table"
    with resources.as_file(path) as p:
        return build_from_table(read_table_file(p), label="table:s5")


def radical(n: int) -> int:
    m, p = 1, 2
    while n > 1:
        if n % p == 0:
            m *= p
            while n % p == 0:
                n //= p
        p += 1
    return m


def cyclic_power_subgroup(G: FiniteGroup, step: int, n: int) -> tuple[int, ...]:
    """Element ids of <a^step> inside a cyclic or dihedral group of degree n."""
    return tuple(sorted({(step * t) % n for t in range(n)}))


# --------------------------------------------------------------- cases

def case_cyclic() -> CaseReport:
    rep = CaseReport("ex2.1")
    for n in range(2, 31):
        G = build_cyclic(n)
        C = make_connection_set(G, {1, n - 1})
        expect = list(cyclic_power_subgroup(G, radical(n), n))
        rep.add(f"Z_{n}: Phi(G;C) = <a^m>, m = {radical(n)}", expect, list(relative_frattini(C).elements), "formula")
        rep.add(f"Z_{n}: Phi(G) = Phi(G;C)", expect, list(frattini_subgroup(G).elements), "formula")
    G = build_cyclic(12)
    rep.add("Z_12: Phi(G;C) has order 2", 2, relative_frattini(make_connection_set(G, {1, 11})).order)
    return rep


def case_dihedral_phi() -> CaseReport:
    rep = CaseReport("ex2.2")
    for n in range(3, 31):
        G = build_dihedral(n)
        C1 = make_connection_set(G, {1, n - 1, n})
        C2 = make_connection_set(G, {n, n + 1})
        a = list(range(n))
        a2 = list(cyclic_power_subgroup(G, 2, n))
        rep.add(f"D_{2 * n}: Phi(G;C1)", a if n % 2 else a2, list(relative_frattini(C1).elements), "formula")
        rep.add(f"D_{2 * n}: Phi(G;C2)", a, list(relative_frattini(C2).elements), "formula")
        rep.add(f"D_{2 * n}: |Aut(G;C1)| = |Aut(G;C2)| = 2", [2, 2], [C1.aut_gc.order, C2.aut_gc.order])
        s1 = next(s for s in C1.aut_gc if not s.is_identity())
        s2 = next(s for s in C2.aut_gc if not s.is_identity())
        rep.add(f"D_{2 * n}: Aut(G;C1) inverts a and fixes b", [n - 1, n], [s1(1), s1(n)])
        rep.add(f"D_{2 * n}: Aut(G;C2) inverts a and sends b to ba", [n - 1, n + 1], [s2(1), s2(n)])
        rep.add(
            f"D_{2 * n}: Phi(G) = <a^m>",
            list(cyclic_power_subgroup(G, radical(n), n)),
            list(frattini_subgroup(G).elements),
            "formula",
        )
    G = build_dihedral(6)
    C1 = make_connection_set(G, {1, 5, 6})
    lat = invariant_normal_lattice(C1)
    rep.add(
        "D_12, C1: A_max = {<a>, <a^2,b>, <a^2,ba>}",
        [[0, 1, 2, 3, 4, 5], [0, 2, 4, 6, 8, 10], [0, 2, 4, 7, 9, 11]],
        sorted(list(N.elements) for N in lat.maximal),
    )
    return rep


def case_s5(samples: int = 4, seed: int = 5) -> CaseReport:
    rep = CaseReport("ex2.3-s5")
    G = load_s5()
    rep.add("S5 fixture matches the permutation product rule", True, G.mul == symmetric_group_table(5), "derived")
    rep.add("|S5| = 120", 120, G.order)
    rep.add("|Aut(S5)| = 120", 120, automorphism_group(G).order)
    rep.add("Phi(S5) = 1", [0], list(frattini_subgroup(G).elements))
    A5 = next(N for N in all_normal_subgroups(G) if N.order == 60)
    rng = random.Random(seed)
    invol = [x for x in range(1, 120) if G.inv[x] == x]
    done = 0
    while done < samples:
        x = rng.randrange(1, 120)
        S = {x, G.inv[x], rng.choice(invol)}
        C = make_connection_set(G, S)
        if not is_generating(C):
            continue
        phi = relative_frattini(C)
        rep.add(f"S5, C = {sorted(S)}: A5 <= Phi(G;C)", True, A5 <= phi)
        done += 1
    return rep


def case_dihedral_sets() -> CaseReport:
    rep = CaseReport("ex2.5")
    for n in range(3, 13):
        G = build_dihedral(n)
        for i in range(n):
            D = make_connection_set(G, {n + i, n + (i + 1) % n})
            ok = is_transitive_set(D)
            iso = graph_isomorphic(cayley_graph(G, D).graph, cycle_graph(2 * n)) is not None
            if i in (0, n - 1):
                rep.add(f"D_{2 * n}: D_{i} transitive and Cay = C_{2 * n}", [True, True], [ok, iso])
        counts = {n + j: sum(1 for i in range(n) if j in (i, (i + 1) % n)) for j in range(n)}
        rep.add(f"D_{2 * n}: each reflection lies in two sets D_i", [2], sorted(set(counts.values())))
        Cp = make_connection_set(G, range(n, 2 * n))
        phi_n = sum(1 for k in range(1, n) if gcd(k, n) == 1)
        rep.add(f"D_{2 * n}: Aut(G;C') = Aut(G)", n * phi_n, Cp.aut_gc.order)
        iso = graph_isomorphic(cayley_graph(G, Cp).graph, complete_bipartite(n, n)) is not None
        rep.add(f"D_{2 * n}: C' transitive and Cay = K_{n},{n}", [True, True], [is_transitive_set(Cp), iso])
    return rep


def case_products() -> CaseReport:
    rep = CaseReport("lem3.1")
    Z2, Z3, D6 = build_cyclic(2), build_cyclic(3), build_dihedral(3)
    pairs = [
        ("Z2{1} x Z2{1}", [Z2, Z2], [[1], [1]]),
        ("Z2{1} x Z3{1,2}", [Z2, Z3], [[1], [1, 2]]),
        ("D6{b,ba} x Z2{1}", [D6, Z2], [[3, 4], [1]]),
        ("Z6{1,5} x Z2{1}", [build_cyclic(6), Z2], [[1, 5], [1]]),
        ("D8{all reflections} x Z3{1,2}", [build_dihedral(4), Z3], [[4, 5, 6, 7], [1, 2]]),
    ]
    for name, gs, ss in pairs:
        rep.add(f"Cay of product equals product of Cays: {name}", True, cayley_of_product_equals_product(gs, ss))
    k2 = complete_graph(2)
    two_k2 = disjoint_union(k2, k2)
    rep.add("K2 x K2 = 2K2", True, graph_isomorphic(direct_product_graph([k2, k2]), two_k2) is not None, "derived")
    rep.add("K2 x C3 = C6", True, graph_isomorphic(direct_product_graph([k2, cycle_graph(3)]), cycle_graph(6)) is not None, "derived")
    return rep


def case_z6() -> CaseReport:
    rep = CaseReport("thm1.2-z6")
    G = build_cyclic(6)
    r = decompose(cayley_graph(G, [1, 5]))
    rep.add("Phi(Z6;{1,5}) = 1", [0], list(r.phi.elements), "derived")
    rep.add("k = 2", 2, r.k, "derived")
    rep.add("kernels", [[0, 2, 4], [0, 3]], sorted(list(N.elements) for N in r.kernels), "derived")
    shapes = sorted(
        "K2" if graph_isomorphic(Q.graph, complete_graph(2)) else "C3" if graph_isomorphic(Q.graph, cycle_graph(3)) else "?"
        for _, Q in r.factors
    )
    rep.add("quotient graphs are K2 and C3", ["C3", "K2"], shapes, "derived")
    rep.add("zeta image is all of K2 x C3", 6, len(set(r.zeta.map)), "derived")
    rep.add("Cay(Z6;{1,5}) = C6 = K2 x C3", True, graph_isomorphic(r.product_graph, cycle_graph(6)) is not None, "derived")
    rep.artifacts["gamma"] = r.input.graph.to_graph6()
    return rep


def case_aut_structures() -> CaseReport:
    rep = CaseReport("prop4.3")
    cases = [
        (8, FourValentClass("TalebiA", {"i": 4}, DihedralAut(8, 1, 0), talebi_a_set(8, 4)), "D8"),
        (5, FourValentClass("TalebiB", {"k": 2}, DihedralAut(5, 1, 0), talebi_b_set(5, 2)), "Z4"),
        (6, FourValentClass("TalebiA", {"i": 3}, DihedralAut(6, 1, 0), talebi_a_set(6, 3)), "Z2xZ2"),
        (8, FourValentClass("TalebiB", {"k": 3}, DihedralAut(8, 1, 0), talebi_b_set(8, 3)), "D8"),
        (10, FourValentClass("TalebiB", {"k": 3}, DihedralAut(10, 1, 0), talebi_b_set(10, 3)), "Z4"),
    ]
    for n, cls, label in cases:
        rep.add(f"n = {n}, {cls.kind} {cls.params}: Aut(G;C)", label, aut_gc_structure(n, cls).label)
    rep.add("n = 8: {b, ba, ba^4, ba^5} lies in both families", "Overlap", classify_4valent(8, [8, 9, 12, 13]).kind)
    rep.add("talebi_a_valid(21, 7)", True, talebi_a_valid(21, 7))
    rep.add("talebi_b_valid(5, 2)", True, talebi_b_valid(5, 2))
    rep.add("i = n/2 is valid for every even n in 4..40", True, all(talebi_a_valid(n, n // 2) for n in range(4, 41, 2)))
    # two family-a parameters per set, one family-b parameter per set
    two, one = True, True
    for n in range(3, 41):
        sets_a: dict = {}
        for i in range(2, n):
            if talebi_a_valid(n, i):
                sets_a.setdefault(talebi_a_set(n, i), set()).add(i)
        two &= all(len(v) == 2 and sum(v) == n + 1 for v in sets_a.values())
        sets_b: dict = {}
        for k in range(1, n - 1):
            if talebi_b_valid(n, k):
                sets_b.setdefault(talebi_b_set(n, k), set()).add(k)
        one &= all(len(v) == 1 for v in sets_b.values())
    rep.add("n in 3..40: each family-a set has exactly two parameters i, n+1-i", True, two)
    rep.add("n in 3..40: each family-b set has exactly one parameter", True, one)
    return rep


def case_mersenne() -> CaseReport:
    rep = CaseReport("prop4.7")
    expect = {(5, 3): (30, 5, 3, 8, 11, 19), (11, 3): (66, 11, 3, 14, 23, 43)}
    for p, q in [(5, 3), (11, 3), (13, 7), (23, 3)]:
        t = mersenne_family(p, q)
        if (p, q) in expect:
            rep.add(f"p = {p}, q = {q}: parameters", list(expect[(p, q)]), list(t), "formula")
        n = t[0]
        rep.add(f"p = {p}, q = {q}: conditions hold", True, bool(new_family_valid(*t)))
        cls = classify_4valent(n, new_family_set(n, *t[1:4]))
        rep.add(f"p = {p}, q = {q}: classified as NewFamily", "NewFamily", cls.kind)
        rep.add(f"p = {p}, q = {q}: no image in the Talebi families", True, new_family_not_talebi(n, t[1:]))
        rep.add(f"p = {p}, q = {q}: Aut(G;C) = Z2xZ2", "Z2xZ2", aut_gc_structure(n, cls).label)
    try:
        mersenne_family(7, 2)
        got = "accepted"
    except BadParameters:
        got = "BadParameters"
    rep.add("p = 7 is Mersenne and rejected", "BadParameters", got)
    return rep


def example_51():
    """The group Z2^4, connection set and named subgroups of the non-NET example."""
    G = build_elementary_abelian(2, 4)
    v = lambda *xs: from_vector(xs, 2)  # noqa: E731
    a1, a2 = v(1, 0, 1, 1), v(0, 1, 1, 1)
    b1, b2, b3 = v(1, 0, 1, 0), v(0, 1, 0, 1), v(1, 1, 1, 1)
    C = make_connection_set(G, [a1, a2, b1, b2, b3])
    M = Subgroup.from_mask(G, G.closure_mask([a1, a2]))
    N = Subgroup.from_mask(G, G.closure_mask([b1, b2, a1 ^ a2]))
    return G, C, {"a1": a1, "a2": a2, "b1": b1, "b2": b2, "b3": b3}, M, N


def case_example_51() -> CaseReport:
    rep = CaseReport("ex5.1")
    G, C, el, M, N = example_51()
    a1, a2, b3 = el["a1"], el["a2"], el["b3"]
    rep.add("C generates G", True, is_generating(C))
    rep.add("|Aut(G;C)| = 12", 12, C.aut_gc.order)
    rep.add("orbit sizes {2,3}", [2, 3], sorted(len(o) for o in C.orbit_partition))
    rep.add("orbits are A and B", sorted([sorted([a1, a2]), sorted([el["b1"], el["b2"], b3])]), sorted(sorted(o) for o in C.orbit_partition))
    rep.add("C is not transitive", False, has_transitive_orbits(C))
    lat = invariant_normal_lattice(C)
    maximal = sorted(list(X.elements) for X in lat.maximal)
    rep.add("M in A_max(G;C)", True, list(M.elements) in maximal)
    rep.add("N in A_max(G;C)", True, list(N.elements) in maximal)
    rep.add("Phi(G;C) = {0, a1+a2} = {0, (1,1,0,0)}", [0, from_vector((1, 1, 0, 0), 2)], list(lat.phi.elements))
    rep.add("Phi(G;C) = M meet N", list(lat.phi.elements), sorted(set(M.elements) & set(N.elements)))
    rep.add("normal C-closure of {a1} = {a1, a2}", sorted([a1, a2]), list(normal_c_closure(C, [a1])))
    gamma = cayley_graph(G, C)
    rep.add("Cay(G;C) is not normal edge-transitive", False, is_normal_edge_transitive(gamma))
    gm = quotient_cayley(gamma, M, allow_kernel_meet=True)
    gn = quotient_cayley(gamma, N, allow_kernel_meet=True)
    gp = quotient_cayley(gamma, lat.phi)
    rep.add("Gamma_M = K4", True, graph_isomorphic(gm.graph, complete_graph(4)) is not None)
    rep.add("Gamma_N = K2", True, graph_isomorphic(gn.graph, complete_graph(2)) is not None)
    rep.add("Gamma_Phi is 4-regular on 8 vertices", [8, True], [gp.graph.vertex_count, gp.graph.is_regular(4)])
    rep.add("Gamma_Phi = complement of Q3", True, graph_isomorphic(gp.graph, hypercube(3).complement()) is not None)
    z = zeta_map(G, lat.phi, [M, N])
    rep.add("g -> (gM, gN) induces a group isomorphism G/Phi -> G/M x G/N", True, z.is_group_isomorphism())
    prod = direct_product_graph([gm.graph, gn.graph])
    src = quotient(G, lat.phi)
    u, w = src.projection[0], src.projection[b3]
    rep.add("{0+Phi, b3+Phi} is an edge of Gamma_Phi", True, gp.graph.has_edge(u, w))
    rep.add("its zeta-image is not an edge of Gamma_M x Gamma_N", False, prod.has_edge(z.encoded[u], z.encoded[w]))
    rep.add("it projects to a loop of Gamma_N", True, z.images[u][1] == z.images[w][1])
    rep.artifacts["gamma"] = gamma.graph.to_graph6()
    rep.artifacts["gamma_phi"] = gp.graph.to_graph6()
    return rep


CASES: dict[str, Callable[[], CaseReport]] = {
    "ex2.1": case_cyclic,
    "ex2.2": case_dihedral_phi,
    "ex2.3-s5": case_s5,
    "ex2.5": case_dihedral_sets,
    "lem3.1": case_products,
    "thm1.2-z6": case_z6,
    "prop4.3": case_aut_structures,
    "prop4.7": case_mersenne,
    "ex5.1": case_example_51,
}


def run_case(case_id: str) -> CaseReport:
    if case_id not in CASES:
        raise UnknownCase(f"unknown case {case_id!r}; known: {', '.join(sorted(CASES))}")
    try:
        return CASES[case_id]()
    except NetcayError as exc:
        return CaseReport(case_id, error=f"{type(exc).__name__}: {exc}")


def run_all() -> list[CaseReport]:
    return [run_case(c) for c in sorted(CASES)]


def jsonable(obj: Any) -> Any:
    """Recursively convert tuples, sets and dict keys to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return obj.item()
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2)
