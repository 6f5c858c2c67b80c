"""Cayley graphs, normal quotient graphs and the subdirect decomposition.

Vertex ids of a Cayley graph are the element ids of its group; the edge
{g, h} is present when g * h^-1 lies in the connection set.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .automorphism import is_invariant_subgroup
from .config import limits
from .errors import (
    ConnectionMeetsKernel,
    InconsistencyDetected,
    NotConnected,
    NotInLattice,
    NotNormalEdgeTransitive,
    OrderCapExceeded,
    ProductTooLarge,
)
from .frattini import (
    ConnectionSet,
    has_transitive_orbits,
    invariant_normal_lattice,
    is_generating,
    make_connection_set,
)
from .groups import (
    CosetMap,
    FiniteGroup,
    Subgroup,
    direct_product,
    is_characteristically_simple,
    is_normal,
    mask_of,
    quotient,
)
from .graphs import (
    SimpleGraph,
    SubdirectCheck,
    VertexMap,
    direct_product_graph,
    is_full_subdirect,
    product_index,
)


@dataclass(frozen=True)
class CayleyGraph:
    group: FiniteGroup = field(repr=False)
    connection: ConnectionSet
    graph: SimpleGraph = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def valency(self) -> int:
        return len(self.connection)


def cayley_adjacency(G: FiniteGroup, S: Iterable[int]) -> tuple[int, ...]:
    """Neighbour bitsets of Cay(G;S): the neighbours of g are the elements c*g."""
    S = list(S)
    mul = G.mul
    return tuple(mask_of(mul[c][g] for c in S) for g in range(G.order))


def cayley_graph(G: FiniteGroup, C: ConnectionSet | Iterable[int]) -> CayleyGraph:
    if not isinstance(C, ConnectionSet):
        C = make_connection_set(G, C)
    return CayleyGraph(G, C, SimpleGraph(G.order, cayley_adjacency(G, C.elements)))


def _check_lattice(C: ConnectionSet, N: Subgroup) -> None:
    G = C.parent
    if N.parent is not G:
        raise NotInLattice("subgroup belongs to a different group")
    if N.is_whole():
        raise NotInLattice("N must be a proper subgroup")
    if not G.is_subgroup_mask(N.mask) or not is_normal(G, N):
        raise NotInLattice("N is not a normal subgroup")
    if not is_invariant_subgroup(N, C.aut_gc):
        raise NotInLattice("N is not Aut(G;C)-invariant")


def quotient_connection(C: ConnectionSet, N: Subgroup, *, allow_kernel_meet: bool = False) -> tuple[CosetMap, tuple[int, ...]]:
    """The coset map G -> G/N and the image set CN/N, checking N lies in A(G;C)."""
    _check_lattice(C, N)
    if C.mask & N.mask:
        if not allow_kernel_meet:
            raise ConnectionMeetsKernel("the connection set meets N; CN/N would contain the identity")
    cm = quotient(C.parent, N)
    image = tuple(x for x in cm.image(C.elements) if x != 0)
    return cm, image


def quotient_cayley(gamma: CayleyGraph, N: Subgroup, *, allow_kernel_meet: bool = False) -> CayleyGraph:
    """Cay(G/N; CN/N) for N in A(G;C).

    With ``allow_kernel_meet`` a connection set meeting N is accepted and the
    identity coset is dropped from CN/N, i.e. loops are discarded.
    """
    cm, image = quotient_connection(gamma.connection, N, allow_kernel_meet=allow_kernel_meet)
    if not image:
        raise ConnectionMeetsKernel("every element of the connection set lies in N")
    return cayley_graph(cm.quotient, image)


# ------------------------------------------------------ product identity

def _cayley_matrix(G: FiniteGroup, S: Iterable[int]) -> np.ndarray:
    mul = np.asarray(G.mul)
    inv = np.asarray(G.inv)
    diff = mul[:, inv]  # diff[g, h] = g * h^-1
    member = np.zeros(G.order, dtype=bool)
    member[list(S)] = True
    return member[diff]


@lru_cache(maxsize=64)
def _product_of(groups: tuple[FiniteGroup, ...]) -> FiniteGroup:
    P = groups[0]
    for G in groups[1:]:
        P = direct_product(P, G)
    return P


def cayley_of_product_equals_product(
    groups: Sequence[FiniteGroup],
    sets: Sequence[Iterable[int]],
    cap: int | None = None,
) -> bool:
    """Compare Cay(prod G_i; prod C_i) with prod Cay(G_i; C_i) under the tuple encoding."""
    if len(groups) != len(sets) or not groups:
        raise ValueError("need one connection set per factor group")
    cap = limits.graph_cap if cap is None else cap
    total = 1
    for G in groups:
        total *= G.order
    if total > cap:
        raise ProductTooLarge(f"product has {total} vertices, cap is {cap}")
    sets = [sorted(set(S)) for S in sets]
    P = _product_of(tuple(groups))
    sizes = [G.order for G in groups]
    prod_set = [product_index(t, sizes) for t in itertools.product(*sets)]
    lhs = _cayley_matrix(P, prod_set)
    rhs = np.ones((1, 1), dtype=bool)
    for G, S in zip(groups, sets):
        rhs = np.kron(rhs, _cayley_matrix(G, S))
    return bool(np.array_equal(lhs, rhs))


# ------------------------------------------------------ NET and decompose

def is_normal_edge_transitive(gamma: CayleyGraph) -> bool:
    if not is_generating(gamma.connection):
        raise NotConnected("the Cayley graph is disconnected")
    return has_transitive_orbits(gamma.connection)


@dataclass(frozen=True)
class ZetaMap:
    """g.Phi -> (g.N_1, ..., g.N_k) on quotient ids, with product encoding."""

    source: CosetMap = field(repr=False)
    targets: tuple[CosetMap, ...] = field(repr=False)
    images: tuple[tuple[int, ...], ...]
    encoded: tuple[int, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(t.quotient.order for t in self.targets)

    def is_bijective(self) -> bool:
        total = 1
        for s in self.sizes:
            total *= s
        return len(set(self.encoded)) == len(self.encoded) == total

    def is_homomorphism(self) -> bool:
        Q = self.source.quotient
        for x in range(Q.order):
            for y in range(Q.order):
                z = Q.mul[x][y]
                for t, tm in enumerate(self.targets):
                    if tm.quotient.mul[self.images[x][t]][self.images[y][t]] != self.images[z][t]:
                        return False
        return True

    def is_group_isomorphism(self) -> bool:
        return self.is_bijective() and self.is_homomorphism()


def zeta_map(G: FiniteGroup, phi: Subgroup, Ns: Sequence[Subgroup]) -> ZetaMap:
    src = quotient(G, phi)
    tgts = tuple(quotient(G, N) for N in Ns)
    for N in Ns:
        if not phi <= N:
            raise InconsistencyDetected("Phi is not contained in every factor kernel")
    reps = [coset[0] for coset in src.cosets]
    images = tuple(tuple(t.projection[r] for t in tgts) for r in reps)
    sizes = [t.quotient.order for t in tgts]
    encoded = tuple(product_index(im, sizes) for im in images)
    return ZetaMap(src, tgts, images, encoded)


@dataclass(frozen=True)
class DecompositionReport:
    input: CayleyGraph = field(repr=False)
    phi: Subgroup
    factors: tuple[tuple[Subgroup, CayleyGraph], ...]
    zeta: VertexMap = field(repr=False)
    witnesses: tuple[dict, ...] = field(repr=False)
    quotient_graph: CayleyGraph = field(repr=False)
    product_graph: SimpleGraph = field(repr=False)
    all_factorizations: tuple[tuple[Subgroup, ...], ...] | None = None

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def kernels(self) -> tuple[Subgroup, ...]:
        return tuple(N for N, _ in self.factors)


def _valid_factor_sets(G: FiniteGroup, maximal: Sequence[Subgroup], phi: Subgroup):
    """Subsets S of A_max, by size then lexicographic order, with meet Phi and full index product."""
    target = G.order // phi.order
    for size in range(1, len(maximal) + 1):
        for S in itertools.combinations(maximal, size):
            m = G.full_mask
            idx = 1
            for N in S:
                m &= N.mask
                idx *= G.order // N.order
            if m == phi.mask and idx == target:
                yield S


def decompose(gamma: CayleyGraph, *, all_factorizations: bool = False, cap: int | None = None) -> DecompositionReport:
    """Decompose a connected normal edge-transitive Cayley graph over A_max(G;C).

    The chosen factor set is the first valid one by size, then by the fixed
    order of A_max. Every structural claim is re-verified before returning.
    """
    C = gamma.connection
    G = gamma.group
    cap = limits.order_cap if cap is None else cap
    if G.order > cap:
        raise OrderCapExceeded(f"|G| = {G.order} exceeds the order cap {cap}")
    if not is_normal_edge_transitive(gamma):
        raise NotNormalEdgeTransitive("the connection set is not transitive")
    lat = invariant_normal_lattice(C, cap)
    phi = lat.phi
    maximal = sorted(lat.maximal, key=Subgroup.sort_key)
    gen = _valid_factor_sets(G, maximal, phi)
    chosen = next(gen, None)
    if chosen is None:
        raise InconsistencyDetected("no subset of A_max(G;C) meets in Phi with the right index product")
    every = None
    if all_factorizations:
        if G.order > 48:
            raise OrderCapExceeded("listing all factorizations is limited to |G| <= 48")
        every = (chosen,) + tuple(gen)

    factors = []
    for N in chosen:
        if C.mask & N.mask:
            raise InconsistencyDetected("a transitive connection set meets a member of A_max(G;C)")
        Q = quotient_cayley(gamma, N)
        if not is_characteristically_simple(Q.group, cap):
            raise InconsistencyDetected(f"G/N for |N| = {N.order} is not characteristically simple")
        qlat = invariant_normal_lattice(Q.connection, cap)
        if len(qlat.all) != 1:
            raise InconsistencyDetected("a factor quotient has a nontrivial invariant normal subgroup")
        factors.append((N, Q))

    z = zeta_map(G, phi, chosen)
    if not z.is_group_isomorphism():
        raise InconsistencyDetected("zeta is not a group isomorphism onto the product of quotients")
    qphi = quotient_cayley(gamma, phi)
    prod = direct_product_graph([Q.graph for _, Q in factors])
    vm = VertexMap(qphi.graph, prod, z.encoded)
    if not vm.is_homomorphism():
        raise InconsistencyDetected("zeta does not map edges of the Phi-quotient to product edges")
    edges = [(z.encoded[u], z.encoded[v]) for u, v in qphi.graph.edges()]
    check: SubdirectCheck = is_full_subdirect(z.encoded, [Q.graph for _, Q in factors], edges)
    if not check:
        raise InconsistencyDetected(f"zeta image is not a full subdirect product: {check.failure}")
    return DecompositionReport(
        gamma, phi, tuple(factors), vm, check.witnesses, qphi, prod, every
    )
