"""Connection sets and the relative Frattini subgroup Phi(G;C).

Phi(G;C) is the intersection of the inclusion-maximal members of A(G;C), the
proper normal subgroups of G that are invariant under Aut(G;C).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .automorphism import (
    AutGroup,
    Automorphism,
    is_invariant_subgroup,
    orbits,
    stabilizer_search,
)
from .config import limits
from .errors import (
    ContainsIdentity,
    EmptyConnectionSet,
    InconsistencyDetected,
    NonConstantIntersection,
    NotGenerating,
    NotInverseClosed,
    NotTransitive,
    OrderCapExceeded,
    PreconditionFailed,
    SpecParseError,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    all_normal_subgroups,
    dihedral_degree,
    direct_product,
    elements_of,
    mask_of,
    maximal_members,
    quotient,
    to_vector,
)


@dataclass(frozen=True)
class ConnectionSet:
    parent: FiniteGroup = field(repr=False, compare=False)
    elements: tuple[int, ...]
    aut_gc: AutGroup = field(repr=False, compare=False)
    orbit_partition: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    @cached_property
    def mask(self) -> int:
        return mask_of(self.elements)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        """For each element, the mask of its normal C-class (orbit under G-conjugation and Aut(G;C))."""
        G = self.parent
        gens = _group_generators(G)
        out = [0] * G.order
        for x in range(G.order):
            if out[x]:
                continue
            m = 1 << x
            queue = [x]
            while queue:
                y = queue.pop()
                imgs = [G.conj(y, g) for g in gens] + [s.image[y] for s in self.aut_gc]
                for z in imgs:
                    if not m >> z & 1:
                        m |= 1 << z
                        queue.append(z)
            for y in elements_of(m):
                out[y] = m
        return tuple(out)


def _group_generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    H = 1
    for x in range(1, G.order):
        if not H >> x & 1:
            gens.append(x)
            H = G.closure_mask(gens)
    return gens


def make_connection_set(G: FiniteGroup, S: Iterable[int]) -> ConnectionSet:
    """Validate an inverse-closed subset of G minus the identity and cache Aut(G;C)."""
    els = tuple(sorted(set(S)))
    if not els:
        raise EmptyConnectionSet("connection set is empty")
    if any(not 0 <= x < G.order for x in els):
        raise PreconditionFailed(f"element id out of range for {G.label}")
    if 0 in els:
        raise ContainsIdentity("connection set contains the identity")
    m = mask_of(els)
    bad = [x for x in els if not m >> G.inv[x] & 1]
    if bad:
        raise NotInverseClosed(f"inverse of element {bad[0]} is missing")
    A = stabilizer_search(G, els)
    return ConnectionSet(G, els, A, tuple(orbits(A, els)))


def is_generating(C: ConnectionSet) -> bool:
    return C.parent.closure_mask(C.elements) == C.parent.full_mask


def has_transitive_orbits(C: ConnectionSet) -> bool:
    """Aut(G;C) is transitive on C, or has two orbits exchanged by inversion."""
    parts = C.orbit_partition
    if len(parts) == 1:
        return True
    if len(parts) == 2:
        inv = C.parent.inv
        return mask_of(inv[x] for x in parts[0]) == mask_of(parts[1])
    return False


def is_transitive_set(C: ConnectionSet) -> bool:
    if not is_generating(C):
        raise NotGenerating("connection set does not generate the group")
    return has_transitive_orbits(C)


@dataclass(frozen=True)
class InvariantNormalLattice:
    parent: FiniteGroup = field(repr=False, compare=False)
    connection: ConnectionSet = field(repr=False, compare=False)
    all: tuple[Subgroup, ...]
    maximal: tuple[Subgroup, ...]
    phi: Subgroup


def invariant_normal_lattice(C: ConnectionSet, cap: int | None = None) -> InvariantNormalLattice:
    G = C.parent
    members = tuple(
        N for N in all_normal_subgroups(G, cap) if not N.is_whole() and is_invariant_subgroup(N, C.aut_gc)
    )
    maximal = tuple(maximal_members(members))
    m = G.full_mask
    for N in maximal:
        m &= N.mask
    return InvariantNormalLattice(G, C, members, maximal, Subgroup.from_mask(G, m))


def relative_frattini(C: ConnectionSet, cap: int | None = None) -> Subgroup:
    return invariant_normal_lattice(C, cap).phi


def normal_c_closure(C: ConnectionSet, X: Iterable[int]) -> tuple[int, ...]:
    """Smallest superset of X closed under G-conjugation and Aut(G;C)."""
    cls = C.class_of
    m = 0
    for x in X:
        m |= cls[x]
    return elements_of(m)


def _is_normal_c_closed(C: ConnectionSet, m: int) -> bool:
    cls = C.class_of
    return all(cls[x] & m == cls[x] for x in elements_of(m))


def check_removal_property(C: ConnectionSet, X: Iterable[int]) -> bool:
    """Removing Phi(G;C) from a normal C-closed generating set keeps both properties."""
    G = C.parent
    xm = mask_of(X)
    if not _is_normal_c_closed(C, xm):
        raise PreconditionFailed("X is not normal C-closed")
    if G.closure_mask(elements_of(xm)) != G.full_mask:
        raise PreconditionFailed("X does not generate G")
    ym = xm & ~relative_frattini(C).mask
    return _is_normal_c_closed(C, ym) and G.closure_mask(elements_of(ym)) == G.full_mask


def phi_oracle_members(C: ConnectionSet, cap: int | None = None) -> tuple[int, ...]:
    """All y such that, for every X in G, if the normal C-closure of X+{y}
    generates G then so does the normal C-closure of X.

    Quantifies over all 2^|G| subsets X; the generation test is memoised on the
    set of normal C-classes that X meets, which determines the closure.
    """
    G = C.parent
    cap = limits.oracle_cap if cap is None else cap
    n = G.order
    if n > cap:
        raise OrderCapExceeded(f"subset oracle needs |G| <= {cap}, got {n}")
    cls = C.class_of
    reps = sorted({m for m in cls}, key=lambda m: (m & -m))
    index = {m: i for i, m in enumerate(reps)}
    bit = np.array([1 << index[cls[x]] for x in range(n)], dtype=np.int64)
    # class-mask of every subset X of G
    cm = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        cm[1 << b : 2 << b] = cm[: 1 << b] | bit[b]
    k = len(reps)
    gen = np.zeros(1 << k, dtype=bool)
    for T in range(1 << k):
        els: list[int] = []
        t = T
        while t:
            low = t & -t
            els.extend(elements_of(reps[low.bit_length() - 1]))
            t ^= low
        gen[T] = G.closure_mask(els) == G.full_mask
    gen_x = gen[cm]
    out = []
    for y in range(n):
        gen_xy = gen[cm | bit[y]]
        if not np.any(gen_xy & ~gen_x):
            out.append(y)
    return tuple(out)


def phi_membership_oracle(C: ConnectionSet, y: int, cap: int | None = None) -> bool:
    return y in phi_oracle_members(C, cap)


@dataclass(frozen=True)
class CosetIntersectionProfile:
    connection: ConnectionSet = field(repr=False, compare=False)
    ell: int
    nonempty_cosets: tuple[int, ...]


def coset_profile(C: ConnectionSet) -> CosetIntersectionProfile:
    """The constant size ell of every nonempty intersection of C with a Phi(G;C)-coset."""
    if not is_transitive_set(C):
        raise NotTransitive("coset profile needs a transitive connection set")
    G = C.parent
    phi = relative_frattini(C)
    proj = quotient(G, phi).projection
    counts: dict[int, int] = {}
    for c in C.elements:
        counts[proj[c]] = counts.get(proj[c], 0) + 1
    if 0 in counts:
        raise InconsistencyDetected("a transitive connection set meets Phi(G;C)")
    sizes = set(counts.values())
    if len(sizes) != 1:
        raise NonConstantIntersection(f"coset intersection sizes {sorted(sizes)}")
    return CosetIntersectionProfile(C, sizes.pop(), tuple(sorted(counts)))


def transitive_set_image(C: ConnectionSet, sigma: Automorphism) -> ConnectionSet:
    D = make_connection_set(C.parent, sigma.apply_set(C.elements))
    if has_transitive_orbits(D) != has_transitive_orbits(C) or is_generating(D) != is_generating(C):
        raise InconsistencyDetected("an automorphism changed the transitivity of a connection set")
    return D


def product_transitive_set(C: ConnectionSet, D: ConnectionSet) -> ConnectionSet:
    """The set C x D on G x H; its Aut-orbits satisfy the transitivity condition.

    Generation of G x H by C x D is not implied (take C = D = {1} in Z2) and is
    left to the caller to test with ``is_generating``.
    """
    if not (is_transitive_set(C) and is_transitive_set(D)):
        raise PreconditionFailed("both factors must be transitive generating sets")
    if len(C.orbit_partition) != 1 and len(D.orbit_partition) != 1:
        raise PreconditionFailed("neither Aut(G;C) nor Aut(H;D) is transitive; the product has four orbits")
    G, H = C.parent, D.parent
    P = direct_product(G, H)
    h = H.order
    E = make_connection_set(P, [c * h + d for c in C.elements for d in D.elements])
    if not has_transitive_orbits(E):
        raise InconsistencyDetected("product of transitive sets lost the orbit condition")
    return E


def maximal_core(C: ConnectionSet, M: Subgroup) -> Subgroup:
    """Intersection of all images (M^g)^sigma over g in G and sigma in Aut(G;C)."""
    G = C.parent
    m = G.full_mask
    for g in range(G.order):
        mg = mask_of(G.conj(x, g) for x in M.elements)
        for s in C.aut_gc:
            m &= s.apply_mask(mg)
    return Subgroup.from_mask(G, m)


# ------------------------------------------------------------- syntax

_DIH = re.compile(r"^(b\.?)?(?:a(?:\^(-?\d+))?)?$")


def parse_element(G: FiniteGroup, token: str) -> int:
    """Element token: a raw id, or for dihedral groups ``a^I`` / ``b.a^I`` / ``b``.

    Digit-only tokens are always raw ids, so ``1`` in a dihedral group is ``a``.
    """
    tok = token.strip()
    if re.fullmatch(r"\d+", tok):
        x = int(tok)
        if x >= G.order:
            raise SpecParseError(f"element id {x} out of range")
        return x
    n = dihedral_degree(G)
    if n is not None:
        m = _DIH.match(tok)
        if m and tok:
            refl = m.group(1) is not None
            has_a = "a" in tok
            e = int(m.group(2)) if m.group(2) is not None else (1 if has_a else 0)
            return n + e % n if refl else e % n
    raise SpecParseError(f"cannot parse element token {token!r} for {G.label}")


def parse_connection_set(G: FiniteGroup, expr: str) -> tuple[int, ...]:
    expr = expr.strip()
    n = dihedral_degree(G)
    if expr == "all-reflections":
        if n is None:
            raise SpecParseError("all-reflections needs a dihedral group")
        return tuple(range(n, 2 * n))
    return tuple(sorted({parse_element(G, t) for t in expr.split(",") if t.strip()}))


def element_name(G: FiniteGroup, x: int) -> str:
    n = dihedral_degree(G)
    if n is not None:
        if x == 0:
            return "1"
        return f"a^{x}" if x < n else f"b.a^{x - n}"
    if G.label.startswith("elemab:"):
        p, k = map(int, G.label.split(":", 1)[1].split("^"))
        return "(" + ",".join(map(str, to_vector(x, p, k))) + ")"
    return str(x)
