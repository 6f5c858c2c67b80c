"""Explicit finite groups given by multiplication tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
Subsets of a group are handled internally as Python ``int`` bitmasks; the
public types expose sorted tuples.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .config import limits
from .errors import NotAGroup, NotNormal, OrderCapExceeded, SpecParseError


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class FiniteGroup:
    """A finite group on element ids ``0..order-1`` with identity ``0``.

    Instances are treated as immutable. Derived data (element orders,
    conjugacy classes, subgroup lists, the automorphism group) is cached on
    first use.
    """

    def __init__(self, mul: Sequence[Sequence[int]], label: str = "table", *, validate: bool = True):
        self.mul: list[list[int]] = [list(row) for row in mul]
        self.order = len(self.mul)
        self.label = label
        self.identity = 0
        if validate:
            _check_axioms(self.mul)
        inv = [0] * self.order
        for x, row in enumerate(self.mul):
            inv[x] = row.index(0)
        self.inv: list[int] = inv
        self.projections: tuple[CosetMap, ...] = ()
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = self.mul[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def centralizer_sizes(self) -> tuple[int, ...]:
        mul = self.mul
        n = self.order
        return tuple(sum(1 for y in range(n) if mul[x][y] == mul[y][x]) for x in range(n))

    @cached_property
    def is_abelian(self) -> bool:
        return all(c == self.order for c in self.centralizer_sizes)

    def conj(self, x: int, g: int) -> int:
        """``x^g = g^-1 x g``."""
        return self.mul[self.mul[self.inv[g]][x]][g]

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen = 0
        classes = []
        for x in range(self.order):
            if seen >> x & 1:
                continue
            cls = mask_of(self.conj(x, g) for g in range(self.order))
            seen |= cls
            classes.append(elements_of(cls))
        return tuple(classes)

    def closure_mask(self, gens: Iterable[int]) -> int:
        """Bitmask of the subgroup generated by ``gens``."""
        gens = [g for g in set(gens) if g != 0]
        mask = 1
        elems = [0]
        mul = self.mul
        i = 0
        while i < len(elems):
            row = mul[elems[i]]
            for g in gens:
                y = row[g]
                if not mask >> y & 1:
                    mask |= 1 << y
                    elems.append(y)
            i += 1
        return mask

    def is_subgroup_mask(self, mask: int) -> bool:
        if not mask & 1:
            return False
        els = elements_of(mask)
        mul = self.mul
        return all(mask >> mul[x][y] & 1 for x in els for y in els)


def _check_axioms(mul: list[list[int]]) -> None:
    n = len(mul)
    if n == 0:
        raise NotAGroup("empty table")
    full = set(range(n))
    for r, row in enumerate(mul):
        if len(row) != n:
            raise NotAGroup(f"row {r} has length {len(row)}, expected {n}")
        if set(row) != full:
            raise NotAGroup(f"row {r} is not a permutation of 0..{n - 1}")
    for c in range(n):
        if {mul[r][c] for r in range(n)} != full:
            raise NotAGroup(f"column {c} is not a permutation of 0..{n - 1}")
    if any(mul[0][x] != x or mul[x][0] != x for x in range(n)):
        raise NotAGroup("element 0 is not a two-sided identity")
    if n <= 64:
        triples: Iterable = itertools.product(range(n), repeat=3)
    else:
        rng = random.Random(n)
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(50_000))
    for x, y, z in triples:
        if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
            raise NotAGroup(f"associativity fails at triple ({x}, {y}, {z})")


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[int, ...]

    @classmethod
    def from_mask(cls, G: FiniteGroup, mask: int) -> Subgroup:
        return cls(G, elements_of(mask))

    @cached_property
    def mask(self) -> int:
        return mask_of(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __le__(self, other: Subgroup) -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.mask != other.mask

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def is_whole(self) -> bool:
        return len(self.elements) == self.parent.order

    def sort_key(self) -> tuple:
        return (len(self.elements), self.elements)


@dataclass(frozen=True)
class CosetMap:
    """The natural map ``G -> G/N`` together with the quotient group."""

    parent: FiniteGroup = field(repr=False)
    kernel: Subgroup
    quotient: FiniteGroup = field(repr=False)
    projection: tuple[int, ...]

    @cached_property
    def cosets(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.quotient.order)]
        for x, c in enumerate(self.projection):
            out[c].append(x)
        return tuple(tuple(c) for c in out)

    def __call__(self, x: int) -> int:
        return self.projection[x]

    def image(self, S: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted({self.projection[x] for x in S}))


# ---------------------------------------------------------------- builders

def build_from_table(table: Sequence[Sequence[int]], label: str = "table") -> FiniteGroup:
    """Validate a multiplication table, relabelling so that the identity is 0."""
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotAGroup("table is not square")
    if any(not (0 <= v < n) for r in rows for v in r):
        raise NotAGroup("table entry out of range")
    e = next((x for x in range(n) if rows[x] == list(range(n))), None)
    if e is None:
        raise NotAGroup("no left identity element")
    if e != 0:
        perm = list(range(n))
        perm[0], perm[e] = e, 0
        # perm is an involution, so it is its own inverse
        rows = [[perm[rows[perm[x]][perm[y]]] for y in range(n)] for x in range(n)]
    return FiniteGroup(rows, label)


def build_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    return FiniteGroup([[(x + y) % n for y in range(n)] for x in range(n)], f"cyclic:{n}", validate=False)


def dihedral_mul(n: int, x: int, y: int) -> int:
    """Product in D_2n with ids a^i -> i and b.a^i -> n+i."""
    if x < n:
        return (x + y) % n if y < n else n + (y - n - x) % n
    i = x - n
    return n + (i + y) % n if y < n else (y - n - i) % n


def build_dihedral(n: int) -> FiniteGroup:
    """D_2n = <a, b | a^n = b^2 = 1, bab = a^-1>; id i is a^i, id n+i is b.a^i."""
    if n < 2:
        raise ValueError("dihedral group needs n >= 2")
    m = 2 * n
    table = [[dihedral_mul(n, x, y) for y in range(m)] for x in range(m)]
    return FiniteGroup(table, f"dihedral:{n}", validate=False)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def build_elementary_abelian(p: int, k: int) -> FiniteGroup:
    """(Z_p)^k; a vector (x_1..x_k) has id sum x_i p^(k-i), first coordinate most significant."""
    if not _is_prime(p) or k < 1:
        raise ValueError("elementary abelian group needs a prime p and k >= 1")
    n = p**k
    vecs = [to_vector(x, p, k) for x in range(n)]
    table = [[from_vector([(a + b) % p for a, b in zip(vecs[x], vecs[y])], p) for y in range(n)] for x in range(n)]
    return FiniteGroup(table, f"elemab:{p}^{k}", validate=False)


def to_vector(x: int, p: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(x % p)
        x //= p
    return tuple(reversed(out))


def from_vector(v: Sequence[int], p: int) -> int:
    x = 0
    for c in v:
        x = x * p + c
    return x


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with pair encoding ``id = idG * |H| + idH``."""
    h = H.order
    n = G.order * h
    gm, hm = G.mul, H.mul
    table = [[gm[x // h][y // h] * h + hm[x % h][y % h] for y in range(n)] for x in range(n)]
    P = FiniteGroup(table, f"product({G.label},{H.label})", validate=False)
    first_kernel = Subgroup(P, tuple(range(h)))
    second_kernel = Subgroup(P, tuple(g * h for g in range(G.order)))
    P.projections = (quotient(P, first_kernel), quotient(P, second_kernel))
    return P


# ------------------------------------------------------------ subgroups

def _check_cap(G: FiniteGroup, cap: int | None) -> None:
    cap = limits.order_cap if cap is None else cap
    if G.order > cap:
        raise OrderCapExceeded(f"|G| = {G.order} exceeds the order cap {cap}")


def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    return Subgroup.from_mask(G, G.closure_mask(S))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    m = H.mask
    return all(m >> G.conj(x, g) & 1 for x in H.elements for g in range(G.order))


def normal_closure_mask(G: FiniteGroup, S: Iterable[int]) -> int:
    classes = G._cache.get("class_of")
    if classes is None:
        classes = [0] * G.order
        for cls in G.conjugacy_classes:
            m = mask_of(cls)
            for x in cls:
                classes[x] = m
        G._cache["class_of"] = classes
    m = 0
    for x in S:
        m |= classes[x]
    return G.closure_mask(elements_of(m))


def all_normal_subgroups(G: FiniteGroup, cap: int | None = None) -> list[Subgroup]:
    """Every normal subgroup, sorted by (size, elements).

    Normal subgroups are the joins of normal closures of conjugacy classes, so
    those closures are joined pairwise until nothing new appears.
    """
    _check_cap(G, cap)
    if "normal" in G._cache:
        return G._cache["normal"]
    atoms: dict[int, tuple[int, ...]] = {}
    for cls in G.conjugacy_classes:
        atoms.setdefault(normal_closure_mask(G, cls), cls)
    found = {1: ()}
    frontier = [1]
    while frontier:
        nxt = []
        for N in frontier:
            for A, agens in atoms.items():
                if A & N == A:
                    continue
                gens = found[N] + agens
                J = G.closure_mask(gens)
                if J not in found:
                    found[J] = gens
                    nxt.append(J)
        frontier = nxt
    out = sorted((Subgroup.from_mask(G, m) for m in found), key=Subgroup.sort_key)
    G._cache["normal"] = out
    return out


def all_subgroups(G: FiniteGroup, cap: int | None = None) -> list[Subgroup]:
    """Every subgroup, sorted by (size, elements). Exponential in general."""
    _check_cap(G, cap)
    if "subgroups" in G._cache:
        return G._cache["subgroups"]
    cyclic: dict[int, int] = {}
    for x in range(G.order):
        cyclic.setdefault(G.closure_mask([x]), x)
    found: dict[int, tuple[int, ...]] = {m: (x,) for m, x in cyclic.items()}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for Z, z in cyclic.items():
                if Z & H == Z:
                    continue
                gens = found[H] + (z,)
                J = G.closure_mask(gens)
                if J not in found:
                    found[J] = gens
                    nxt.append(J)
        frontier = nxt
    out = sorted((Subgroup.from_mask(G, m) for m in found), key=Subgroup.sort_key)
    G._cache["subgroups"] = out
    return out


def maximal_members(subs: Sequence[Subgroup]) -> list[Subgroup]:
    """Inclusion-maximal members of a list of subgroups, order preserved."""
    masks = [s.mask for s in subs]
    out = []
    for s, m in zip(subs, masks):
        if not any(o != m and o & m == m for o in masks):
            out.append(s)
    return out


def maximal_subgroups(G: FiniteGroup, cap: int | None = None) -> list[Subgroup]:
    proper = [H for H in all_subgroups(G, cap) if not H.is_whole()]
    return maximal_members(proper)


def frattini_subgroup(G: FiniteGroup, cap: int | None = None) -> Subgroup:
    """Intersection of all maximal proper subgroups (G itself when G is trivial)."""
    m = G.full_mask
    for M in maximal_subgroups(G, cap):
        m &= M.mask
    return Subgroup.from_mask(G, m)


def intersect(subs: Iterable[Subgroup], G: FiniteGroup) -> Subgroup:
    m = G.full_mask
    for s in subs:
        m &= s.mask
    return Subgroup.from_mask(G, m)


def quotient(G: FiniteGroup, N: Subgroup) -> CosetMap:
    """The quotient G/N with coset ids ordered by their least element."""
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.label}")
    proj = [-1] * G.order
    reps = []
    for x in range(G.order):
        if proj[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for y in N.elements:
            proj[G.mul[x][y]] = c
    table = [[proj[G.mul[r][s]] for s in reps] for r in reps]
    Q = FiniteGroup(table, f"{G.label}/N{N.order}", validate=False)
    return CosetMap(G, N, Q, tuple(proj))


def is_characteristically_simple(G: FiniteGroup, cap: int | None = None) -> bool:
    """True iff no normal subgroup other than 1 and G is Aut(G)-invariant."""
    from .automorphism import automorphism_group, is_invariant_subgroup

    A = automorphism_group(G, order_cap=cap)
    return all(
        N.is_trivial() or N.is_whole() or not is_invariant_subgroup(N, A)
        for N in all_normal_subgroups(G, cap)
    )


is_characteristic_decomposition_target = is_characteristically_simple


# ------------------------------------------------------- spec language

def read_table_file(path: str | Path) -> list[list[int]]:
    """Line 1 is the order n; the next n lines hold row g of the table."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        n = int(lines[0][0])
        rows = [[int(v) for v in ln] for ln in lines[1 : n + 1]]
    except (IndexError, ValueError) as exc:
        raise SpecParseError(f"malformed table file {path}: {exc}") from exc
    if len(rows) != n:
        raise SpecParseError(f"table file {path} declares order {n} but has {len(rows)} rows")
    return rows


def write_table_file(G: FiniteGroup, path: str | Path) -> None:
    body = "\n".join(" ".join(map(str, row)) for row in G.mul)
    Path(path).write_text(f"{G.order}\n{body}\n")


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_group_spec(spec: str) -> FiniteGroup:
    """Parse ``cyclic:N``, ``dihedral:N``, ``elemab:P^K``, ``product(A,B)`` or ``table:PATH``."""
    s = spec.strip()
    try:
        if s.startswith("product(") and s.endswith(")"):
            parts = _split_top(s[len("product(") : -1])
            if len(parts) != 2:
                raise SpecParseError(f"product needs two arguments: {spec!r}")
            return direct_product(parse_group_spec(parts[0]), parse_group_spec(parts[1]))
        kind, _, arg = s.partition(":")
        if kind == "cyclic":
            return build_cyclic(int(arg))
        if kind == "dihedral":
            return build_dihedral(int(arg))
        if kind == "elemab":
            p, _, k = arg.partition("^")
            return build_elementary_abelian(int(p), int(k))
        if kind == "table":
            return build_from_table(read_table_file(arg), label=f"table:{arg}")
    except ValueError as exc:
        raise SpecParseError(f"bad group spec {spec!r}: {exc}") from exc
    raise SpecParseError(f"unknown group spec {spec!r}")


def dihedral_degree(G: FiniteGroup) -> int | None:
    """n when G was built as ``dihedral:n``, else None."""
    if G.label.startswith("dihedral:"):
        return int(G.label.split(":", 1)[1])
    return None


# ------------------------------------------------------------ catalogue

def group_signature(G: FiniteGroup) -> tuple:
    """Cheap isomorphism invariant used to drop duplicate catalogue entries."""
    return (G.order, G.is_abelian, tuple(sorted(G.element_orders)), len(G.conjugacy_classes))


def builder_catalogue(max_order: int, min_order: int = 2) -> list[tuple[str, FiniteGroup]]:
    """Groups reachable with the builders: cyclic, dihedral, non-cyclic elementary
    abelian, and direct products of two of those, one per signature, orders in range."""
    basic: list[str] = []
    for n in range(2, max_order + 1):
        basic.append(f"cyclic:{n}")
    for n in range(3, max_order // 2 + 1):
        basic.append(f"dihedral:{n}")
    for p in range(2, max_order + 1):
        if _is_prime(p):
            k = 2
            while p**k <= max_order:
                basic.append(f"elemab:{p}^{k}")
                k += 1
    orders = {s: parse_group_spec(s).order for s in basic}
    specs = list(basic)
    for a, b in itertools.combinations_with_replacement(basic, 2):
        if orders[a] * orders[b] <= max_order:
            specs.append(f"product({a},{b})")
    seen: set = set()
    out = []
    for s in specs:
        G = parse_group_spec(s)
        if not min_order <= G.order <= max_order:
            continue
        sig = group_signature(G)
        if sig in seen:
            continue
        seen.add(sig)
        out.append((s, G))
    out.sort(key=lambda t: (t[1].order, specs.index(t[0])))
    return out


def inverse_closed_subsets(G: FiniteGroup):
    """Yield every nonempty inverse-closed subset of G minus the identity, as sorted tuples."""
    units, seen = [], set()
    for x in range(1, G.order):
        if x not in seen:
            u = tuple(sorted({x, G.inv[x]}))
            seen.update(u)
            units.append(u)
    for r in range(1, len(units) + 1):
        for combo in itertools.combinations(units, r):
            yield tuple(sorted(e for u in combo for e in u))
