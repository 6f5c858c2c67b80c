"""Small undirected simple graphs stored as per-vertex adjacency bitsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .config import limits
from .errors import GraphTooLarge, ProductTooLarge, SpecParseError
from .groups import elements_of


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    adjacency: tuple[int, ...]

    def __post_init__(self):
        if len(self.adjacency) != self.vertex_count:
            raise ValueError("adjacency length does not match vertex count")
        for v, row in enumerate(self.adjacency):
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in elements_of(row):
                if not self.adjacency[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return elements_of(self.adjacency[v])

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count() if hasattr(int, "bit_count") else bin(self.adjacency[v]).count("1")

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(bin(r).count("1") for r in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in self.neighbors(u) if u < v]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    def is_regular(self, k: int | None = None) -> bool:
        ds = set(self.degrees)
        return len(ds) <= 1 and (k is None or ds <= {k})

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in elements_of(frontier):
                nxt |= self.adjacency[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.vertex_count) - 1

    def complement(self) -> SimpleGraph:
        full = (1 << self.vertex_count) - 1
        return SimpleGraph(self.vertex_count, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adjacency)))

    def induced(self, vertices: Sequence[int]) -> SimpleGraph:
        index = {v: i for i, v in enumerate(vertices)}
        return SimpleGraph.from_edges(
            len(vertices), [(index[u], index[v]) for u in vertices for v in self.neighbors(u) if v in index and u < v]
        )

    def edge_list_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())

    # graph6 ---------------------------------------------------------------

    def to_graph6(self) -> str:
        n = self.vertex_count
        if n < 63:
            head = chr(n + 63)
        elif n < 258048:
            head = "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
        else:
            raise GraphTooLarge("graph6 encoding supports fewer than 258048 vertices here")
        bits = [1 if self.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
        bits += [0] * (-len(bits) % 6)
        body = "".join(chr(int("".join(map(str, bits[k : k + 6])), 2) + 63) for k in range(0, len(bits), 6))
        return head + body

    @classmethod
    def from_graph6(cls, text: str) -> SimpleGraph:
        s = text.strip()
        if s.startswith(">>graph6<<"):
            s = s[len(">>graph6<<") :]
        if not s:
            raise SpecParseError("empty graph6 string")
        if s[0] == "~":
            if len(s) > 1 and s[1] == "~":
                raise SpecParseError("graph6 8-byte size field is not supported")
            n = 0
            for ch in s[1:4]:
                n = (n << 6) | (ord(ch) - 63)
            body = s[4:]
        else:
            n = ord(s[0]) - 63
            body = s[1:]
        need = n * (n - 1) // 2
        bits = []
        for ch in body:
            v = ord(ch) - 63
            if not 0 <= v < 64:
                raise SpecParseError(f"invalid graph6 character {ch!r}")
            bits.extend((v >> (5 - k)) & 1 for k in range(6))
        if len(bits) < need:
            raise SpecParseError("graph6 string is too short")
        edges = []
        k = 0
        for j in range(1, n):
            for i in range(j):
                if bits[k]:
                    edges.append((i, j))
                k += 1
        return cls.from_edges(n, edges)


# ----------------------------------------------------------- named graphs

def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(m: int, n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)])


def hypercube(d: int) -> SimpleGraph:
    return SimpleGraph.from_edges(1 << d, [(v, v ^ (1 << b)) for v in range(1 << d) for b in range(d) if v < v ^ (1 << b)])


def disjoint_union(*gs: SimpleGraph) -> SimpleGraph:
    edges, off = [], 0
    for g in gs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.vertex_count
    return SimpleGraph.from_edges(off, edges)


# --------------------------------------------------------------- products

def product_index(coords: Sequence[int], sizes: Sequence[int]) -> int:
    """Mixed-radix index of a vertex tuple, first coordinate most significant."""
    x = 0
    for c, s in zip(coords, sizes):
        x = x * s + c
    return x


def product_coords(x: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        out.append(x % s)
        x //= s
    return tuple(reversed(out))


def direct_product_graph(graphs: Sequence[SimpleGraph], cap: int | None = None) -> SimpleGraph:
    """Tuples adjacent iff adjacent in every coordinate."""
    if not graphs:
        raise ValueError("direct product needs at least one factor")
    cap = limits.graph_cap if cap is None else cap
    sizes = [g.vertex_count for g in graphs]
    total = 1
    for s in sizes:
        total *= s
    if total > cap:
        raise ProductTooLarge(f"product has {total} vertices, cap is {cap}")
    # neighbour masks built factor by factor
    adj = list(graphs[0].adjacency)
    for g in graphs[1:]:
        s = g.vertex_count
        new = []
        for x in range(len(adj)):
            for y in range(s):
                row = 0
                for u in elements_of(adj[x]):
                    for v in g.neighbors(y):
                        row |= 1 << (u * s + v)
                new.append(row)
        adj = new
    return SimpleGraph(total, tuple(adj))


@dataclass(frozen=True)
class VertexMap:
    source: SimpleGraph = field(repr=False)
    target: SimpleGraph = field(repr=False)
    map: tuple[int, ...]

    def is_homomorphism(self) -> bool:
        return all(self.target.has_edge(self.map[u], self.map[v]) for u, v in self.source.edges())

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)


@dataclass(frozen=True)
class SubdirectCheck:
    ok: bool
    witnesses: tuple[dict, ...]
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_full_subdirect(
    vertices: Iterable[int],
    factors: Sequence[SimpleGraph],
    edges: Iterable[tuple[int, int]] | None = None,
) -> SubdirectCheck:
    """Check that every coordinate projection of a product subgraph is a full epimorphism.

    ``vertices`` are mixed-radix product indices; ``edges`` default to the edges
    the product induces on them. Witnesses map each factor edge to one preimage edge.
    """
    sizes = [g.vertex_count for g in factors]
    vs = sorted(set(vertices))
    coords = {v: product_coords(v, sizes) for v in vs}
    if edges is None:
        vset = set(vs)
        edge_list = []
        for u in vs:
            for w in vs:
                if u < w and all(f.has_edge(a, b) for f, a, b in zip(factors, coords[u], coords[w])):
                    edge_list.append((u, w))
    else:
        edge_list = [tuple(sorted(e)) for e in edges]
        vset = set(vs)
        for u, w in edge_list:
            if u not in vset or w not in vset:
                return SubdirectCheck(False, (), f"edge ({u}, {w}) leaves the vertex set")
            if not all(f.has_edge(a, b) for f, a, b in zip(factors, coords[u], coords[w])):
                return SubdirectCheck(False, (), f"edge ({u}, {w}) is not an edge of the product")
    witnesses = []
    for i, f in enumerate(factors):
        hit = {coords[v][i] for v in vs}
        if len(hit) != f.vertex_count:
            missing = min(set(range(f.vertex_count)) - hit)
            return SubdirectCheck(False, tuple(witnesses), f"factor {i}: vertex {missing} has no preimage")
        wit: dict = {}
        for u, w in edge_list:
            a, b = coords[u][i], coords[w][i]
            key = (min(a, b), max(a, b))
            wit.setdefault(key, (u, w))
        for e in f.edges():
            if e not in wit:
                return SubdirectCheck(False, tuple(witnesses), f"factor {i}: edge {e} has no preimage")
        witnesses.append({e: wit[e] for e in f.edges()})
    return SubdirectCheck(True, tuple(witnesses))


# ------------------------------------------------------------ isomorphism

def _refine(adj: list[list[int]], colors: list[int]) -> list[int]:
    """Colour refinement to a stable partition; colours are canonical small ints."""
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(len(adj))]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == len(set(colors)):
            return new
        colors = new


def graph_isomorphic(g1: SimpleGraph, g2: SimpleGraph, cap: int | None = None) -> tuple[int, ...] | None:
    """An isomorphism ``v -> image`` from g1 to g2, or None when none exists.

    Colour refinement on the disjoint union, then individualisation and
    backtracking over the smallest ambiguous colour class.
    """
    cap = limits.graph_cap if cap is None else cap
    n = g1.vertex_count
    if max(n, g2.vertex_count) > cap:
        raise GraphTooLarge(f"isomorphism test limited to {cap} vertices")
    if n != g2.vertex_count or g1.edge_count != g2.edge_count:
        return None
    if sorted(g1.degrees) != sorted(g2.degrees):
        return None
    adj = [list(g1.neighbors(v)) for v in range(n)] + [[u + n for u in g2.neighbors(v)] for v in range(n)]

    def balanced(colors: list[int]) -> bool:
        return sorted(colors[:n]) == sorted(colors[n:])

    def search(colors: list[int]) -> tuple[int, ...] | None:
        colors = _refine(adj, colors)
        if not balanced(colors):
            return None
        counts: dict[int, int] = {}
        for c in colors[:n]:
            counts[c] = counts.get(c, 0) + 1
        if all(k == 1 for k in counts.values()):
            where = {colors[n + v]: v for v in range(n)}
            mapping = tuple(where[colors[v]] for v in range(n))
            if all(g2.has_edge(mapping[u], mapping[v]) for u, v in g1.edges()):
                return mapping
            return None
        target = min((k, c) for c, k in counts.items() if k > 1)[1]
        v = next(x for x in range(n) if colors[x] == target)
        fresh = max(colors) + 1
        for w in range(n, 2 * n):
            if colors[w] != target:
                continue
            trial = list(colors)
            trial[v] = fresh
            trial[w] = fresh
            found = search(trial)
            if found is not None:
                return found
        return None

    return search([0] * (2 * n))
