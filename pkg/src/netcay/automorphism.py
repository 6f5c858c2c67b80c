"""Group automorphisms by backtracking over images of a small generating sequence.

Automorphisms act on the right: ``x^(s t) = (x^s)^t``, so ``s.then(t)``
applies ``s`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .config import limits
from .errors import AutTooLarge, NotInvariant, OrderCapExceeded
from .groups import FiniteGroup, Subgroup, elements_of, mask_of


@dataclass(frozen=True)
class Automorphism:
    parent: FiniteGroup = field(compare=False, repr=False)
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def then(self, other: Automorphism) -> Automorphism:
        """Apply ``self`` and then ``other``."""
        o = other.image
        return Automorphism(self.parent, tuple(o[y] for y in self.image))

    def inverse(self) -> Automorphism:
        inv = [0] * len(self.image)
        for x, y in enumerate(self.image):
            inv[y] = x
        return Automorphism(self.parent, tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.image))

    def apply_set(self, S: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.image[x] for x in S))

    def apply_mask(self, mask: int) -> int:
        im = self.image
        return mask_of(im[x] for x in elements_of(mask))

    @property
    def order(self) -> int:
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur.then(self)
            k += 1
        return k

    def is_valid(self) -> bool:
        G, im = self.parent, self.image
        if sorted(im) != list(range(G.order)) or im[0] != 0:
            return False
        mul = G.mul
        return all(im[mul[x][y]] == mul[im[x]][im[y]] for x in range(G.order) for y in range(G.order))


def identity_automorphism(G: FiniteGroup) -> Automorphism:
    return Automorphism(G, tuple(range(G.order)))


@dataclass(frozen=True)
class AutGroup:
    """An explicit group of automorphisms, elements sorted by image table."""

    parent: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[Automorphism, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Automorphism]:
        return iter(self.elements)

    def __contains__(self, s: Automorphism) -> bool:
        return s.image in self._images

    @cached_property
    def _images(self) -> frozenset:
        return frozenset(a.image for a in self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def is_abelian(self) -> bool:
        els = self.elements
        return all(a.then(b).image == b.then(a).image for i, a in enumerate(els) for b in els[i + 1 :])

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        e = 1
        for a in self.elements:
            e = lcm(e, a.order)
        return e

    def is_closed(self) -> bool:
        imgs = self._images
        if tuple(range(self.parent.order)) not in imgs:
            return False
        return all(a.then(b).image in imgs for a in self.elements for b in self.elements)

    def structure_label(self) -> str:
        """Coarse label for small groups: order plus abelian/exponent profile."""
        if self.order == 8 and not self.is_abelian:
            # Q8 has a single involution; D8 has five
            invol = sum(1 for a in self.elements if a.order == 2)
            return "D8" if invol == 5 else "Q8"
        if self.order == 4:
            return "Z4" if self.exponent == 4 else "Z2xZ2"
        if self.order == 2:
            return "Z2"
        if self.order == 1:
            return "1"
        kind = "abelian" if self.is_abelian else "nonabelian"
        return f"order{self.order}-{kind}-exp{self.exponent}"


def make_aut_group(G: FiniteGroup, auts: Iterable[Automorphism]) -> AutGroup:
    uniq = {a.image: a for a in auts}
    return AutGroup(G, tuple(uniq[k] for k in sorted(uniq)))


def generated_aut_group(G: FiniteGroup, gens: Sequence[Automorphism]) -> AutGroup:
    """Closure of ``gens`` under composition."""
    ident = identity_automorphism(G)
    found = {ident.image: ident}
    queue = [ident]
    while queue:
        a = queue.pop()
        for g in gens:
            b = a.then(g)
            if b.image not in found:
                found[b.image] = b
                queue.append(b)
    return make_aut_group(G, found.values())


def _generator_sequence(G: FiniteGroup, prefer: int = 0) -> list[int]:
    """Greedy generating sequence: repeatedly add an element outside the current closure."""
    orders = G.element_orders
    cand = sorted(range(1, G.order), key=lambda x: (not prefer >> x & 1, -orders[x], x))
    gens: list[int] = []
    H = 1
    for x in cand:
        if H == G.full_mask:
            break
        if not H >> x & 1:
            gens.append(x)
            H = G.closure_mask(gens)
    return gens


def _search(G: FiniteGroup, preserve: int | None, aut_cap: int) -> list[tuple[int, ...]]:
    n = G.order
    if n == 1:
        return [(0,)]
    mul = G.mul
    gens = _generator_sequence(G, preserve or 0)
    r = len(gens)
    # derivation of each element as parent * gens[t], grouped by layer
    deriv: list[list[tuple[int, int, int]]] = []
    elems = [0]
    seen = 1
    for i in range(r):
        layer = []
        j = 0
        active = gens[: i + 1]
        while j < len(elems):
            x = elems[j]
            for t, g in enumerate(active):
                y = mul[x][g]
                if not seen >> y & 1:
                    seen |= 1 << y
                    elems.append(y)
                    layer.append((y, x, t))
            j += 1
        deriv.append(layer)
    layer_end = []
    total = 1
    for layer in deriv:
        total += len(layer)
        layer_end.append(total)
    orders = G.element_orders
    cents = G.centralizer_sizes
    candidates = []
    for g in gens:
        ok = [y for y in range(1, n) if orders[y] == orders[g] and cents[y] == cents[g]]
        if preserve is not None:
            inside = bool(preserve >> g & 1)
            ok = [y for y in ok if bool(preserve >> y & 1) == inside]
        candidates.append(ok)

    f = [-1] * n
    f[0] = 0
    results: list[tuple[int, ...]] = []

    def check_pres(y: int, fy: int) -> bool:
        return preserve is None or (preserve >> y & 1) == (preserve >> fy & 1)

    def extend(i: int, used: int) -> None:
        if i == r:
            results.append(tuple(f))
            if len(results) > aut_cap:
                raise AutTooLarge(f"|Aut| exceeds the cap {aut_cap} for {G.label}")
            return
        g = gens[i]
        old = elems[: layer_end[i - 1]] if i else [0]
        for y in candidates[i]:
            if used >> y & 1:
                continue
            f[g] = y
            u = used | (1 << y)
            ok = True
            defined = []
            for z, x, t in deriv[i]:
                if z == g:
                    continue
                fz = mul[f[x]][f[gens[t]]]
                if u >> fz & 1 or not check_pres(z, fz):
                    ok = False
                    break
                f[z] = fz
                u |= 1 << fz
                defined.append(z)
            if ok:
                fg = [f[h] for h in gens[: i + 1]]
                for z, _, _ in deriv[i]:
                    fz, row = f[z], mul[z]
                    frow = mul[fz]
                    for t in range(i + 1):
                        if f[row[gens[t]]] != frow[fg[t]]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    fgi = fg[i]
                    for x in old:
                        if f[mul[x][g]] != mul[f[x]][fgi]:
                            ok = False
                            break
            if ok:
                extend(i + 1, u)
            for z in defined:
                f[z] = -1
            f[g] = -1

    # the first generator's layer includes the generator itself
    extend(0, 1)
    return results


def automorphism_group(G: FiniteGroup, *, order_cap: int | None = None, aut_cap: int | None = None) -> AutGroup:
    """The full automorphism group of G, as an explicit sorted list."""
    cap = limits.order_cap if order_cap is None else order_cap
    if G.order > cap:
        raise OrderCapExceeded(f"|G| = {G.order} exceeds the order cap {cap}")
    if "aut" in G._cache:
        return G._cache["aut"]
    imgs = _search(G, None, limits.aut_cap if aut_cap is None else aut_cap)
    A = AutGroup(G, tuple(Automorphism(G, im) for im in sorted(imgs)))
    G._cache["aut"] = A
    return A


def stabilizer_search(G: FiniteGroup, C: Iterable[int], *, aut_cap: int | None = None) -> AutGroup:
    """Aut(G;C) found directly by backtracking with images of C kept inside C.

    Agrees with ``setwise_stabilizer(automorphism_group(G), C)`` but never builds
    Aut(G), so it also works when |Aut(G)| is beyond the explicit cap.
    """
    pres = mask_of(C)
    imgs = _search(G, pres, limits.aut_cap if aut_cap is None else aut_cap)
    return AutGroup(G, tuple(Automorphism(G, im) for im in sorted(imgs)))


def setwise_stabilizer(A: AutGroup, C: Iterable[int]) -> AutGroup:
    m = mask_of(C)
    return AutGroup(A.parent, tuple(s for s in A if s.apply_mask(m) == m))


def orbits(A: AutGroup, S: Iterable[int]) -> list[tuple[int, ...]]:
    """Orbit partition of an A-invariant set, each orbit sorted, orbits by least element."""
    S = sorted(set(S))
    m = mask_of(S)
    out = []
    seen = 0
    for x in S:
        if seen >> x & 1:
            continue
        orb = mask_of(s.image[x] for s in A)
        if orb & ~m:
            raise NotInvariant(f"element {x} is moved outside the set")
        seen |= orb
        out.append(elements_of(orb))
    return out


def is_invariant_subgroup(H: Subgroup, A: AutGroup) -> bool:
    m = H.mask
    return all(s.apply_mask(m) == m for s in A)


def is_invariant_set(S: Iterable[int], A: AutGroup) -> bool:
    m = mask_of(S)
    return all(s.apply_mask(m) == m for s in A)
