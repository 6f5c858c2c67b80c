"""Shared sampling helpers for the test suite."""

import random

from netcay.groups import FiniteGroup


def inverse_units(G: FiniteGroup) -> list[tuple[int, ...]]:
    units, seen = [], set()
    for x in range(1, G.order):
        if x not in seen:
            seen |= {x, G.inv[x]}
            units.append(tuple(sorted({x, G.inv[x]})))
    return units


def random_generating_set(G: FiniteGroup, rng: random.Random, p: float = 0.5) -> list[int]:
    """Random inverse-closed generating subset, drawn unit by unit."""
    units = inverse_units(G)
    while True:
        S = [x for u in units if rng.random() < p for x in u]
        if S and G.closure_mask(S) == G.full_mask:
            return S


def is_generating_subset(G: FiniteGroup, S) -> bool:
    return G.closure_mask(S) == G.full_mask


def frobenius_21() -> FiniteGroup:
    """Z7 x| Z3 with the generator of Z3 acting as multiplication by 2."""
    from netcay.groups import build_from_table

    els = [(i, j) for i in range(7) for j in range(3)]
    idx = {e: k for k, e in enumerate(els)}
    table = [[idx[((a[0] + pow(2, a[1]) * b[0]) % 7, (a[1] + b[1]) % 3)] for b in els] for a in els]
    return build_from_table(table, "F21")


def subgroup_as_group(G: FiniteGroup, elements, label: str) -> FiniteGroup:
    """Relabel a subgroup of G as a group on ids 0..m-1 (identity first)."""
    from netcay.groups import build_from_table

    els = sorted(elements)
    pos = {x: i for i, x in enumerate(els)}
    return build_from_table([[pos[G.mul[x][y]] for y in els] for x in els], label)
