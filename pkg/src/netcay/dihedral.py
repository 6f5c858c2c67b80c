"""Arithmetic for D_2n and its 4-valent normal edge-transitive Cayley graphs.

Elements use the table encoding of ``build_dihedral``: id i is a^i and id n+i
is b.a^i. An automorphism is a pair (k, j) with gcd(k, n) = 1 acting by
a^i -> a^(ik), b.a^i -> b.a^(ik+j); for n >= 3 these are all of Aut(D_2n).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .automorphism import stabilizer_search
from .config import limits
from .errors import (
    BadParameters,
    CapExceeded,
    ClassificationGap,
    InconsistencyDetected,
    MismatchWithBruteForce,
    NotTransitive,
    PreconditionFailed,
    StructureViolation,
)
from .groups import _is_prime, build_dihedral


@dataclass(frozen=True)
class DihedralAut:
    n: int
    k: int
    j: int

    def __post_init__(self):
        if gcd(self.k, self.n) != 1:
            raise ValueError(f"k = {self.k} is not a unit mod {self.n}")

    def __call__(self, e: int) -> int:
        n = self.n
        if e < n:
            return e * self.k % n
        return n + ((e - n) * self.k + self.j) % n

    def then(self, other: DihedralAut) -> DihedralAut:
        """Apply ``self`` first; (k1,j1) then (k2,j2) is (k1 k2, j1 k2 + j2)."""
        n = self.n
        return DihedralAut(n, self.k * other.k % n, (self.j * other.k + other.j) % n)

    def inverse(self) -> DihedralAut:
        kk = pow(self.k, -1, self.n)
        return DihedralAut(self.n, kk, -self.j * kk % self.n)

    def is_identity(self) -> bool:
        return self.k % self.n == 1 % self.n and self.j % self.n == 0

    def apply_set(self, S) -> tuple[int, ...]:
        return tuple(sorted(self(e) for e in S))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.k, self.j)


def apply_aut(alpha: DihedralAut, e: int) -> int:
    return alpha(e)


def units(n: int) -> list[int]:
    return [k for k in range(1, n) if gcd(k, n) == 1]


def aut_pairs(n: int) -> np.ndarray:
    """All (k, j) as an (n*phi(n), 2) array, k ascending then j ascending."""
    ks = units(n)
    return np.array([(k, j) for k in ks for j in range(n)], dtype=np.int64)


def _image(n: int, K, J, e):
    """Broadcast image of element ids e under pairs (K, J)."""
    return np.where(e < n, (e * K) % n, n + ((e - n) * K + J) % n)


def generates_dihedral(n: int, S) -> bool:
    """<S> = D_2n iff S has a reflection and the rotation data has gcd 1 with n."""
    refl = [e - n for e in S if e >= n]
    if not refl:
        return False
    g = n
    for e in S:
        g = gcd(g, e if e < n else e - n - refl[0])
    return g == 1


def inverse_id(n: int, e: int) -> int:
    return (n - e) % n if e < n else e


def stabilizer_pairs(n: int, C) -> list[DihedralAut]:
    """Aut(D_2n; C) by filtering every (k, j)."""
    P = aut_pairs(n)
    c = np.array(sorted(C), dtype=np.int64)
    img = np.sort(_image(n, P[:, :1], P[:, 1:], c[None, :]), axis=1)
    keep = np.all(img == c[None, :], axis=1)
    return [DihedralAut(n, int(k), int(j)) for k, j in P[keep]]


def _orbits_under(auts: list[DihedralAut], C) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for x in sorted(C):
        if x in seen:
            continue
        orb = tuple(sorted({s(x) for s in auts}))
        seen.update(orb)
        out.append(orb)
    return out


def _transitive_orbits(n: int, orbs: list[tuple[int, ...]]) -> bool:
    if len(orbs) == 1:
        return True
    if len(orbs) == 2:
        return {inverse_id(n, x) for x in orbs[0]} == set(orbs[1])
    return False


def is_transitive_dihedral(n: int, C) -> bool:
    """Generating and transitive in the (k, j) arithmetic."""
    if not generates_dihedral(n, C):
        return False
    return _transitive_orbits(n, _orbits_under(stabilizer_pairs(n, C), C))


# ------------------------------------------------- transitive-set shape

@dataclass(frozen=True)
class TransitiveSetStructure:
    n: int
    r: int
    I: tuple[int, ...]
    aut_order: int


def transitive_structure(n: int, C) -> TransitiveSetStructure:
    """Write C as a union of cosets b.a^i <a^r>, where A0 meets <phi> in <phi^r>."""
    C = tuple(sorted(set(C)))
    if not generates_dihedral(n, C):
        raise NotTransitive("the set does not generate D_2n")
    A0 = stabilizer_pairs(n, C)
    if not _transitive_orbits(n, _orbits_under(A0, C)):
        raise NotTransitive("Aut(G;C) orbits fail the transitivity condition")
    r = n
    for s in A0:
        if s.k == 1 % n and s.j:
            r = gcd(r, s.j)
    if any(e < n for e in C):
        raise StructureViolation("a transitive set contains a rotation")
    I = tuple(sorted({(e - n) % r for e in C}))
    rebuilt = {n + (i + t * r) % n for i in I for t in range(n // r)}
    if rebuilt != set(C):
        raise StructureViolation(f"coset union with r = {r}, I = {I} does not rebuild C")
    return TransitiveSetStructure(n, r, I, len(A0))


# --------------------------------------------------------------- families

def talebi_a_valid(n: int, i: int) -> bool:
    return 2 <= i <= n - 1 and gcd(2 * i - 1, n) == 1 and 2 * i * (i - 1) % n == 0


def talebi_b_valid(n: int, k: int) -> bool:
    return 1 <= k <= n - 2 and gcd(k, n) == 1 and (1 + k + k * k + k**3) % n == 0


def talebi_a_set(n: int, i: int) -> tuple[int, ...]:
    return tuple(sorted({n, n + 1, n + i % n, n + (1 - i) % n}))


def talebi_b_set(n: int, k: int) -> tuple[int, ...]:
    return tuple(sorted({n, n + 1, n + (k + 1) % n, n + (k * k + k + 1) % n}))


def new_family_set(n: int, i: int, j: int, k: int) -> tuple[int, ...]:
    return tuple(sorted({n, n + i % n, n + j % n, n + k % n}))


@dataclass(frozen=True)
class NewFamilyCheck:
    params: tuple[int, int, int, int, int, int]
    clauses: dict

    def __bool__(self) -> bool:
        return all(self.clauses.values())


def new_family_valid(n: int, i: int, j: int, k: int, ell: int, m: int) -> NewFamilyCheck:
    """Evaluate every defining clause of the third family separately."""
    cl = {
        "range": n >= 5 and all(1 < x < n for x in (i, j, k)),
        "pairwise_coprime": gcd(i, j) == gcd(i, k) == gcd(j, k) == 1,
        "non_units": all(gcd(x, n) > 1 for x in (i, j, k)),
        "involutions": ell * ell % n == 1 % n and m * m % n == 1 % n,
        "not_identity": all(x % n != 1 % n for x in (ell, m, ell * m)),
        "k_congruences": (j * ell + i - k) % n == 0 and (i * m + j - k) % n == 0,
        "annihilation": i * (ell + 1) % n == 0 and j * (m + 1) % n == 0,
    }
    return NewFamilyCheck((n, i, j, k, ell, m), cl)


def is_mersenne(p: int) -> bool:
    """True when p + 1 is a power of two (primality is not checked)."""
    return p >= 1 and (p + 1) & p == 0


def mersenne_family(p: int, q: int) -> tuple[int, int, int, int, int, int]:
    if p % 2 == 0 or not _is_prime(p):
        raise BadParameters(f"p = {p} is not an odd prime")
    if is_mersenne(p):
        raise BadParameters(f"p = {p} is a Mersenne prime")
    if q % 2 == 0 or not _is_prime(q) or (p + 1) % q:
        raise BadParameters(f"q = {q} is not an odd prime divisor of p + 1 = {p + 1}")
    n = 2 * p * q
    ell = 2 * p + 1
    return (n, p, q, p + q, ell, n - ell)


# ----------------------------------------------------------- classifier

KINDS = ("TalebiA", "TalebiB", "NewFamily", "Overlap", "NotNET")


@dataclass(frozen=True)
class FourValentClass:
    kind: str
    params: dict
    sigma: DihedralAut | None
    representative: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "sigma": None if self.sigma is None else list(self.sigma.pair),
            "representative": list(self.representative),
        }


def _talebi_match(n: int, D: tuple[int, ...]) -> tuple[int | None, int | None]:
    """Canonical family-a parameter and family-b parameter of D, if any."""
    s = {e - n for e in D}
    if len(s) != 4 or min(D) < n or not {0, 1} <= s:
        return None, None
    u, v = sorted(s - {0, 1})
    ia = None
    for i in (u, v):
        if talebi_a_valid(n, i) and {i % n, (1 - i) % n} == {u, v}:
            c = min(i, n + 1 - i)
            ia = c if ia is None else min(ia, c)
    kb = None
    for x in (u, v):
        k = x - 1
        if talebi_b_valid(n, k) and {(k + 1) % n, (k * k + k + 1) % n} == {u, v}:
            kb = k if kb is None else min(kb, k)
    return ia, kb


def _talebi_candidates(n: int, C):
    """Automorphisms sending an ordered pair of reflections in C to (b, b.a)."""
    xs = sorted(e - n for e in C if e >= n)
    for x, y in itertools.permutations(xs, 2):
        d = (y - x) % n
        if gcd(d, n) != 1:
            continue
        k = pow(d, -1, n)
        yield DihedralAut(n, k, -x * k % n)


def _ordered_new_params(n: int, exps) -> tuple[int, ...] | None:
    a, b, c = exps
    if gcd(a, b) != 1 or gcd(a, c) != 1 or gcd(b, c) != 1 or any(gcd(x, n) == 1 for x in exps):
        return None
    sq1 = [x for x in range(2, n) if x * x % n == 1]
    orderings = sorted(itertools.permutations(exps, 3), key=lambda t: (-t[2], -t[0], -t[1]))
    for i, j, k in orderings:
        ells = [x for x in sq1 if i * (x + 1) % n == 0 and (j * x + i - k) % n == 0]
        ms = [x for x in sq1 if j * (x + 1) % n == 0 and (i * x + j - k) % n == 0]
        for ell in ells:
            for m in ms:
                if new_family_valid(n, i, j, k, ell, m):
                    return (i, j, k, ell, m)
    return None


def _new_candidates(n: int, C):
    xs = sorted(e - n for e in C if e >= n)
    for x in xs:
        for k in units(n):
            yield DihedralAut(n, k, -x * k % n)


def match_family(n: int, C) -> FourValentClass | None:
    """Search Aut(D_2n) for an image of C in one of the three families.

    Talebi images contain b and b.a, so only automorphisms carrying a pair of
    elements of C there are tried; new-family images contain b. The first
    matching automorphism in a fixed order supplies sigma.
    """
    C = tuple(sorted(set(C)))
    if len(C) != 4 or min(C) < n:
        return None
    first_a = first_b = None
    for s in _talebi_candidates(n, C):
        D = s.apply_set(C)
        ia, kb = _talebi_match(n, D)
        if ia is not None and (first_a is None or ia < first_a[0]):
            first_a = (ia, s, D)
        if kb is not None and (first_b is None or kb < first_b[0]):
            first_b = (kb, s, D)
    if first_a and first_b:
        ia, s, D = first_a
        return FourValentClass("Overlap", {"i_a": ia, "k_b": first_b[0]}, s, D)
    if first_a:
        ia, s, D = first_a
        return FourValentClass("TalebiA", {"i": ia}, s, D)
    if first_b:
        kb, s, D = first_b
        return FourValentClass("TalebiB", {"k": kb}, s, D)
    for s in _new_candidates(n, C):
        D = s.apply_set(C)
        if n not in D:
            continue
        found = _ordered_new_params(n, [e - n for e in D if e != n])
        if found:
            i, j, k, ell, m = found
            return FourValentClass("NewFamily", {"i": i, "j": j, "k": k, "ell": ell, "m": m}, s, D)
    return None


def _check_four_set(n: int, C) -> tuple[int, ...]:
    if n < 3:
        raise PreconditionFailed("n must be at least 3")
    C = tuple(sorted(set(C)))
    if len(C) != 4:
        raise PreconditionFailed(f"need a 4-element set, got {len(C)}")
    if any(not 0 < e < 2 * n for e in C):
        raise PreconditionFailed("element outside D_2n or the identity")
    if {inverse_id(n, e) for e in C} != set(C):
        raise PreconditionFailed("set is not inverse-closed")
    if not generates_dihedral(n, C):
        raise PreconditionFailed("set does not generate D_2n")
    return C


def classify_4valent(n: int, C) -> FourValentClass:
    C = _check_four_set(n, C)
    if not is_transitive_dihedral(n, C):
        return FourValentClass("NotNET", {}, None, C)
    cls = match_family(n, C)
    if cls is None:
        raise ClassificationGap(f"transitive set {C} for n = {n} matches no family")
    return cls


# ---------------------------------------------------------- enumeration

@dataclass(frozen=True)
class FourValentScan:
    """Every inverse-closed 4-subset of D_2n with generation and transitivity flags."""

    n: int
    sets: np.ndarray = field(repr=False)
    generating: np.ndarray = field(repr=False)
    transitive: np.ndarray = field(repr=False)
    orbit_code: np.ndarray = field(repr=False)
    orbit_label: np.ndarray = field(repr=False)

    def orbit_representatives(self) -> np.ndarray:
        """Row indices of the least generating set in each Aut-orbit."""
        lab = self.orbit_label[self.generating]
        return np.unique(lab)

    def transitive_sets(self) -> list[tuple[int, ...]]:
        return [tuple(map(int, r)) for r in self.sets[self.transitive]]


def inverse_closed_four_sets(n: int) -> np.ndarray:
    singles = [n // 2] if n % 2 == 0 else []
    singles += list(range(n, 2 * n))
    pairs = [(i, n - i) for i in range(1, (n + 1) // 2)]
    rows = [c for c in itertools.combinations(singles, 4)]
    rows += [tuple(sorted(c + p)) for c in itertools.combinations(singles, 2) for p in pairs]
    rows += [tuple(sorted(p + q)) for p, q in itertools.combinations(pairs, 2)]
    return np.array(sorted(rows), dtype=np.int64).reshape(-1, 4)


def _generating_mask(n: int, S: np.ndarray) -> np.ndarray:
    R = S >= n
    has = R.any(axis=1)
    first = np.argmax(R, axis=1)
    x0 = S[np.arange(len(S)), first] - n
    vals = np.where(R, S - n - x0[:, None], S) % n
    g = np.gcd.reduce(np.concatenate([vals, np.full((len(S), 1), n)], axis=1), axis=1)
    return has & (g == 1)


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    code = np.zeros(rows.shape[:-1], dtype=np.int64)
    for t in range(rows.shape[-1]):
        code = code * base + rows[..., t]
    return code


def _transitivity_block(n: int, X: np.ndarray, inv_pos: np.ndarray, chunk: int = 2048):
    """Per-row transitivity flag and least-image code for rows X, filtering all (k, j)."""
    P = aut_pairs(n)
    K = P[:, 0][None, :, None]
    J = P[:, 1][None, :, None]
    ok_all = np.zeros(len(X), dtype=bool)
    code_all = np.zeros(len(X), dtype=np.int64)
    for lo in range(0, len(X), chunk):
        Y = X[lo : lo + chunk]
        img = _image(n, K, J, Y[:, None, :])  # (m, A, 4)
        simg = np.sort(img, axis=2)
        stab = np.all(simg == Y[:, None, :], axis=2)  # (m, A)
        hit = img[:, :, :, None] == Y[:, None, None, :]  # (m, A, p, q)
        reach = np.any(hit & stab[:, :, None, None], axis=1)  # (m, p, q)
        sizes = reach.sum(axis=2)
        nclass = np.rint((1.0 / sizes).sum(axis=1)).astype(int)
        ip = inv_pos[lo : lo + chunk]
        fused = reach[np.arange(len(Y))[:, None], np.arange(4)[None, :], ip]
        ok_all[lo : lo + chunk] = (nclass == 1) | ((nclass == 2) & ~fused.any(axis=1))
        code_all[lo : lo + chunk] = _encode(simg, 2 * n).min(axis=1)
    return ok_all, code_all


def _orbit_labels(n: int, S: np.ndarray) -> np.ndarray:
    """Aut(D_2n)-orbit label of each row (index of the least row in its orbit).

    Rows must be sorted and closed under Aut. Orbits are the connected
    components of the graph joining each row to its images under phi and
    every tau_k.
    """
    codes = _encode(S, 2 * n)
    m = len(S)
    src, dst = [], []
    for k, j in [(1, 1)] + [(k, 0) for k in units(n) if k != 1]:
        img = np.sort(_image(n, k, j, S), axis=1)
        idx = np.searchsorted(codes, _encode(img, 2 * n))
        src.append(np.arange(m))
        dst.append(idx)
    graph = coo_matrix(
        (np.ones(m * len(src), dtype=np.int8), (np.concatenate(src), np.concatenate(dst))), shape=(m, m)
    )
    _, comp = connected_components(graph, directed=False)
    first = np.full(comp.max() + 1 if m else 0, m, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(m))
    return first[comp]


def scan_4valent(n: int, *, per_set: bool = False) -> FourValentScan:
    """Generation, transitivity and Aut-orbit code for every inverse-closed 4-subset.

    Transitivity is decided by filtering all n*phi(n) automorphisms; nothing
    about the shape of transitive sets is assumed. By default the filter runs on
    one representative per Aut-orbit (transitivity is an orbit invariant);
    ``per_set=True`` runs it on every generating set instead.
    """
    S = inverse_closed_four_sets(n)
    gen = _generating_mask(n, S)
    trans = np.zeros(len(S), dtype=bool)
    code = np.full(len(S), -1, dtype=np.int64)
    inv = np.where(S < n, (n - S) % n, S)
    inv_pos = np.argmax(inv[:, :, None] == S[:, None, :], axis=2)
    idx = np.flatnonzero(gen)
    G = S[idx]
    label = _orbit_labels(n, G)
    orbit_label = np.full(len(S), -1, dtype=np.int64)
    orbit_label[idx] = idx[label]
    if per_set:
        ok, c = _transitivity_block(n, G, inv_pos[idx])
        trans[idx] = ok
        code[idx] = np.where(ok, c, -1)
        return FourValentScan(n, S, gen, trans, code, orbit_label)
    reps = np.unique(label)
    ok, c = _transitivity_block(n, G[reps], inv_pos[idx][reps])
    pos = np.searchsorted(reps, label)
    trans[idx] = ok[pos]
    code[idx] = np.where(ok[pos], c[pos], -1)
    return FourValentScan(n, S, gen, trans, code, orbit_label)


def _decode(code: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(4):
        out.append(code % (2 * n))
        code //= 2 * n
    return tuple(reversed(out))


def enumerate_4valent(n: int, cap: int | None = None) -> list[tuple[tuple[int, ...], FourValentClass]]:
    """One (least image, class) entry per Aut(D_2n)-orbit of 4-valent transitive sets."""
    cap = limits.enumeration_cap if cap is None else cap
    if n < 3:
        raise PreconditionFailed("n must be at least 3")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the enumeration cap {cap}")
    scan = scan_4valent(n)
    reps = sorted({int(c) for c in scan.orbit_code[scan.transitive]})
    out = []
    for c in reps:
        C = _decode(c, n)
        out.append((C, classify_4valent(n, C)))
    return out


# ------------------------------------------------------- Aut(G;C) shapes

@dataclass(frozen=True)
class AutStructure:
    label: str
    generators: tuple[tuple[int, int], ...]
    order: int


def generated_pairs(n: int, gens) -> set[tuple[int, int]]:
    ident = DihedralAut(n, 1 % n, 0)
    found = {ident.pair: ident}
    queue = [ident]
    gs = [DihedralAut(n, k % n, j % n) for k, j in gens]
    while queue:
        a = queue.pop()
        for g in gs:
            b = a.then(g)
            if b.pair not in found:
                found[b.pair] = b
                queue.append(b)
    return set(found)


def predicted_structure(n: int, cls: FourValentClass) -> AutStructure:
    p = cls.params
    h = n // 2
    if cls.kind == "Overlap":
        return AutStructure("D8", ((h + 1, 0), (n - 1, 1)), 8)
    if cls.kind == "TalebiA":
        i = p["i"]
        if n % 4 == 0 and i in (h, h + 1):
            return AutStructure("D8", ((h + 1, 0), (n - 1, 1)), 8)
        return AutStructure("Z2xZ2", ((n - 1, 1), ((2 * i - 1) % n, (1 - i) % n)), 4)
    if cls.kind == "TalebiB":
        k = p["k"]
        if n % 4 == 0 and k == h - 1:
            return AutStructure("D8", ((h + 1, 0), (h - 1, 1)), 8)
        return AutStructure("Z4", ((k, 1),), 4)
    if cls.kind == "NewFamily":
        return AutStructure("Z2xZ2", ((p["ell"], p["i"]), (p["m"], p["j"])), 4)
    raise PreconditionFailed(f"no predicted structure for class {cls.kind}")


def aut_gc_structure(n: int, cls: FourValentClass) -> AutStructure:
    """Predicted Aut(G;C) for the family representative, checked by brute force.

    The prediction must generate exactly the (k, j)-stabilizer, and the
    table-based stabilizer search on D_2n must agree on order and label.
    """
    pred = predicted_structure(n, cls)
    D = cls.representative
    gen = generated_pairs(n, pred.generators)
    brute = {s.pair for s in stabilizer_pairs(n, D)}
    if gen != brute:
        raise MismatchWithBruteForce(f"predicted generators give {len(gen)} pairs, stabilizer has {len(brute)}")
    G = build_dihedral(n)
    A = stabilizer_search(G, D)
    if A.order != pred.order or A.structure_label() != pred.label:
        raise MismatchWithBruteForce(f"table stabilizer is {A.structure_label()} of order {A.order}, predicted {pred.label}")
    return pred


def new_family_not_talebi(n: int, params) -> bool:
    """Check every image of a new-family set against both Talebi templates."""
    i, j, k, ell, m = params
    if not new_family_valid(n, i, j, k, ell, m):
        raise PreconditionFailed("parameters do not satisfy the new-family conditions")
    C = np.array(new_family_set(n, i, j, k), dtype=np.int64)
    P = aut_pairs(n)
    img = np.sort(_image(n, P[:, :1], P[:, 1:], C[None, :]), axis=1)
    for row in img:
        ia, kb = _talebi_match(n, tuple(int(x) for x in row))
        if ia is not None or kb is not None:
            raise InconsistencyDetected(f"image {tuple(row)} lies in a Talebi family")
    return True


def to_table_automorphism(alpha: DihedralAut):
    """The same map as an ``Automorphism`` of ``build_dihedral(n)``."""
    from .automorphism import Automorphism

    G = build_dihedral(alpha.n)
    return Automorphism(G, tuple(alpha(e) for e in range(2 * alpha.n)))
