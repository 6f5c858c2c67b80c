import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import frobenius_21, random_generating_set, subgroup_as_group
from netcay.automorphism import automorphism_group
from netcay.errors import (
    ContainsIdentity,
    EmptyConnectionSet,
    NotGenerating,
    NotInverseClosed,
    NotTransitive,
    OrderCapExceeded,
    PreconditionFailed,
    SpecParseError,
)
from netcay.frattini import (
    check_removal_property,
    coset_profile,
    element_name,
    has_transitive_orbits,
    invariant_normal_lattice,
    is_generating,
    is_transitive_set,
    make_connection_set,
    maximal_core,
    normal_c_closure,
    parse_connection_set,
    parse_element,
    phi_membership_oracle,
    phi_oracle_members,
    product_transitive_set,
    relative_frattini,
    transitive_set_image,
)
from netcay.groups import (
    all_normal_subgroups,
    build_cyclic,
    build_dihedral,
    build_elementary_abelian,
    builder_catalogue,
    elements_of,
    frattini_subgroup,
    inverse_closed_subsets,
    maximal_subgroups,
    parse_group_spec,
)
from netcay.harness import load_s5


def test_connection_set_validation():
    G = build_cyclic(6)
    with pytest.raises(EmptyConnectionSet):
        make_connection_set(G, [])
    with pytest.raises(ContainsIdentity):
        make_connection_set(G, [0, 1, 5])
    with pytest.raises(NotInverseClosed):
        make_connection_set(G, [1, 2])
    with pytest.raises(PreconditionFailed):
        make_connection_set(G, [9])


def test_lattice_members_are_invariant_normal():
    G = build_dihedral(6)
    C = make_connection_set(G, [1, 5, 6])
    lat = invariant_normal_lattice(C)
    for N in lat.all:
        for s in C.aut_gc:
            assert s.apply_mask(N.mask) == N.mask
    # brute force: every proper normal subgroup fixed by Aut(G;C)
    brute = {
        N.mask
        for N in all_normal_subgroups(G)
        if not N.is_whole() and all(s.apply_mask(N.mask) == N.mask for s in C.aut_gc)
    }
    assert {N.mask for N in lat.all} == brute


def test_cyclic_twelve():
    G = build_cyclic(12)
    C = make_connection_set(G, [1, 11])
    assert relative_frattini(C).elements == (0, 6)


def test_class_of_brute_force():
    G = build_dihedral(5)
    C = make_connection_set(G, [5, 6])
    for x in range(G.order):
        cls = set(elements_of(C.class_of[x]))
        # closed under conjugation and Aut(G;C), and contains x
        assert x in cls
        for y in cls:
            assert all(G.conj(y, g) in cls for g in range(G.order))
            assert all(s(y) in cls for s in C.aut_gc)
    assert normal_c_closure(C, [1]) == (1, 4)
    assert normal_c_closure(C, [1, 2]) == (1, 2, 3, 4)


def test_removal_property_exhaustive_small():
    for spec, G in builder_catalogue(10):
        for S in inverse_closed_subsets(G):
            if G.closure_mask(S) != G.full_mask:
                continue
            C = make_connection_set(G, S)
            reps = sorted(set(C.class_of))
            for pick in range(1, 1 << len(reps)):
                X = [x for i, m in enumerate(reps) if pick >> i & 1 for x in elements_of(m)]
                if G.closure_mask(X) == G.full_mask:
                    assert check_removal_property(C, X), (spec, S, X)


def test_removal_property_preconditions():
    G = build_cyclic(6)
    C = make_connection_set(G, [1, 5])
    with pytest.raises(PreconditionFailed):
        check_removal_property(C, [1])
    with pytest.raises(PreconditionFailed):
        check_removal_property(C, [2, 4])


def test_oracle_cap_and_single_query():
    C = make_connection_set(build_cyclic(20), [1, 19])
    with pytest.raises(OrderCapExceeded):
        phi_oracle_members(C)
    C = make_connection_set(build_cyclic(12), [1, 11])
    assert phi_membership_oracle(C, 6)
    assert not phi_membership_oracle(C, 3)


def test_oracle_on_f21():
    G = frobenius_21()
    C = make_connection_set(G, [1, 2, 4, 11])
    # |G| = 21 exceeds the default cap; widen it for this one check
    assert phi_oracle_members(C, cap=21) == relative_frattini(C).elements


def test_transitive_set_checks():
    G = build_dihedral(6)
    assert is_transitive_set(make_connection_set(G, [6, 7]))
    with pytest.raises(NotGenerating):
        is_transitive_set(make_connection_set(G, [6, 8]))
    assert not has_transitive_orbits(make_connection_set(G, [1, 5, 6]))


def test_abelian_sets_fuse_inverses():
    G = build_cyclic(9)
    C = make_connection_set(G, [1, 8, 2, 7])
    # inversion is an automorphism of an abelian group
    for part in C.orbit_partition:
        assert {G.inv[x] for x in part} == set(part)


def test_non_fused_transitive_set_in_f21():
    G = frobenius_21()
    assert automorphism_group(G).order == 42
    C = make_connection_set(G, [1, 2, 4, 11])
    assert len(C.orbit_partition) == 2
    assert is_transitive_set(C)
    a, b = C.orbit_partition
    assert sorted(G.inv[x] for x in a) == list(b)


def test_product_transitive_set():
    Z3 = build_cyclic(3)
    D = build_dihedral(3)
    E = product_transitive_set(make_connection_set(Z3, [1, 2]), make_connection_set(D, [3, 4]))
    assert has_transitive_orbits(E)
    assert len(E) == 4


def test_product_transitive_set_generation_is_not_automatic():
    Z2 = build_cyclic(2)
    C = make_connection_set(Z2, [1])
    E = product_transitive_set(C, C)
    assert has_transitive_orbits(E)
    assert not is_generating(E)


def test_product_of_two_non_fused_sets_rejected():
    G = frobenius_21()
    C = make_connection_set(G, [1, 2, 4, 11])
    with pytest.raises(PreconditionFailed):
        product_transitive_set(C, C)


def test_transitive_image_under_automorphism():
    G = build_dihedral(5)
    C = make_connection_set(G, [5, 6])
    for s in automorphism_group(G):
        D = transitive_set_image(C, s)
        assert is_transitive_set(D)


@pytest.mark.parametrize("n", range(3, 13))
def test_maximal_core_recovers_lattice_members(n):
    G = build_dihedral(n)
    for S in ([1, n - 1, n], [n, n + 1], list(range(n, 2 * n))):
        C = make_connection_set(G, S)
        for N in invariant_normal_lattice(C).maximal:
            for M in maximal_subgroups(G):
                if N <= M:
                    assert maximal_core(C, M).elements == N.elements


def test_coset_profile_constant_on_transitive_sets():
    for spec, G in builder_catalogue(12):
        for S in inverse_closed_subsets(G):
            if G.closure_mask(S) != G.full_mask:
                continue
            C = make_connection_set(G, S)
            if has_transitive_orbits(C):
                prof = coset_profile(C)
                assert prof.ell * len(prof.nonempty_cosets) == len(C)


def test_coset_profile_needs_transitive():
    G = build_dihedral(6)
    with pytest.raises(NotTransitive):
        coset_profile(make_connection_set(G, [1, 5, 6]))


def test_s5_fixture_and_a5():
    G = load_s5()
    A5 = next(N for N in all_normal_subgroups(G) if N.order == 60)
    assert frattini_subgroup(G).elements == (0,)
    rng = random.Random(1)
    for _ in range(3):
        C = make_connection_set(G, random_generating_set(G, rng, p=0.05))
        assert A5 <= relative_frattini(C)


def test_a5_transitive_class_has_ell_one():
    S5 = load_s5()
    A5n = next(N for N in all_normal_subgroups(S5) if N.order == 60)
    G = subgroup_as_group(S5, A5n.elements, "A5")
    invol = [x for x in range(1, 60) if G.inv[x] == x]
    C = make_connection_set(G, invol)
    assert len(C) == 15
    assert is_transitive_set(C)
    assert relative_frattini(C).elements == (0,)
    assert coset_profile(C).ell == 1


def test_element_syntax():
    G = build_dihedral(6)
    assert parse_element(G, "b") == 6
    assert parse_element(G, "b.a^2") == 8
    assert parse_element(G, "ba^-1") == 11
    assert parse_element(G, "a^7") == 1
    assert parse_element(G, "a") == 1
    assert parse_element(G, "1") == 1
    assert parse_element(G, "7") == 7
    assert parse_connection_set(G, "all-reflections") == tuple(range(6, 12))
    assert element_name(G, 9) == "b.a^3"
    with pytest.raises(SpecParseError):
        parse_element(G, "c")
    with pytest.raises(SpecParseError):
        parse_connection_set(build_cyclic(4), "all-reflections")
    E = build_elementary_abelian(2, 4)
    assert element_name(E, 11) == "(1,0,1,1)"


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["dihedral:4", "dihedral:5", "cyclic:10", "elemab:2^3", "product(cyclic:2,cyclic:6)"]), st.integers(0, 10**6))
def test_phi_contains_group_frattini_and_is_invariant(spec, seed):
    G = parse_group_spec(spec)
    C = make_connection_set(G, random_generating_set(G, random.Random(seed)))
    phi = relative_frattini(C)
    assert frattini_subgroup(G) <= phi
    assert all(s.apply_mask(phi.mask) == phi.mask for s in C.aut_gc)
    # a generating C never lies inside Phi(G;C) unless G is trivial
    assert not set(C.elements) <= set(phi.elements)
