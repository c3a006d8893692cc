import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from multitrans.core import MultiTransversal, ParamSet, ProfileMatrix, ScaleError
from multitrans.hull import (
    GammaConstraint,
    GammaRow,
    ProductPermutation,
    all_product_permutations,
    cap_gamma,
    convex_decomposition,
    enumerate_transversals,
    extreme_points,
    gamma_ok_family,
    gamma_ok_multiset,
    homogeneous_candidates,
    initial_family,
    initial_part,
    is_lem,
    restricted_profile_set,
    s_matrix,
    simplicity_gamma,
    t_matrix,
)
from multitrans.sperner import (
    SetFamily,
    check_sperner,
    enumerate_sperner_families,
    example1,
    parted,
    profile_matrix,
    realize_homogeneous,
)
from multitrans.transversal import check_transversal

import oracles

F = Fraction


def mt(n, vs):
    return MultiTransversal.from_vectors(n, vs)


def test_s_and_t_matrices():
    I = mt((3, 3), [(1, 1)])
    assert s_matrix(I).counts == {(1, 1): 4}
    assert t_matrix(I).counts == {(1, 1): 1}
    empty = MultiTransversal((3, 3))
    assert s_matrix(empty).counts == {} and t_matrix(empty).counts == {}


@pytest.mark.parametrize("n", [(2, 2), (3, 2), (2, 3), (4,)])
def test_s_matrix_is_profile_of_realization(n):
    m = tuple(x - 1 for x in n)
    cells = oracles.cells(n)
    for mults in itertools.product(range(3), repeat=len(cells)):
        I = MultiTransversal(n, dict(zip(cells, mults)))
        assert s_matrix(I) == profile_matrix(realize_homogeneous(I, m))


def test_initial_family_examples():
    I = mt((3, 2), [(1, 0)])
    assert initial_family(I, ProductPermutation.identity((2, 1))) == SetFamily.from_sets((2, 1), [parted([0], [])])
    swapped = ProductPermutation(((1, 0), (0,)))
    assert initial_family(I, swapped) == SetFamily.from_sets((2, 1), [parted([1], [])])
    assert len(initial_family(MultiTransversal((3, 2)), swapped)) == 0


@pytest.mark.parametrize("n", [(2, 3), (3, 3), (3,)])
def test_initial_family_properties(n):
    m = tuple(x - 1 for x in n)
    p = ParamSet.uniform(n, 1, 2)
    G = cap_gamma(n, 2) + GammaConstraint((GammaRow(2, {v: 1 for v in oracles.cells(n)}),))
    for I in enumerate_transversals(p):
        for L in all_product_permutations(m):
            H = initial_family(I, L)
            assert profile_matrix(H) == t_matrix(I)
            assert initial_part(H, L) == H
            assert gamma_ok_family(H, G) == gamma_ok_multiset(I, G)


def test_gamma_examples():
    G = simplicity_gamma((2, 2))
    simple = SetFamily.from_sets((1, 1), [parted([], []), parted([0], [0])])
    double = SetFamily((1, 1), {parted([], []): 2})
    assert gamma_ok_family(simple, G) and not gamma_ok_family(double, G)
    assert gamma_ok_family(double, GammaConstraint())
    zero = GammaConstraint((GammaRow(0, {v: 1 for v in oracles.cells((2, 2))}),))
    assert gamma_ok_family(SetFamily((1, 1)), zero) and not gamma_ok_family(simple, zero)
    assert gamma_ok_multiset(MultiTransversal((2, 2)), zero)
    assert not gamma_ok_multiset(mt((2, 2), [(0, 0)]), zero)


def test_gamma_family_uses_max_multiplicity_per_profile():
    # two distinct sets with profile (1,) at multiplicities 1 and 2: family mode sees 2, not 3
    F_ = SetFamily((2,), {parted([0]): 1, parted([1]): 2})
    assert gamma_ok_family(F_, cap_gamma((3,), 2))
    assert not gamma_ok_family(F_, cap_gamma((3,), 1))


def test_enumerate_examples():
    got = enumerate_transversals(ParamSet.uniform((2, 2), 1, 1), simple_only=True)
    assert len(got) == 7
    assert mt((2, 2), [(0, 0), (1, 1)]) in got and mt((2, 2), [(0, 1), (1, 0)]) in got
    got = enumerate_transversals(ParamSet.uniform((3,), 1, 1), simple_only=True)
    assert sorted(T.size for T in got) == [0, 1, 1, 1]
    big = ParamSet.uniform((2, 2), 1, 2)
    assert MultiTransversal.full_box((2, 2)) in enumerate_transversals(big)
    with pytest.raises(ScaleError):
        enumerate_transversals(ParamSet.uniform((4, 4), 1, 1))


@pytest.mark.parametrize("n,k,L", [((2, 2), 1, 1), ((2, 2), 1, 2), ((2, 3), 1, 2), ((3,), 1, 2), ((2, 2, 2), 2, 1)])
def test_enumerate_matches_brute_force(n, k, L):
    p = ParamSet.uniform(n, k, L)
    cells = oracles.cells(n)
    want = set()
    for mults in itertools.product(range(L + 1), repeat=len(cells)):
        counts = dict(zip(cells, mults))
        if not oracles.transversal_violations(counts, n, k, p.L):
            want.add(MultiTransversal(n, counts))
    got = enumerate_transversals(p)
    assert len(got) == len(set(got)) and set(got) == want


def test_extreme_points_single_part():
    pts = extreme_points(ParamSet.uniform((3,), 1, 1), simplicity_gamma((3,)))
    assert sorted(S.vector() for S in pts) == [(0, 0, 0), (0, 0, 1), (0, 2, 0), (1, 0, 0)]


def test_extreme_points_simple_box_are_all_candidates():
    p = ParamSet.uniform((2, 2), 1, 1)
    G = simplicity_gamma((2, 2))
    pts = extreme_points(p, G)
    want = {s_matrix(I) for I in enumerate_transversals(p, simple_only=True)}
    assert len(pts) == 7 and set(pts) == want


def test_cap_two_has_non_extreme_candidates():
    p = ParamSet.uniform((3,), 1, 2)
    G = cap_gamma((3,), 2)
    cands = homogeneous_candidates(p, G)
    pts = extreme_points(p, G)
    assert len(pts) < len(cands)
    mid = s_matrix(MultiTransversal((3,), {(0,): 1}))
    assert mid in cands and mid not in pts
    lam = convex_decomposition(mid, [s_matrix(MultiTransversal((3,))), s_matrix(MultiTransversal((3,), {(0,): 2}))])
    assert lam == [F(1, 2), F(1, 2)]


def test_decomposition_examples():
    A = ProfileMatrix((2, 2), {(0, 0): 1})
    B = ProfileMatrix((2, 2), {(1, 1): 1})
    assert convex_decomposition(A, [A, B]) == [1, 0]
    assert convex_decomposition(ProfileMatrix((2, 2), {(0, 0): F(1, 2), (1, 1): F(1, 2)}), [A, B]) == [F(1, 2)] * 2
    assert convex_decomposition(ProfileMatrix((2, 2), {(0, 0): 2}), [A, B]) is None
    assert convex_decomposition(A, []) is None


def _check_combination(target, cands, lam):
    assert all(x >= 0 for x in lam) and sum(lam) == 1
    for v in oracles.cells(target.n):
        assert sum(x * c[v] for x, c in zip(lam, cands)) == target[v]


def test_example1_profile_decomposes():
    F_ = example1((2, 2), 1, 2, [[[0]], [[1]]], [[0, 2]])
    p = ParamSet.uniform((3, 3), 2, 1)
    cands = homogeneous_candidates(p, simplicity_gamma((3, 3)))
    target = profile_matrix(F_)
    lam = convex_decomposition(target, cands)
    assert lam is not None
    _check_combination(target, cands, lam)


@pytest.mark.parametrize("m", [(1, 1), (1, 2)])
@pytest.mark.parametrize("cap", [1, 2])
def test_every_sperner_family_decomposes(m, cap):
    n = tuple(x + 1 for x in m)
    p = ParamSet.uniform(n, 1, 1 if cap == 1 else 2)
    G = cap_gamma(n, cap)
    cands = homogeneous_candidates(p, G)
    seen = set()
    for F_ in enumerate_sperner_families(p, max_mult=cap):
        if not gamma_ok_family(F_, G):
            continue
        target = profile_matrix(F_)
        if target in seen:
            continue
        seen.add(target)
        lam = convex_decomposition(target, cands)
        assert lam is not None, F_
        _check_combination(target, cands, lam)


@pytest.mark.parametrize("m,k,L", [((1, 1), 1, 1), ((1, 2), 1, 1), ((2,), 1, 2)])
def test_restricted_profiles_do_not_depend_on_permutation(m, k, L):
    n = tuple(x + 1 for x in m)
    p = ParamSet.uniform(n, k, L)
    fams = list(enumerate_sperner_families(p, max_mult=L))
    sets = {restricted_profile_set(fams, perm) for perm in all_product_permutations(m)}
    assert len(sets) == 1


def test_lem_examples():
    p = ParamSet.uniform((2, 2), 1, 1)
    G = simplicity_gamma((2, 2))
    comp = enumerate_transversals(p, G)
    for I in comp:
        assert is_lem(I, p, G, comp) is not None
    assert is_lem(MultiTransversal((2, 2)), p, G, comp) == []


def test_lem_cap_two_single_column():
    p = ParamSet.uniform((2,), 1, 2)
    G = cap_gamma((2,), 2)
    comp = enumerate_transversals(p, G)
    assert is_lem(MultiTransversal((2,), {(0,): 2}), p, G, comp) == [(0,)]
    assert is_lem(MultiTransversal((2,), {(0,): 1}), p, G, comp) is None
    # whichever vector comes first, the competitor doubling it wins
    assert is_lem(MultiTransversal((2,), {(0,): 1, (1,): 1}), p, G, comp) is None


def _lem_bruteforce(I, comp):
    supp = I.support()
    for order in itertools.permutations(supp):
        ok = True
        for l in range(len(order)):
            prefix = order[:l]
            for C in comp:
                if all(v in C and C[v] == I[v] for v in prefix) and C[order[l]] > I[order[l]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


@pytest.mark.parametrize("n,k,L,cap", [((2, 2), 1, 2, 2), ((3,), 1, 2, 2), ((2, 3), 1, 2, 2), ((2, 2), 1, 1, 1)])
def test_lem_search_matches_permutation_search_and_is_extreme(n, k, L, cap):
    p = ParamSet.uniform(n, k, L)
    G = cap_gamma(n, cap)
    comp = enumerate_transversals(p, G)
    pts = set(extreme_points(p, G))
    for I in comp:
        order = is_lem(I, p, G, comp)
        assert (order is not None) == _lem_bruteforce(I, comp)
        if order is not None:
            assert sorted(order) == I.support()
            assert s_matrix(I) in pts
