import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from multitrans.core import (
    ConstructionError,
    MultiTransversal,
    ParamSet,
    RangeError,
    k_subsets,
)
from multitrans.construct import (
    FracWindow,
    beta_grid,
    construct_full,
    mu_scaled_params,
    engel_count,
    fractional_construction,
    full_for_all_beta,
    gencond_check,
    interval_union,
    interval_union_construction,
    linear_combination,
    oarray_recipe,
    partition_pi,
    residue_histogram,
    tensor_product,
    window_count,
)
from multitrans.transversal import check_transversal, fullness, konstant_holds, moa_strength, to_moa

import oracles

F = Fraction


def mt(n, vs):
    return MultiTransversal.from_vectors(n, vs)


def test_window_validation():
    with pytest.raises(RangeError):
        FracWindow(F(0), F(0))
    with pytest.raises(RangeError):
        FracWindow(F(1, 2), F(2, 3))
    assert F(1, 3) in FracWindow(F(0), F(1, 2))
    assert F(1, 2) not in FracWindow(F(0), F(1, 2))


def test_engel_examples():
    assert engel_count(5, 0, FracWindow(F(0), F(2, 5))) == 2
    assert engel_count(4, 0, FracWindow(F(0), F(1))) == 4
    # i = 0, 1, 2 give 1/7, 10/21, 17/21; only 17/21 lies in [1/2, 5/6)
    assert engel_count(3, F(1, 7), FracWindow(F(1, 2), F(1, 3))) == 1


rationals01 = st.fractions(min_value=0, max_value=1, max_denominator=100)


@given(st.integers(1, 50), rationals01, rationals01, st.fractions(min_value=0, max_value=3, max_denominator=100))
def test_engel_bound(n, mu, b, alpha):
    assume(mu > 0)
    w = FracWindow(b * (1 - mu), mu)
    assert engel_count(n, alpha, w) in {math.floor(mu * n), math.ceil(mu * n)}


@settings(max_examples=150)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=3), rationals01, rationals01, rationals01)
def test_window_count_matches_enumeration_and_bound(n, mu, b, alpha):
    assume(mu > 0)
    n = tuple(n)
    w = FracWindow(b * (1 - mu), mu)
    got = window_count(n, alpha, w)
    assert got == len(oracles.window_cells(n, w.beta, w.mu, alpha))
    N = math.lcm(*n)
    ell = math.prod(n) // N
    assert got in {ell * math.floor(mu * N), ell * math.ceil(mu * N)}


def test_residues_equidistributed():
    for n in [(2, 3), (4, 6), (2, 2, 3), (6, 4, 5)]:
        N = math.lcm(*n)
        assert residue_histogram(n) == (math.prod(n) // N,) * N


def test_fractional_examples():
    assert fractional_construction((2, 3), FracWindow(F(0), F(1, 3))) == mt((2, 3), [(0, 0), (1, 2)])
    assert fractional_construction((2, 2), FracWindow(F(0), F(1, 2))) == mt((2, 2), [(0, 0), (1, 1)])
    assert fractional_construction((2, 3, 2), FracWindow(F(0), F(1))) == MultiTransversal.full_box((2, 3, 2))


@settings(max_examples=150)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), rationals01, rationals01)
def test_fractional_matches_enumeration(n, mu, b):
    assume(mu > 0)
    n = tuple(n)
    w = FracWindow(b * (1 - mu), mu)
    assert fractional_construction(n, w) == mt(n, oracles.window_cells(n, w.beta, w.mu))


def test_gencond_examples():
    p = ParamSet.uniform((2, 3, 5), 2, 1)
    assert gencond_check(p, F(1, 15))
    assert not gencond_check(p, F(1, 5))
    assert gencond_check(p, F(1, 30))


def test_construct_full_examples():
    T = construct_full(ParamSet.uniform((2, 3), 1, 1))
    assert T == mt((2, 3), [(0, 0), (1, 2)])
    p = ParamSet.uniform((2, 3, 5), 2, 1)
    T = construct_full(p)
    assert T.size == 2 and check_transversal(T, p).ok and fullness(T, p)[0]
    q = ParamSet((2, 4, 8), 2, {(0, 1): 2, (0, 2): 4, (1, 2): 8})
    T = construct_full(q)
    assert T.size == 16 and T.is_simple()
    assert fullness(T, q)[0] and moa_strength(to_moa(T, q), 1).holds


def test_construct_full_reports_subset():
    # K = 24, N = 12, ell = 2, mu* = 5/24: 2 * ceil(60/24) = 6 > 5
    with pytest.raises(ConstructionError) as e:
        construct_full(ParamSet((4, 6), 2, {(0, 1): 5}))
    assert e.value.subset == (0, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.data())
def test_every_grid_beta_gives_full_transversal(n, data):
    n = tuple(n)
    k = data.draw(st.integers(1, len(n)))
    L = {P: data.draw(st.integers(1, math.prod(n[i] for i in P))) for P in k_subsets(len(n), k)}
    p = ParamSet(n, k, L)
    mu = p.mu_star()
    if not gencond_check(p, mu):
        return
    assert full_for_all_beta(p, mu)


def test_beta_grid_covers_every_selection():
    n, mu = (2, 3), F(1, 3)
    grid = beta_grid(n, mu)
    seen_grid = {fractional_construction(n, FracWindow(b, mu)) for b in grid}
    fine = [F(j, 360) for j in range(0, 241)]
    seen_fine = {fractional_construction(n, FracWindow(b, mu)) for b in fine}
    assert seen_fine <= seen_grid


def test_monotonicity_shrinking_mu():
    p = ParamSet.uniform((3, 4), 1, 1)
    mu = p.mu_star()
    for smaller in (mu / 2, mu / 3):
        for b in beta_grid(p.n, smaller):
            assert check_transversal(fractional_construction(p.n, FracWindow(b, smaller)), p).ok


def test_partition_examples():
    parts = partition_pi(ParamSet.uniform((2, 2), 1, 1), F(1, 2))
    assert parts == [mt((2, 2), [(0, 0), (1, 1)]), mt((2, 2), [(0, 1), (1, 0)])]
    assert partition_pi(ParamSet.uniform((2, 2), 1, 2), F(1)) == [MultiTransversal.full_box((2, 2))]
    p = ParamSet.uniform((2, 3), 1, 1)
    parts = partition_pi(p, F(1, 3))
    assert [T.size for T in parts] == [2, 2, 2]
    union = Counter()
    for T in parts:
        union.update(T.as_dict())
        assert check_transversal(T, p).ok
    assert union == Counter(MultiTransversal.full_box((2, 3)).as_dict())
    with pytest.raises(ConstructionError):
        partition_pi(p, F(1, 2))


def test_recipe_examples():
    p, mu = oarray_recipe((2, 2, 2), 2, 4)
    assert p.n == (2, 4, 8) and mu == F(1, 4)
    assert p.L == {(0, 1): 2, (0, 2): 4, (1, 2): 8}
    p, mu = oarray_recipe((2, 3), 1, 2)
    assert p.n == (2, 6) and p.L == {(0,): 1, (1,): 3}
    p, mu = oarray_recipe((5,), 1, 5)
    assert p.L == {(0,): 1}
    with pytest.raises(ConstructionError):
        oarray_recipe((2, 3), 1, 4)


def test_mu_scaled_params():
    assert mu_scaled_params((2, 4, 8), 2, F(1, 4)).L == {(0, 1): 2, (0, 2): 4, (1, 2): 8}
    with pytest.raises(ConstructionError) as e:
        mu_scaled_params((2, 3), 1, F(1, 2))
    assert e.value.subset == (1,)


def test_interval_union_degenerate_and_alternating():
    n, mu = (2, 4, 8), F(1, 4)
    assert interval_union_construction(n, 2, mu, [F(1, 8)]) == fractional_construction(n, FracWindow(F(1, 8), mu))
    betas = [F(0), F(1, 8), F(3, 16)]
    T = interval_union_construction(n, 2, mu, betas)
    p = mu_scaled_params(n, 2, mu)
    assert T.size == 16 and T.is_simple()
    assert moa_strength(to_moa(T, p), 1).holds
    singles = {fractional_construction(n, FracWindow(b, mu)) for b in beta_grid(n, mu)}
    assert T not in singles
    # alternating sum T1 - T2 + T3 of the single windows
    parts = [fractional_construction(n, FracWindow(b, mu)) for b in betas]
    alt = Counter(parts[0].as_dict())
    alt.subtract(parts[1].as_dict())
    alt.update(parts[2].as_dict())
    assert {v: c for v, c in alt.items() if c} == T.as_dict()


def test_interval_union_guards():
    with pytest.raises(ConstructionError):
        interval_union(F(1, 4), [F(0), F(1, 8)])
    with pytest.raises(ConstructionError):
        interval_union(F(1, 4), [F(1, 8), F(0), F(1, 16)])
    with pytest.raises(ConstructionError):
        interval_union(F(1, 4), [F(0), F(1, 8), F(1, 2)])


def test_interval_union_spec_offsets_equal_single_window():
    # pieces [0,1/16), [1/8,1/4), [5/16,3/8) meet the grid (1/8)Z in 0 and 1/8 only,
    # which is exactly what the single window [0, 1/4) selects
    n, mu = (2, 4, 8), F(1, 4)
    T = interval_union_construction(n, 2, mu, [F(0), F(1, 16), F(1, 8)])
    assert T == fractional_construction(n, FracWindow(F(0), mu))


def test_linear_combination_examples():
    p = ParamSet.uniform((2, 2), 1, 1)
    T1 = mt((2, 2), [(0, 0), (1, 1)])
    T2 = mt((2, 2), [(0, 1), (1, 0)])
    T, q = linear_combination([(1, T1, p), (1, T2, p)])
    assert T == MultiTransversal.full_box((2, 2)) and q.L == {(0,): 2, (1,): 2}
    full = MultiTransversal.full_box((2, 2))
    T, q = linear_combination([(1, full, ParamSet.uniform((2, 2), 1, 2)), (-1, T2, p)], mode="moa")
    assert T == T1 and q == p
    T, q = linear_combination([(F(1, 2), MultiTransversal((2, 2), {(0, 0): 2, (1, 1): 2}), ParamSet.uniform((2, 2), 1, 2))] * 2)
    assert T == MultiTransversal((2, 2), {(0, 0): 2, (1, 1): 2})


def test_linear_combination_guards():
    p = ParamSet.uniform((2, 2), 1, 1)
    T1 = mt((2, 2), [(0, 0), (1, 1)])
    with pytest.raises(ConstructionError, match="positive"):
        linear_combination([(-1, T1, p)])
    with pytest.raises(ConstructionError, match="not a non-negative integer"):
        linear_combination([(F(1, 2), T1, p)])
    with pytest.raises(ConstructionError, match="MOA"):
        linear_combination([(1, mt((2, 2), [(0, 0)]), p)], mode="moa")


def test_tensor_examples():
    p = ParamSet.uniform((2, 2), 1, 1)
    T1 = mt((2, 2), [(0, 0), (1, 1)])
    T, q = tensor_product(T1, p, T1, p)
    assert T == mt((4, 4), [(0, 0), (1, 1), (2, 2), (3, 3)])
    assert q.L == {(0,): 1, (1,): 1} and fullness(T, q)[0]
    one = ParamSet.uniform((1, 1), 1, 1)
    T, q = tensor_product(T1, p, mt((1, 1), [(0, 0)]), one)
    assert T == T1 and q == p
    with pytest.raises(ConstructionError):
        tensor_product(T1, p, mt((2,), [(0,)]), ParamSet.uniform((2,), 1, 1))
