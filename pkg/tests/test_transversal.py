import itertools

import pytest
from hypothesis import given, settings, strategies as st

from multitrans.core import ConversionError, MultiTransversal, ParamSet, PreconditionError, k_subsets
from multitrans.transversal import (
    Moa,
    check_transversal,
    delete_column,
    from_moa,
    fullness,
    konstant_holds,
    moa_strength,
    size_upper_bound,
    to_moa,
)

import oracles


def test_check_examples():
    p = ParamSet.uniform((2, 3), 1, 1)
    assert check_transversal(MultiTransversal.from_vectors((2, 3), [(0, 0), (1, 2)]), p).ok
    rep = check_transversal(MultiTransversal.from_vectors((2, 3), [(0, 0), (0, 1)]), p)
    assert not rep.ok
    [w] = rep.witnesses
    assert (w.P, w.fixed, w.count, w.bound) == ((1,), (0,), 2, 1)
    assert check_transversal(MultiTransversal((2, 3)), p).ok


def test_n_mismatch_is_precondition_error():
    with pytest.raises(PreconditionError):
        check_transversal(MultiTransversal((2, 2)), ParamSet.uniform((2, 3), 1, 1))


@st.composite
def instances(draw):
    n = tuple(draw(st.lists(st.integers(1, 4), min_size=1, max_size=3)))
    k = draw(st.integers(1, len(n)))
    L = {P: draw(st.integers(1, 3)) for P in k_subsets(len(n), k)}
    cells = oracles.cells(n)
    counts = {v: draw(st.integers(0, 2)) for v in cells}
    return MultiTransversal(n, counts), ParamSet(n, k, L)


@settings(max_examples=300)
@given(instances())
def test_check_agrees_with_fixing_enumeration(inst):
    T, p = inst
    got = sorted((w.P, w.fixed, w.count) for w in check_transversal(T, p).witnesses)
    want = sorted(oracles.transversal_violations(T.as_dict(), p.n, p.k, p.L))
    assert got == want


@settings(max_examples=300)
@given(instances())
def test_size_bound_and_tightness(inst):
    T, p = inst
    if not check_transversal(T, p).ok:
        return
    assert T.size <= size_upper_bound(p)
    full, tight = fullness(T, p)
    if konstant_holds(p) and full:
        assert set(tight) == set(p.L)


def test_fullness_examples():
    p = ParamSet.uniform((2, 3), 1, 1)
    assert fullness(MultiTransversal.from_vectors((2, 3), [(0, 0), (1, 2)]), p) == (True, [(1,)])
    assert fullness(MultiTransversal.from_vectors((2, 3), [(0, 0)]), p) == (False, [])
    q = ParamSet.uniform((2, 2), 1, 1)
    assert fullness(MultiTransversal.from_vectors((2, 2), [(0, 0), (1, 1)]), q) == (True, [(0,), (1,)])
    with pytest.raises(PreconditionError):
        fullness(MultiTransversal.from_vectors((2, 3), [(0, 0), (0, 1)]), p)


def test_konstant_examples():
    assert konstant_holds(ParamSet.uniform((2, 2), 1, 1))
    assert not konstant_holds(ParamSet.uniform((2, 3), 1, 1))
    assert konstant_holds(ParamSet((2, 4, 8), 2, {(0, 1): 2, (0, 2): 4, (1, 2): 8}))


def test_to_moa_examples():
    p = ParamSet.uniform((2, 2), 1, 1)
    A = to_moa(MultiTransversal.from_vectors((2, 2), [(0, 0), (1, 1)]), p)
    assert A.rows == ((0, 0), (1, 1)) and A.strength == 1 and A.lam == {(0,): 1, (1,): 1}
    q = ParamSet.uniform((2, 2), 1, 2)
    B = to_moa(MultiTransversal.full_box((2, 2)), q)
    assert B.runs == 4 and B.lam == {(0,): 2, (1,): 2}
    with pytest.raises(ConversionError, match="not full"):
        to_moa(MultiTransversal.from_vectors((2, 2), [(0, 0)]), p)
    with pytest.raises(ConversionError, match="constancy"):
        to_moa(MultiTransversal.from_vectors((2, 3), [(0, 0), (1, 2)]), ParamSet.uniform((2, 3), 1, 1))


def test_moa_strength_examples():
    A = Moa((2, 2), ((0, 0), (1, 1)), 1)
    assert moa_strength(A, 1).holds and moa_strength(A, 1).lam == {(0,): 1, (1,): 1}
    res = moa_strength(A, 2)
    assert not res.holds
    J, a, ca, b, cb = res.witness
    assert J == (0, 1) and ca != cb
    assert moa_strength(A, 0).lam == {(): 2}


@settings(max_examples=200)
@given(
    st.lists(st.integers(1, 3), min_size=1, max_size=3).flatmap(
        lambda lv: st.tuples(
            st.just(tuple(lv)),
            st.lists(st.tuples(*(st.integers(0, x - 1) for x in lv)), max_size=8),
            st.integers(0, len(lv)),
        )
    )
)
def test_moa_strength_matches_oracle(args):
    levels, rows, d = args
    assert moa_strength(Moa(levels, tuple(rows), d), d).holds == oracles.strength_holds(levels, rows, d)


def test_from_moa_examples_and_round_trip():
    grid = Moa((2, 2), tuple(itertools.product(range(2), range(2))), 1)
    T, p = from_moa(grid, 1)
    assert p.k == 1 and p.L == {(0,): 2, (1,): 2}
    assert check_transversal(T, p).ok and fullness(T, p)[0]
    A = to_moa(T, p)
    T2, p2 = from_moa(A, 1)
    assert (T2, p2) == (T, p)
    with pytest.raises(ConversionError, match="strength"):
        from_moa(Moa((2, 2), ((0, 0), (0, 1)), 1), 1)
    with pytest.raises(ConversionError):
        from_moa(grid, 2)


def test_delete_column_keeps_strength():
    rows = tuple(r for r in itertools.product(range(2), repeat=3) if sum(r) % 2 == 0)
    A = Moa((2, 2, 2), rows, 2)
    assert moa_strength(A, 2).holds
    B = delete_column(A, 1)
    assert B.M == 2 and moa_strength(B, 2).holds
