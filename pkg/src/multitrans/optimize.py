"""Maximum-weight simple transversals, closed-form maximum family sizes, and the homogeneity-of-maxima experiment."""

from __future__ import annotations

import bisect
import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod

from .core import (
    MultiTransversal,
    ParamSet,
    PreconditionError,
    RangeError,
    ScaleError,
    Vector,
    as_fraction,
    complement,
    enumerate_pi,
    weight,
)
from .sperner import (
    SetFamily,
    blym_report,
    enumerate_sperner_families,
    is_homogeneous,
)

EXHAUSTIVE_LIMIT = 20
BNB_LIMIT = 10_000


@dataclass(frozen=True)
class SolveResult:
    best: MultiTransversal
    weight: int
    node_count: int
    optimal: bool = True


def _check_m(p: ParamSet, m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(int(x) for x in m)
    if tuple(x + 1 for x in m) != p.n:
        raise PreconditionError(f"part sizes {m} do not match n={p.n}")
    return m


def _better(w: int, key: tuple, best_w: int, best_key: tuple | None) -> bool:
    return w > best_w or (w == best_w and (best_key is None or key < best_key))


def _exhaustive(p: ParamSet, m: tuple[int, ...]) -> SolveResult:
    cells = enumerate_pi(p.n)
    fibers = [[(P, tuple(v[j] for j in complement(P, p.M))) for P in p.L] for v in cells]
    W = [weight(v, m) for v in cells]
    load: dict = {}
    chosen: list[int] = []
    state = {"w": -1, "key": None, "nodes": 0}

    def rec(i: int, w: int) -> None:
        state["nodes"] += 1
        if i == len(cells):
            key = tuple(cells[a] for a in chosen)
            if _better(w, key, state["w"], state["key"]):
                state["w"], state["key"] = w, key
            return
        if all(load.get(f, 0) < p.L[f[0]] for f in fibers[i]):
            for f in fibers[i]:
                load[f] = load.get(f, 0) + 1
            chosen.append(i)
            rec(i + 1, w + W[i])
            chosen.pop()
            for f in fibers[i]:
                load[f] -= 1
        rec(i + 1, w)

    rec(0, 0)
    best = MultiTransversal.from_vectors(p.n, state["key"])
    return SolveResult(best, state["w"], state["nodes"])


def _branch_and_bound(p: ParamSet, m: tuple[int, ...]) -> SolveResult:
    # heaviest profiles first; ties in lexicographic order
    cells = sorted(enumerate_pi(p.n), key=lambda v: (-weight(v, m), v))
    W = [weight(v, m) for v in cells]
    Ps = list(p.L)
    fiber_of = [[(P, tuple(v[j] for j in complement(P, p.M))) for P in Ps] for v in cells]

    # per fiber: cell positions in branch order and prefix sums of their weights
    members: dict = {}
    for i, fs in enumerate(fiber_of):
        for f in fs:
            members.setdefault(f, []).append(i)
    prefix = {f: list(itertools.accumulate((W[i] for i in idx), initial=0)) for f, idx in members.items()}
    by_P: dict = {P: [f for f in members if f[0] == P] for P in Ps}

    load: dict = {}
    chosen: list[int] = []
    state = {"w": -1, "key": None, "nodes": 0}

    def bound(i: int) -> int:
        # each fiber of P can still take at most its residual capacity, best weights first
        best = None
        for P in Ps:
            total = 0
            for f in by_P[P]:
                idx = members[f]
                s = bisect.bisect_left(idx, i)
                r = min(p.L[P] - load.get(f, 0), len(idx) - s)
                if r > 0:
                    total += prefix[f][s + r] - prefix[f][s]
            if best is None or total < best:
                best = total
        return best or 0

    def rec(i: int, w: int) -> None:
        state["nodes"] += 1
        if i == len(cells):
            key = tuple(sorted(cells[a] for a in chosen))
            if _better(w, key, state["w"], state["key"]):
                state["w"], state["key"] = w, key
            return
        # strict comparison keeps every tie alive for the lexicographic tie-break
        if w + bound(i) < state["w"]:
            return
        if all(load.get(f, 0) < p.L[f[0]] for f in fiber_of[i]):
            for f in fiber_of[i]:
                load[f] = load.get(f, 0) + 1
            chosen.append(i)
            rec(i + 1, w + W[i])
            chosen.pop()
            for f in fiber_of[i]:
                load[f] -= 1
        rec(i + 1, w)

    rec(0, 0)
    best = MultiTransversal.from_vectors(p.n, state["key"])
    return SolveResult(best, state["w"], state["nodes"])


def max_weight_transversal(p: ParamSet, m: Iterable[int], mode: str = "bnb") -> SolveResult:
    """Heaviest simple transversal C with weight sum_{v in C} prod_j C(m_j, v_j).

    Among optimal sets the one whose sorted vector list is lexicographically
    smallest is returned, so both modes give identical answers.
    """
    m = _check_m(p, m)
    cells = prod(p.n)
    if mode == "exhaustive":
        if cells > EXHAUSTIVE_LIMIT:
            raise ScaleError(f"exhaustive mode handles at most {EXHAUSTIVE_LIMIT} cells, got {cells}")
        return _exhaustive(p, m)
    if mode in ("bnb", "branch_and_bound"):
        if cells > BNB_LIMIT:
            raise ScaleError(f"branch and bound handles at most {BNB_LIMIT} cells, got {cells}")
        return _branch_and_bound(p, m)
    raise RangeError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- closed forms


def max_size_k_eq_M(m: Iterable[int]) -> int:
    return prod(comb(x, x // 2) for x in m)


def max_size_k_eq_M_minus_1(m: Iterable[int]) -> int:
    """Maximum size for k = M - 1, all L_P = 1; the last part must be the smallest."""
    m = tuple(m)
    if not m or m[-1] != min(m):
        raise PreconditionError(f"last part size must be the minimum, got m={m}; permute the parts first")
    total = 0
    for i in range(m[-1] + 1):
        shift = (-1) ** i * ((i + 1) // 2)
        total += prod(comb(x, (x + 1) // 2 + shift) for x in m)
    return total


def rearrangement_max(a: Sequence[Sequence]) -> Fraction:
    """Sum over rows of the row products; with every column non-increasing this beats any re-alignment."""
    rows = [[as_fraction(x) for x in r] for r in a]
    if not rows:
        return Fraction(0)
    M = len(rows[0])
    if any(len(r) != M for r in rows):
        raise RangeError("ragged matrix")
    for j in range(M):
        col = [r[j] for r in rows]
        if any(x < 0 for x in col):
            raise RangeError(f"column {j} has a negative entry")
        if any(x < y for x, y in zip(col, col[1:])):
            raise PreconditionError(f"column {j} is not sorted in descending order")
    return sum((prod(r, start=Fraction(1)) for r in rows), Fraction(0))


# ---------------------------------------------------------------- homogeneity of maxima


@dataclass(frozen=True)
class GenhomVerdict:
    applicable: bool          # 1 <= k < M, or k = M = 1
    hypothesis_holds: bool    # every maximum homogeneous family meets all BLYM bounds with equality
    max_size: int
    maxima: int
    homogeneous_maxima: tuple[SetFamily, ...] = ()
    counterexamples: tuple[SetFamily, ...] = ()
    checked_all: bool = False

    @property
    def all_max_homogeneous(self) -> bool:
        return not self.counterexamples


def genhom_check(p: ParamSet, m: Iterable[int], max_mult: int = 1, max_sets: int = 16) -> GenhomVerdict:
    """Enumerate all maximum size Sperner (multi-)families and test whether they are homogeneous.

    ``max_mult`` > 1 runs the multi-family variant under that explicit cap.
    The non-homogeneous maxima are searched for whether or not the hypothesis
    holds; ``checked_all`` records that the search ran to completion.
    """
    m = _check_m(p, m)
    if 2 ** sum(m) > max_sets:
        raise ScaleError(f"{2 ** sum(m)} candidate sets exceed the guard of {max_sets}")
    fams = list(enumerate_sperner_families(p, max_mult=max_mult))
    best = max(F.size for F in fams)
    maxima = [F for F in fams if F.size == best]
    homog = [F for F in maxima if is_homogeneous(F) is not None]
    hyp = all(all(e.equal for e in blym_report(F, p).values()) for F in homog)
    bad = tuple(F for F in maxima if is_homogeneous(F) is None)
    return GenhomVerdict(
        applicable=(1 <= p.k < p.M) or (p.k == p.M == 1),
        hypothesis_holds=hyp,
        max_size=best,
        maxima=len(maxima),
        homogeneous_maxima=tuple(homog),
        counterexamples=bad,
        checked_all=True,
    )


__all__ = [
    "SolveResult",
    "max_weight_transversal",
    "max_size_k_eq_M",
    "max_size_k_eq_M_minus_1",
    "rearrangement_max",
    "GenhomVerdict",
    "genhom_check",
    "EXHAUSTIVE_LIMIT",
    "BNB_LIMIT",
]
