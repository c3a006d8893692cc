"""M-part Sperner multi-families on a partitioned ground set.

A subset of X = X_0 + ... + X_{M-1} is stored as a *parted set*: a tuple of M
bitmasks, entry ``i`` holding the chosen elements of part ``i`` (bit ``e`` set
means element ``e`` of X_i is present).  The bitmask form is canonical, so
families can be keyed by parted sets directly.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .core import (
    Dimensions,
    MultiTransversal,
    ParamSet,
    PreconditionError,
    ProfileMatrix,
    RangeError,
    Subset,
    Vector,
    _Multiset,
    complement,
    prod,
    weight,
)
from .transversal import ViolationReport

PartedSet = tuple[int, ...]


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask(elements: Iterable[int]) -> int:
    out = 0
    for e in elements:
        out |= 1 << e
    return out


def elements(x: int) -> list[int]:
    return [e for e in range(x.bit_length()) if x >> e & 1]


def parted(*parts: Iterable[int]) -> PartedSet:
    """Build a parted set from per-part element index lists."""
    return tuple(mask(p) for p in parts)


def parted_to_lists(E: PartedSet) -> list[list[int]]:
    return [elements(x) for x in E]


def profile(E: PartedSet) -> Vector:
    return tuple(popcount(x) for x in E)


def level_masks(m: int, t: int) -> list[int]:
    """All t-subsets of an m-set, as bitmasks, in increasing numeric order."""
    return sorted(mask(c) for c in itertools.combinations(range(m), t))


@dataclass(frozen=True)
class GroundSet:
    m: Vector

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if not m or any(x < 1 for x in m):
            raise RangeError(f"part sizes must be >= 1, got {m}")
        object.__setattr__(self, "m", m)

    @property
    def M(self) -> int:
        return len(self.m)

    @property
    def n(self) -> Vector:
        return tuple(x + 1 for x in self.m)

    def all_sets(self) -> list[PartedSet]:
        return list(itertools.product(*(range(1 << x) for x in self.m)))

    def sets_with_profile(self, v: Vector) -> list[PartedSet]:
        return list(itertools.product(*(level_masks(mi, t) for mi, t in zip(self.m, v))))

    def fits(self, E: PartedSet) -> bool:
        return len(E) == len(self.m) and all(0 <= x < (1 << mi) for x, mi in zip(E, self.m))


class SetFamily(_Multiset):
    """Multiset of parted sets over a ground set with part sizes ``m``."""

    def __init__(self, m: Iterable[int], counts: Mapping[PartedSet, int] | None = None):
        self.ground = GroundSet(tuple(m))
        self.m: Vector = self.ground.m
        keyed = {}
        for E, c in (counts or {}).items():
            E = tuple(E)
            if not self.ground.fits(E):
                raise RangeError(f"{E} does not fit part sizes {self.m}")
            keyed[E] = keyed.get(E, 0) + c
        super().__init__(keyed)

    @classmethod
    def from_sets(cls, m: Iterable[int], sets: Iterable[PartedSet]) -> "SetFamily":
        counts: dict[PartedSet, int] = {}
        for E in sets:
            E = tuple(E)
            counts[E] = counts.get(E, 0) + 1
        return cls(m, counts)

    @property
    def M(self) -> int:
        return len(self.m)

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.m == other.m and self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, tuple(self._counts.items())))
        return self._hash

    def __repr__(self):
        def show(E):
            return "|".join("{" + ",".join(map(str, elements(x))) + "}" for x in E)

        body = ", ".join(show(E) + (f"^{c}" if c != 1 else "") for E, c in self._counts.items())
        return f"SetFamily(m={self.m}, [{body}])"


# ---------------------------------------------------------------- chains


def _prefix_sets(mi: int) -> list[frozenset[int]]:
    """For each maximal chain of 2^{X_i} (a permutation), the set of its members as masks."""
    out = []
    for perm in itertools.permutations(range(mi)):
        members = [0]
        acc = 0
        for e in perm:
            acc |= 1 << e
            members.append(acc)
        out.append(frozenset(members))
    return out


_PREFIX_CACHE: dict[int, list[frozenset[int]]] = {}


def maximal_chains(mi: int) -> list[frozenset[int]]:
    if mi not in _PREFIX_CACHE:
        _PREFIX_CACHE[mi] = _prefix_sets(mi)
    return _PREFIX_CACHE[mi]


@dataclass(frozen=True)
class SpernerViolation:
    """Members agreeing with ``fixed`` off P and lying in the chain product ``chains`` exceed the bound.

    ``chains`` holds, for each part of P, the index of a maximal chain in the
    ``itertools.permutations`` order of that part's elements.
    """

    P: Subset
    fixed: tuple[int, ...]
    chains: tuple[int, ...]
    count: int
    bound: int


def _check_params(m: Vector, p: ParamSet) -> None:
    if p.n != tuple(x + 1 for x in m):
        raise PreconditionError(f"parameters use n={p.n} but part sizes m={m} need n=m+1")


def check_sperner(F: SetFamily, p: ParamSet) -> ViolationReport:
    """Check every (P, fixing of the other parts, maximal chain product) against L_P.

    Every chain extends to a maximal one, so maximal chain products attain the
    largest counts.
    """
    _check_params(F.m, p)
    witnesses = []
    for P, bound in p.L.items():
        outside = complement(P, F.M)
        groups: dict[tuple[int, ...], list[tuple[PartedSet, int]]] = {}
        for E, c in F.items():
            groups.setdefault(tuple(E[i] for i in outside), []).append((E, c))
        chain_lists = [maximal_chains(F.m[j]) for j in P]
        for D, members in groups.items():
            if sum(c for _, c in members) <= bound:
                continue
            for idx in itertools.product(*(range(len(cl)) for cl in chain_lists)):
                count = sum(
                    c
                    for E, c in members
                    if all(E[j] in chain_lists[a][idx[a]] for a, j in enumerate(P))
                )
                if count > bound:
                    witnesses.append(SpernerViolation(P, D, idx, count, bound))
    return ViolationReport(tuple(witnesses))


class _SpernerCounter:
    """Incremental chain-product counters used by the exhaustive family enumerators."""

    def __init__(self, m: Vector, p: ParamSet):
        _check_params(m, p)
        self.m = m
        self.p = p
        self.counts: dict[tuple, int] = {}
        self._keys: dict[PartedSet, list[tuple[tuple, int]]] = {}

    def keys(self, E: PartedSet) -> list[tuple[tuple, int]]:
        if E not in self._keys:
            out = []
            for P, bound in self.p.L.items():
                D = tuple(E[i] for i in complement(P, len(self.m)))
                per_part = []
                for j in P:
                    chains = maximal_chains(self.m[j])
                    per_part.append([c for c, members in enumerate(chains) if E[j] in members])
                for idx in itertools.product(*per_part):
                    out.append(((P, D, idx), bound))
            self._keys[E] = out
        return self._keys[E]

    def can_add(self, E: PartedSet, c: int) -> bool:
        return all(self.counts.get(key, 0) + c <= bound for key, bound in self.keys(E))

    def add(self, E: PartedSet, c: int) -> None:
        for key, _ in self.keys(E):
            self.counts[key] = self.counts.get(key, 0) + c


def enumerate_sperner_families(
    p: ParamSet, max_mult: int = 1, sets: Sequence[PartedSet] | None = None
) -> Iterator[SetFamily]:
    """Every Sperner multi-family with multiplicities <= ``max_mult`` (depth-first, canonical order).

    Sub-families of Sperner families are Sperner, so partial assignments that
    already violate a bound are cut off without losing any family.
    """
    m = tuple(x - 1 for x in p.n)
    ground = GroundSet(m)
    sets = list(sets) if sets is not None else ground.all_sets()
    counter = _SpernerCounter(m, p)
    chosen: dict[PartedSet, int] = {}

    def rec(i: int) -> Iterator[SetFamily]:
        if i == len(sets):
            yield SetFamily(m, chosen)
            return
        yield from rec(i + 1)
        E = sets[i]
        for c in range(1, max_mult + 1):
            if not counter.can_add(E, 1):
                break
            counter.add(E, 1)
            chosen[E] = c
            yield from rec(i + 1)
        c = chosen.pop(E, 0)
        if c:
            counter.add(E, -c)

    yield from rec(0)


def enumerate_families(m: Iterable[int], max_mult: int = 1) -> Iterator[SetFamily]:
    """Every multi-family on the ground set with multiplicities <= ``max_mult``."""
    m = tuple(m)
    sets = GroundSet(m).all_sets()
    for mults in itertools.product(range(max_mult + 1), repeat=len(sets)):
        yield SetFamily(m, {E: c for E, c in zip(sets, mults) if c})


# ---------------------------------------------------------------- profiles


def profile_matrix(F: SetFamily) -> ProfileMatrix:
    counts: dict[Vector, int] = {}
    for E, c in F.items():
        v = profile(E)
        counts[v] = counts.get(v, 0) + c
    return ProfileMatrix(Dimensions.from_parts(F.m).n, counts)


def is_homogeneous(F: SetFamily) -> MultiTransversal | None:
    """The multiplicity-by-profile map r as a multiset over pi_M, or None if F is not homogeneous."""
    seen: dict[Vector, list[int]] = {}
    for E, c in F.items():
        seen.setdefault(profile(E), []).append(c)
    r = {}
    for v, mults in seen.items():
        if len(mults) != weight(v, F.m) or len(set(mults)) != 1:
            return None
        r[v] = mults[0]
    return MultiTransversal(Dimensions.from_parts(F.m).n, r)


def realize_homogeneous(I: MultiTransversal, ground: GroundSet | Iterable[int]) -> SetFamily:
    """Every set whose profile lies in supp(I), with multiplicity #[profile, I]."""
    ground = ground if isinstance(ground, GroundSet) else GroundSet(tuple(ground))
    if I.n != ground.n:
        raise PreconditionError(f"multiset lives on n={I.n}, ground set needs n={ground.n}")
    counts = {}
    for v, c in I.items():
        for E in ground.sets_with_profile(v):
            counts[E] = c
    return SetFamily(ground.m, counts)


@dataclass(frozen=True)
class BlymEntry:
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def blym_lhs(F: SetFamily) -> Fraction:
    return sum(
        (Fraction(c, weight(v, F.m)) for v, c in profile_matrix(F).counts.items()),
        Fraction(0),
    )


def blym_report(F: SetFamily, p: ParamSet) -> dict[Subset, BlymEntry]:
    """Per P: sum_v p_v / prod_j C(m_j, v_j) against L_P * prod_{j not in P} n_j."""
    _check_params(F.m, p)
    lhs = blym_lhs(F)
    return {P: BlymEntry(lhs, Fraction(p.size_bound(P))) for P in p.L}


def longest_multichain(F: SetFamily) -> int:
    """Largest total multiplicity of a pairwise comparable sub-multiset (single-part families)."""
    if F.M != 1:
        raise PreconditionError(f"multichains are computed on single-part families, got M={F.M}")
    items = sorted(F.items(), key=lambda kv: (popcount(kv[0][0]), kv[0][0]))
    best: list[int] = []
    for i, ((a,), c) in enumerate(items):
        below = [best[j] for j, ((b,), _) in enumerate(items[:i]) if b != a and b & ~a == 0]
        best.append(c + max(below, default=0))
    return max(best, default=0)


def multichain_free(F: SetFamily, L: int) -> bool:
    """True iff F contains no multichain of length L + 1."""
    return longest_multichain(F) <= L


def enumerate_multichain_free(m: int, L: int, max_mult: int) -> Iterator[SetFamily]:
    """All single-part multi-families on an m-set with no multichain of length L+1."""
    sets = [(x,) for x in range(1 << m)]
    chosen: dict[PartedSet, int] = {}

    def chain_through(E: int) -> int:
        # longest weighted chain in `chosen` that passes through E (counting E's multiplicity)
        fam = SetFamily((m,), chosen)
        down = longest_multichain(SetFamily((m,), {k: c for k, c in fam.items() if k[0] & ~E == 0}))
        up = longest_multichain(SetFamily((m,), {k: c for k, c in fam.items() if E & ~k[0] == 0 and k[0] != E}))
        return down + up

    def rec(i: int) -> Iterator[SetFamily]:
        if i == len(sets):
            yield SetFamily((m,), chosen)
            return
        yield from rec(i + 1)
        E = sets[i]
        for c in range(1, max_mult + 1):
            chosen[E] = c
            if chain_through(E[0]) > L:
                break
            yield from rec(i + 1)
        chosen.pop(E, None)

    yield from rec(0)


# ---------------------------------------------------------------- traces, restrictions, shadows


def trace(F: SetFamily, i: int) -> frozenset[int]:
    """The simple family {E cap X_i : E in F} as bitmasks."""
    return frozenset(E[i] for E in F)


def is_union_of_full_levels(A: Iterable[int], m: int) -> bool:
    A = set(A)
    by_level: dict[int, int] = {}
    for x in A:
        by_level[popcount(x)] = by_level.get(popcount(x), 0) + 1
    return all(cnt == math.comb(m, t) for t, cnt in by_level.items())


def trace_full_levels(F: SetFamily) -> tuple[bool, ...]:
    return tuple(is_union_of_full_levels(trace(F, i), F.m[i]) for i in range(F.M))


def restrict(F: SetFamily, fixed: Mapping[int, int], D: Iterable[int]) -> SetFamily:
    """Members whose parts outside D equal ``fixed`` (part -> bitmask), cut down to the parts in D."""
    D = tuple(sorted(set(D)))
    outside = complement(D, F.M)
    if set(fixed) != set(outside):
        raise PreconditionError(f"fixed must give exactly the parts {list(outside)}")
    counts: dict[PartedSet, int] = {}
    for E, c in F.items():
        if all(E[i] == fixed[i] for i in outside):
            key = tuple(E[i] for i in D)
            counts[key] = counts.get(key, 0) + c
    return SetFamily(tuple(F.m[i] for i in D), counts)


def restrict_params(p: ParamSet, D: Iterable[int]) -> ParamSet:
    """Inherited parameters L_P for the k-subsets P of D, re-indexed inside D."""
    D = tuple(sorted(set(D)))
    pos = {j: a for a, j in enumerate(D)}
    L = {tuple(pos[j] for j in P): v for P, v in p.L.items() if set(P) <= set(D)}
    return ParamSet(tuple(p.n[j] for j in D), p.k, L)


def shadow(A: Iterable[int], n: int, direction: Literal["lower", "upper"] = "lower") -> frozenset[int]:
    """Lower or upper shadow of a family of t-subsets of an n-set (bitmasks)."""
    A = set(A)
    levels = {popcount(x) for x in A}
    if len(levels) > 1:
        raise PreconditionError(f"family spans several levels {sorted(levels)}")
    if any(x >> n for x in A):
        raise RangeError(f"member outside the {n}-set")
    out = set()
    for x in A:
        for e in range(n):
            bit = 1 << e
            if direction == "lower" and x & bit:
                out.add(x & ~bit)
            elif direction == "upper" and not x & bit:
                out.add(x | bit)
    if direction not in ("lower", "upper"):
        raise ValueError(f"unknown direction {direction!r}")
    return frozenset(out)


# ---------------------------------------------------------------- non-homogeneous equality example


def example1(
    m: Sequence[int],
    r: int,
    s: int,
    block_partition: Sequence[Sequence[Iterable[int]]],
    level_choices: Sequence[Sequence[int]],
) -> SetFamily:
    """Non-homogeneous M-dimensional family meeting the single BLYM inequality with equality.

    ``block_partition`` splits the r-subsets of the last part (given as element
    lists) into s blocks; ``level_choices[j]`` lists s distinct levels of part j
    for every j < M-1.  Block l is paired with levels ``level_choices[j][l]``.
    """
    m = tuple(m)
    M = len(m)
    if M < 2:
        raise RangeError("need M >= 2")
    last = m[-1]
    if not 1 <= r <= last - 1:
        raise RangeError(f"r={r} must lie in 1..{last - 1}")
    cap = min([x + 1 for x in m[:-1]] + [math.comb(last, r)])
    if not 2 <= s <= cap:
        raise RangeError(f"s={s} must lie in 2..{cap}")
    if len(block_partition) != s:
        raise RangeError(f"need exactly s={s} blocks")
    blocks = [[mask(b) for b in block] for block in block_partition]
    flat = [b for block in blocks for b in block]
    if any(not block for block in blocks):
        raise RangeError("blocks must be nonempty")
    if len(flat) != len(set(flat)) or set(flat) != set(level_masks(last, r)):
        raise RangeError(f"blocks must partition the {r}-subsets of the last part")
    if len(level_choices) != M - 1:
        raise RangeError(f"need level choices for the first {M - 1} parts")
    for j, levels in enumerate(level_choices):
        if len(levels) != s or len(set(levels)) != s or any(not 0 <= t <= m[j] for t in levels):
            raise RangeError(f"part {j} needs {s} distinct levels in 0..{m[j]}")
    counts = {}
    for l in range(s):
        heads = itertools.product(*(level_masks(m[j], level_choices[j][l]) for j in range(M - 1)))
        for head in heads:
            for b in blocks[l]:
                counts[head + (b,)] = 1
    return SetFamily(m, counts)


def example1_default(m: Sequence[int], r: int = 1, s: int = 2) -> SetFamily:
    """Example family with round-robin blocks and levels 0, ..., s-1 in every other part."""
    m = tuple(m)
    subsets = [elements(x) for x in level_masks(m[-1], r)]
    blocks = [subsets[l::s] for l in range(s)]
    levels = [list(range(s)) for _ in m[:-1]]
    return example1(m, r, s, blocks, levels)


__all__ = [
    "PartedSet",
    "GroundSet",
    "SetFamily",
    "parted",
    "parted_to_lists",
    "profile",
    "mask",
    "elements",
    "popcount",
    "level_masks",
    "maximal_chains",
    "SpernerViolation",
    "check_sperner",
    "enumerate_sperner_families",
    "enumerate_families",
    "profile_matrix",
    "is_homogeneous",
    "realize_homogeneous",
    "BlymEntry",
    "blym_lhs",
    "blym_report",
    "longest_multichain",
    "multichain_free",
    "enumerate_multichain_free",
    "trace",
    "trace_full_levels",
    "is_union_of_full_levels",
    "restrict",
    "restrict_params",
    "shadow",
    "example1",
    "example1_default",
]
