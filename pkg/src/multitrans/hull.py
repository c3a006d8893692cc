"""Convex hulls of profile matrices: homogeneous candidates, initial families, constraints, extreme points."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from ._lp import feasible_point
from .core import (
    MultiTransversal,
    ParamSet,
    PreconditionError,
    ProfileMatrix,
    RangeError,
    ScaleError,
    Vector,
    complement,
    enumerate_pi,
    weight,
)
from .sperner import GroundSet, PartedSet, SetFamily, profile


def t_matrix(I: MultiTransversal) -> ProfileMatrix:
    return ProfileMatrix(I.n, I.as_dict())


def s_matrix(I: MultiTransversal, m: Iterable[int] | None = None) -> ProfileMatrix:
    """Entry v is #[v, I] * prod_j C(m_j, v_j); this is the census of the homogeneous realization."""
    m = tuple(m) if m is not None else tuple(x - 1 for x in I.n)
    if tuple(x + 1 for x in m) != I.n:
        raise PreconditionError(f"part sizes {m} do not match n={I.n}")
    return ProfileMatrix(I.n, {v: c * weight(v, m) for v, c in I.items()})


# ---------------------------------------------------------------- product-permutations


@dataclass(frozen=True)
class ProductPermutation:
    """One ordering of the elements of every part."""

    orders: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        orders = tuple(tuple(o) for o in self.orders)
        for o in orders:
            if sorted(o) != list(range(len(o))):
                raise RangeError(f"{o} is not a permutation")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def identity(cls, m: Iterable[int]) -> "ProductPermutation":
        return cls(tuple(tuple(range(x)) for x in m))

    @property
    def m(self) -> Vector:
        return tuple(len(o) for o in self.orders)

    def initial_set(self, v: Vector) -> PartedSet:
        out = []
        for order, t in zip(self.orders, v):
            x = 0
            for e in order[:t]:
                x |= 1 << e
            out.append(x)
        return tuple(out)

    def is_initial(self, E: PartedSet) -> bool:
        return self.initial_set(profile(E)) == tuple(E)


def all_product_permutations(m: Iterable[int]) -> list[ProductPermutation]:
    return [
        ProductPermutation(orders)
        for orders in itertools.product(*(itertools.permutations(range(x)) for x in m))
    ]


def initial_family(I: MultiTransversal, L: ProductPermutation) -> SetFamily:
    """For each v in supp(I), the unique set initial w.r.t. L with profile v, at multiplicity #[v, I]."""
    if tuple(x + 1 for x in L.m) != I.n:
        raise PreconditionError(f"permutation part sizes {L.m} do not match n={I.n}")
    return SetFamily(L.m, {L.initial_set(v): c for v, c in I.items()})


def initial_part(F: SetFamily, L: ProductPermutation) -> SetFamily:
    """The sub-multifamily of members that are initial with respect to L."""
    return SetFamily(F.m, {E: c for E, c in F.items() if L.is_initial(E)})


# ---------------------------------------------------------------- multiplicity constraints


@dataclass(frozen=True)
class GammaRow:
    A: int
    alpha: Mapping[Vector, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.A < 0 or any(c < 0 for c in self.alpha.values()):
            raise RangeError("constraint bounds and coefficients must be non-negative")
        object.__setattr__(self, "alpha", {tuple(v): int(c) for v, c in self.alpha.items() if c})


@dataclass(frozen=True)
class GammaConstraint:
    rows: tuple[GammaRow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    def __add__(self, other: "GammaConstraint") -> "GammaConstraint":
        return GammaConstraint(self.rows + other.rows)


def simplicity_gamma(n: Iterable[int]) -> GammaConstraint:
    """One row per profile vector: multiplicity at most 1."""
    return GammaConstraint(tuple(GammaRow(1, {v: 1}) for v in enumerate_pi(tuple(n))))


def cap_gamma(n: Iterable[int], cap: int) -> GammaConstraint:
    return GammaConstraint(tuple(GammaRow(cap, {v: 1}) for v in enumerate_pi(tuple(n))))


def gamma_ok_multiset(I: MultiTransversal, G: GammaConstraint) -> bool:
    return all(sum(c * I[v] for v, c in row.alpha.items()) <= row.A for row in G.rows)


def gamma_ok_family(F: SetFamily, G: GammaConstraint) -> bool:
    """Like the multiset form, but each profile contributes the largest multiplicity of its sets."""
    top: dict[Vector, int] = {}
    for E, c in F.items():
        v = profile(E)
        top[v] = max(top.get(v, 0), c)
    return all(sum(c * top.get(v, 0) for v, c in row.alpha.items()) <= row.A for row in G.rows)


# ---------------------------------------------------------------- transversal enumeration


def multiplicity_caps(p: ParamSet, G: GammaConstraint | None = None, simple_only: bool = False) -> dict[Vector, int]:
    """Largest possible multiplicity of each cell: min_P L_P, tightened by any covering constraint row."""
    base = 1 if simple_only else min(p.L.values())
    caps = {v: base for v in enumerate_pi(p.n)}
    for row in (G.rows if G else ()):
        for v, c in row.alpha.items():
            caps[v] = min(caps[v], row.A // c)
    return caps


def enumerate_transversals(
    p: ParamSet,
    G: GammaConstraint | None = None,
    simple_only: bool = False,
    max_cells: int = 12,
) -> list[MultiTransversal]:
    """Every multi-transversal for ``p`` that satisfies ``G`` (depth-first over cells in lex order)."""
    cells = enumerate_pi(p.n)
    if len(cells) > max_cells:
        raise ScaleError(f"{len(cells)} cells exceed the enumeration guard of {max_cells}")
    caps = multiplicity_caps(p, G, simple_only)
    rows = G.rows if G else ()
    fibers = {
        v: [(P, tuple(v[j] for j in complement(P, p.M))) for P in p.L] for v in cells
    }
    load: dict = {}
    gload = [0] * len(rows)
    chosen: dict[Vector, int] = {}
    out: list[MultiTransversal] = []

    def fits(v: Vector) -> bool:
        if any(load.get(key, 0) + 1 > p.L[key[0]] for key in fibers[v]):
            return False
        return all(gload[g] + row.alpha.get(v, 0) <= row.A for g, row in enumerate(rows))

    def bump(v: Vector, c: int) -> None:
        for key in fibers[v]:
            load[key] = load.get(key, 0) + c
        for g, row in enumerate(rows):
            gload[g] += c * row.alpha.get(v, 0)

    def rec(i: int) -> None:
        if i == len(cells):
            out.append(MultiTransversal(p.n, chosen))
            return
        rec(i + 1)
        v = cells[i]
        c = 0
        while c < caps[v] and fits(v):
            bump(v, 1)
            c += 1
            chosen[v] = c
            rec(i + 1)
        chosen.pop(v, None)
        if c:
            bump(v, -c)

    rec(0)
    return out


# ---------------------------------------------------------------- lexicographic maximality


def _lem_order(I: MultiTransversal, competitors: Sequence[MultiTransversal]) -> list[Vector] | None:
    supp = I.support()
    s = len(supp)
    full = (1 << s) - 1

    def alive(used: int) -> list[MultiTransversal]:
        idx = [a for a in range(s) if used >> a & 1]
        return [C for C in competitors if all(supp[a] in C and C[supp[a]] == I[supp[a]] for a in idx)]

    def valid_next(used: int, a: int, live: list[MultiTransversal]) -> bool:
        v = supp[a]
        return all(I[v] >= C[v] for C in live)

    # greedy: descending multiplicity, then lexicographic order
    greedy = sorted(range(s), key=lambda a: (-I[supp[a]], supp[a]))
    used = 0
    ok = True
    for a in greedy:
        if not valid_next(used, a, alive(used)):
            ok = False
            break
        used |= 1 << a
    if ok:
        return [supp[a] for a in greedy]

    # exact search; the competitors still "alive" depend only on the set already placed
    memo: dict[int, list[int] | None] = {}

    def search(used: int) -> list[int] | None:
        if used == full:
            return []
        if used in memo:
            return memo[used]
        live = alive(used)
        result = None
        for a in range(s):
            if not used >> a & 1 and valid_next(used, a, live):
                rest = search(used | 1 << a)
                if rest is not None:
                    result = [a] + rest
                    break
        memo[used] = result
        return result

    found = search(0)
    return None if found is None else [supp[a] for a in found]


def is_lem(
    I: MultiTransversal,
    p: ParamSet,
    G: GammaConstraint | None = None,
    competitors: Sequence[MultiTransversal] | None = None,
) -> list[Vector] | None:
    """An ordering of supp(I) witnessing lexicographic maximality, or None.

    Clause (i)/(ii): along the ordering, every competitor that contains the first
    l support vectors with equal multiplicities has at most I's multiplicity on
    the next vector.
    """
    if competitors is None:
        competitors = enumerate_transversals(p, G)
    return _lem_order(I, competitors)


# ---------------------------------------------------------------- convex geometry


def convex_decomposition(
    target: ProfileMatrix, candidates: Sequence[ProfileMatrix]
) -> list[Fraction] | None:
    """Exact non-negative weights summing to 1 with sum_i w_i * candidate_i = target, or None."""
    if not candidates:
        return None
    cells = enumerate_pi(target.n)
    for c in candidates:
        if c.n != target.n:
            raise PreconditionError("candidates and target live on different boxes")
    A = [[Fraction(c[v]) for c in candidates] for v in cells]
    A.append([Fraction(1)] * len(candidates))
    b = [Fraction(target[v]) for v in cells] + [Fraction(1)]
    return feasible_point(A, b)


def homogeneous_candidates(
    p: ParamSet, G: GammaConstraint | None = None, simple_only: bool = False
) -> list[ProfileMatrix]:
    """Distinct profile matrices S(I) of the admissible multi-transversals, in enumeration order."""
    seen = {}
    for I in enumerate_transversals(p, G, simple_only):
        S = s_matrix(I)
        seen.setdefault(S, None)
    return list(seen)


def extreme_points(p: ParamSet, G: GammaConstraint | None = None) -> list[ProfileMatrix]:
    """Candidates S(I) that are not convex combinations of the other candidates."""
    cands = homogeneous_candidates(p, G)
    out = []
    for i, c in enumerate(cands):
        others = cands[:i] + cands[i + 1:]
        if convex_decomposition(c, others) is None:
            out.append(c)
    return out


def restricted_profile_set(families: Iterable[SetFamily], L: ProductPermutation) -> frozenset[ProfileMatrix]:
    """mu(A(L)): profile matrices of the L-initial parts of the given families."""
    from .sperner import profile_matrix

    return frozenset(profile_matrix(initial_part(F, L)) for F in families)


__all__ = [
    "t_matrix",
    "s_matrix",
    "ProductPermutation",
    "all_product_permutations",
    "initial_family",
    "initial_part",
    "GammaRow",
    "GammaConstraint",
    "simplicity_gamma",
    "cap_gamma",
    "gamma_ok_family",
    "gamma_ok_multiset",
    "multiplicity_caps",
    "enumerate_transversals",
    "is_lem",
    "convex_decomposition",
    "homogeneous_candidates",
    "extreme_points",
    "restricted_profile_set",
    "GroundSet",
]
