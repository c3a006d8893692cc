"""Exact-arithmetic domain types and utilities on the profile box pi_M.

Conventions used throughout the package:

* parts, coordinates and column indices are 0-based;
* a k-subset ``P`` of the parts is a sorted tuple of ints;
* a profile vector is a plain tuple of ints, coordinate ``j`` in ``range(n[j])``;
* rationals are :class:`fractions.Fraction` (never floats).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]
Vector = tuple[int, ...]
Subset = tuple[int, ...]


class MultitransError(ValueError):
    """Base class for every error raised by this package."""


class RangeError(MultitransError):
    pass


class PreconditionError(MultitransError):
    pass


class ConstructionError(MultitransError):
    """A construction's hypothesis failed; ``subset`` names the offending P if any."""

    def __init__(self, message: str, subset: Subset | None = None):
        super().__init__(message)
        self.subset = subset


class ConversionError(MultitransError):
    pass


class ScaleError(MultitransError):
    """The requested instance exceeds the desk-scale guard of an exhaustive routine."""


def as_fraction(x: Rational | str) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction. Floats are refused."""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, str):
        x = x.strip()
        if any(c in x for c in ".eE"):
            raise ValueError(f"decimal notation not allowed: {x!r}")
    return Fraction(x)


def fmt_rational(x: Rational) -> str:
    return str(Fraction(x))


def k_subsets(M: int, k: int) -> list[Subset]:
    return list(itertools.combinations(range(M), k))


def complement(P: Iterable[int], M: int) -> Subset:
    s = set(P)
    return tuple(j for j in range(M) if j not in s)


def prod(xs: Iterable[int]) -> int:
    return math.prod(xs)


@dataclass(frozen=True)
class Dimensions:
    """Side lengths ``n`` of the box pi_M; ``m = n - 1`` are the ground-set part sizes."""

    n: Vector

    def __post_init__(self):
        n = tuple(int(x) for x in self.n)
        if len(n) < 1:
            raise RangeError("need at least one coordinate")
        if any(x < 1 for x in n):
            raise RangeError(f"every n_j must be >= 1, got {n}")
        object.__setattr__(self, "n", n)

    @classmethod
    def from_parts(cls, m: Iterable[int]) -> "Dimensions":
        return cls(tuple(int(x) + 1 for x in m))

    @property
    def M(self) -> int:
        return len(self.n)

    @property
    def m(self) -> Vector:
        return tuple(x - 1 for x in self.n)

    @property
    def volume(self) -> int:
        return prod(self.n)

    def contains(self, v: Vector) -> bool:
        return len(v) == len(self.n) and all(0 <= a < b for a, b in zip(v, self.n))


def _dims(d: Dimensions | Iterable[int]) -> Dimensions:
    return d if isinstance(d, Dimensions) else Dimensions(tuple(d))


def enumerate_pi(dims: Dimensions | Iterable[int]) -> list[Vector]:
    """All profile vectors of pi_M in lexicographic order."""
    return list(itertools.product(*(range(x) for x in _dims(dims).n)))


def weight(t: Vector, m: Iterable[int]) -> int:
    """prod_i C(m_i, t_i)."""
    m = tuple(m)
    if len(t) != len(m):
        raise RangeError(f"vector {t} has wrong length for part sizes {m}")
    out = 1
    for ti, mi in zip(t, m):
        if not 0 <= ti <= mi:
            raise RangeError(f"coordinate {ti} outside 0..{mi}")
        out *= math.comb(mi, ti)
    return out


def frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def frac_sum(v: Vector, dims: Dimensions | Iterable[int], alpha: Rational = 0) -> Fraction:
    """Fractional part of ``alpha + sum_j v_j / n_j``, exactly."""
    n = _dims(dims).n
    total = Fraction(alpha) + sum((Fraction(a, b) for a, b in zip(v, n)), Fraction(0))
    return frac(total)


def residue(v: Vector, n: Vector, N: int | None = None) -> int:
    """Integer r in [0, N) with frac(sum v_j/n_j) = r/N, where N = lcm(n) by default."""
    if N is None:
        N = math.lcm(*n)
    return sum(a * (N // b) for a, b in zip(v, n)) % N


class _Multiset:
    """Immutable finite multiset with canonical (sorted) iteration order."""

    def __init__(self, counts: Mapping):
        clean = {}
        for key, c in counts.items():
            c = int(c)
            if c < 0:
                raise RangeError(f"negative multiplicity {c} for {key}")
            if c:
                clean[key] = clean.get(key, 0) + c
        self._counts = dict(sorted(clean.items()))
        self._hash = None
        self._cache: dict = {}

    def __getitem__(self, key) -> int:
        return self._counts.get(key, 0)

    def __contains__(self, key) -> bool:
        return key in self._counts

    def __iter__(self) -> Iterator:
        return iter(self._counts)

    def __len__(self) -> int:
        """Number of distinct elements (support size)."""
        return len(self._counts)

    def items(self):
        return self._counts.items()

    def support(self) -> list:
        return list(self._counts)

    @property
    def size(self) -> int:
        """Total multiplicity."""
        return sum(self._counts.values())

    def is_simple(self) -> bool:
        return all(c == 1 for c in self._counts.values())

    def elements(self) -> list:
        """Elements repeated by multiplicity, in canonical order."""
        return [k for k, c in self._counts.items() for _ in range(c)]

    def as_dict(self) -> dict:
        return dict(self._counts)


class MultiTransversal(_Multiset):
    """Multiset of profile vectors over the box with side lengths ``n``."""

    def __init__(self, n: Iterable[int], counts: Mapping[Iterable[int], int] | None = None):
        dims = Dimensions(tuple(n))
        self.n: Vector = dims.n
        counts = {} if counts is None else counts
        keyed = {}
        for v, c in counts.items():
            v = tuple(v)
            if not dims.contains(v):
                raise RangeError(f"{v} is not a point of pi_M with n={dims.n}")
            keyed[v] = c
        super().__init__(keyed)

    @classmethod
    def from_vectors(cls, n: Iterable[int], vectors: Iterable[Iterable[int]]) -> "MultiTransversal":
        counts: dict[Vector, int] = {}
        for v in vectors:
            v = tuple(v)
            counts[v] = counts.get(v, 0) + 1
        return cls(tuple(n), counts)

    @classmethod
    def full_box(cls, n: Iterable[int], mult: int = 1) -> "MultiTransversal":
        return cls(tuple(n), {v: mult for v in enumerate_pi(n)})

    @property
    def dims(self) -> Dimensions:
        return Dimensions(self.n)

    @property
    def M(self) -> int:
        return len(self.n)

    def __eq__(self, other):
        if not isinstance(other, MultiTransversal):
            return NotImplemented
        return self.n == other.n and self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(self._counts.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{v}: {c}" if c != 1 else str(v) for v, c in self._counts.items())
        return f"MultiTransversal(n={self.n}, {{{body}}})"

    def fiber_counts(self, P: Subset) -> dict[Vector, int]:
        """Total multiplicity per fixing of the coordinates outside ``P`` (cached)."""
        key = ("fiber", P)
        if key not in self._cache:
            outside = complement(P, self.M)
            fibers: dict[Vector, int] = {}
            for v, c in self._counts.items():
                b = tuple(v[j] for j in outside)
                fibers[b] = fibers.get(b, 0) + c
            self._cache[key] = fibers
        return self._cache[key]


def is_simple(T: MultiTransversal) -> bool:
    return T.is_simple()


@dataclass(frozen=True)
class ParamSet:
    """Box dimensions, level ``k`` and the bound ``L[P]`` for every k-subset P."""

    n: Vector
    k: int
    L: Mapping[Subset, int]

    def __post_init__(self):
        dims = Dimensions(tuple(self.n))
        object.__setattr__(self, "n", dims.n)
        M = dims.M
        if not 1 <= self.k <= M:
            raise RangeError(f"k={self.k} outside 1..{M}")
        L = {tuple(sorted(P)): int(v) for P, v in dict(self.L).items()}
        wanted = set(k_subsets(M, self.k))
        if set(L) != wanted:
            missing = sorted(wanted - set(L))
            extra = sorted(set(L) - wanted)
            raise RangeError(f"L must be defined exactly on the {self.k}-subsets; missing {missing}, extra {extra}")
        for P, v in L.items():
            if v < 1:
                raise RangeError(f"L{list(P)}={v} must be >= 1")
        object.__setattr__(self, "L", dict(sorted(L.items())))

    @classmethod
    def uniform(cls, n: Iterable[int], k: int, value: int = 1) -> "ParamSet":
        n = tuple(n)
        return cls(n, k, {P: value for P in k_subsets(len(n), k)})

    @property
    def M(self) -> int:
        return len(self.n)

    @property
    def dims(self) -> Dimensions:
        return Dimensions(self.n)

    @property
    def subsets(self) -> list[Subset]:
        return list(self.L)

    def K(self, P: Subset) -> int:
        return prod(self.n[i] for i in P)

    def N(self, P: Subset) -> int:
        return math.lcm(*(self.n[i] for i in P))

    def size_bound(self, P: Subset) -> int:
        """L_P times the product of n_j over j outside P."""
        return self.L[P] * prod(self.n[j] for j in complement(P, self.M))

    def ratio(self, P: Subset) -> Fraction:
        return Fraction(self.L[P], self.K(P))

    def mu_star(self) -> Fraction:
        return min(self.ratio(P) for P in self.L)

    def within_box(self) -> bool:
        """Whether every L_P <= K_P (required by the fractional constructions)."""
        return all(v <= self.K(P) for P, v in self.L.items())


class ProfileMatrix:
    """Entries indexed by profile vectors of the box over ``n``; absent entries are zero.

    Entries are ints for census matrices and may be Fractions for convex combinations.
    """

    def __init__(self, n: Iterable[int], counts: Mapping[Iterable[int], Rational] | None = None):
        dims = Dimensions(tuple(n))
        self.n: Vector = dims.n
        clean = {}
        for v, c in (counts or {}).items():
            v = tuple(v)
            if not dims.contains(v):
                raise RangeError(f"{v} is not a point of pi_M with n={dims.n}")
            if c:
                clean[v] = c
        self.counts: dict[Vector, Rational] = dict(sorted(clean.items()))

    @classmethod
    def from_vector(cls, n: Iterable[int], values: Iterable[Rational]) -> "ProfileMatrix":
        n = tuple(n)
        return cls(n, dict(zip(enumerate_pi(n), values)))

    def __getitem__(self, v: Vector) -> Rational:
        return self.counts.get(tuple(v), 0)

    def vector(self) -> tuple[Rational, ...]:
        """Entries in lexicographic order of pi_M."""
        return tuple(self.counts.get(v, 0) for v in enumerate_pi(self.n))

    @property
    def total(self) -> Rational:
        return sum(self.counts.values())

    def __eq__(self, other):
        if not isinstance(other, ProfileMatrix):
            return NotImplemented
        return self.n == other.n and self.counts == other.counts

    def __hash__(self):
        return hash((self.n, tuple(self.counts.items())))

    def __repr__(self):
        body = ", ".join(f"{v}: {fmt_rational(c)}" for v, c in self.counts.items())
        return f"ProfileMatrix(n={self.n}, {{{body}}})"
