"""Multi-transversal verification and the transversal <-> mixed orthogonal array bridge."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import (
    ConversionError,
    MultiTransversal,
    ParamSet,
    PreconditionError,
    RangeError,
    Subset,
    Vector,
    complement,
    k_subsets,
)


@dataclass(frozen=True)
class Violation:
    """Fixing ``fixed`` of the coordinates outside ``P`` selects ``count`` > ``bound`` entries."""

    P: Subset
    fixed: Vector
    count: int
    bound: int

    def to_json(self) -> dict[str, Any]:
        return {"P": list(self.P), "fixed": list(self.fixed), "count": self.count, "bound": self.bound}


@dataclass(frozen=True)
class ViolationReport:
    witnesses: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.ok


def _check_keys(T: MultiTransversal, p: ParamSet) -> None:
    if T.n != p.n:
        raise PreconditionError(f"transversal lives on n={T.n} but parameters use n={p.n}")


def check_transversal(T: MultiTransversal, p: ParamSet) -> ViolationReport:
    """Report every (P, fixing) whose fiber carries more than L_P entries.

    Fixings with no entries have count zero and can never violate, so only the
    occupied fibers are inspected.
    """
    _check_keys(T, p)
    witnesses = []
    for P, bound in p.L.items():
        for b, count in T.fiber_counts(P).items():
            if count > bound:
                witnesses.append(Violation(P, b, count, bound))
    return ViolationReport(tuple(witnesses))


def fullness(T: MultiTransversal, p: ParamSet) -> tuple[bool, list[Subset]]:
    report = check_transversal(T, p)
    if not report.ok:
        raise PreconditionError(f"not a transversal: {len(report.witnesses)} violated fibers")
    size = T.size
    tight = [P for P in p.L if size == p.size_bound(P)]
    return bool(tight), tight


def konstant_holds(p: ParamSet) -> bool:
    """True iff K_P / L_P is the same rational for every k-subset P."""
    ratios = {Fraction(p.K(P), p.L[P]) for P in p.L}
    return len(ratios) == 1


def is_simple(T: MultiTransversal) -> bool:
    return T.is_simple()


@dataclass(frozen=True)
class Moa:
    """Mixed orthogonal array: ``rows`` over symbol sets of sizes ``levels``.

    ``lam`` maps each ``strength``-subset J of columns (sorted tuple) to the
    number of times every symbol tuple appears in the projection onto J.
    """

    levels: Vector
    rows: tuple[Vector, ...]
    strength: int
    lam: dict[Subset, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(x) for x in self.levels))
        object.__setattr__(self, "rows", tuple(tuple(int(a) for a in r) for r in self.rows))
        M = len(self.levels)
        for r in self.rows:
            if len(r) != M or any(not 0 <= a < n for a, n in zip(r, self.levels)):
                raise RangeError(f"row {r} does not fit levels {self.levels}")
        if not 0 <= self.strength <= M:
            raise RangeError(f"strength {self.strength} outside 0..{M}")

    @property
    def M(self) -> int:
        return len(self.levels)

    @property
    def runs(self) -> int:
        return len(self.rows)

    def is_simple(self) -> bool:
        return len(set(self.rows)) == len(self.rows)


@dataclass(frozen=True)
class StrengthResult:
    holds: bool
    lam: dict[Subset, int] | None = None
    # (J, tuple_a, count_a, tuple_b, count_b) when the check fails
    witness: tuple | None = None


def moa_strength(A: Moa, d: int) -> StrengthResult:
    """Check that every d-column projection shows each symbol tuple equally often."""
    M = A.M
    if not 0 <= d <= M:
        raise RangeError(f"strength {d} outside 0..{M}")
    lam: dict[Subset, int] = {}
    for J in itertools.combinations(range(M), d):
        counts = Counter(tuple(r[j] for j in J) for r in A.rows)
        cells = itertools.product(*(range(A.levels[j]) for j in J))
        first = next(cells)
        target = counts.get(first, 0)
        for cell in cells:
            c = counts.get(cell, 0)
            if c != target:
                return StrengthResult(False, witness=(J, first, target, cell, c))
        lam[J] = target
    return StrengthResult(True, lam=lam)


def to_moa(T: MultiTransversal, p: ParamSet) -> Moa:
    """Expand a full transversal satisfying the constancy condition into an MOA of strength M - k."""
    report = check_transversal(T, p)
    if not report.ok:
        raise ConversionError("not a transversal for these parameters")
    full, _ = fullness(T, p)
    if not full:
        raise ConversionError("transversal is not full")
    if not konstant_holds(p):
        raise ConversionError("constancy condition fails: K_P / L_P depends on P")
    d = p.M - p.k
    lam = {complement(P, p.M): v for P, v in p.L.items()}
    lam = dict(sorted(lam.items()))
    return Moa(T.n, tuple(T.elements()), d, lam)


def from_moa(A: Moa, d: int) -> tuple[MultiTransversal, ParamSet]:
    """Read an MOA of strength ``d`` as a full (M - d)-dimensional multi-transversal."""
    if d >= A.M:
        raise ConversionError(f"strength {d} leaves no free coordinates (k = M - d must be >= 1)")
    res = moa_strength(A, d)
    if not res.holds:
        J, a, ca, b, cb = res.witness
        raise ConversionError(
            f"array is not of strength {d}: columns {list(J)} show {a} {ca} times but {b} {cb} times"
        )
    M = A.M
    k = M - d
    L = {P: res.lam[complement(P, M)] for P in k_subsets(M, k)}
    T = MultiTransversal.from_vectors(A.levels, A.rows)
    return T, ParamSet(A.levels, k, L)


def delete_column(A: Moa, j: int) -> Moa:
    """Drop column ``j``; a strength-d array with d <= M-1 stays strength d."""
    if A.M < 2:
        raise RangeError("cannot delete the only column")
    levels = A.levels[:j] + A.levels[j + 1:]
    rows = tuple(r[:j] + r[j + 1:] for r in A.rows)
    d = min(A.strength, A.M - 1)
    lam = {J: v for J, v in A.lam.items() if j not in J}
    lam = {tuple(i - (i > j) for i in J): v for J, v in lam.items()}
    return Moa(levels, rows, d, lam if d == A.strength else {})


def size_upper_bound(p: ParamSet) -> int:
    return min(p.size_bound(P) for P in p.L)


__all__ = [
    "Violation",
    "ViolationReport",
    "check_transversal",
    "fullness",
    "konstant_holds",
    "is_simple",
    "Moa",
    "StrengthResult",
    "moa_strength",
    "to_moa",
    "from_moa",
    "delete_column",
    "size_upper_bound",
]
