"""Exact rational linear feasibility: find x >= 0 with A x = b.

Phase-one simplex on a dense Fraction tableau with Bland's rule, which cannot
cycle.  Sizes here are tiny (a dozen rows, at most a few hundred columns).
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if any(len(r) != cols for r in A) or len(b) != rows:
        raise ValueError("ragged system")
    # tableau columns: original variables, then one artificial per row, then rhs
    T = []
    for r, rhs in zip(A, b):
        row = [Fraction(x) for x in r]
        rhs = Fraction(rhs)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(0)] * rows + [rhs])
    for i in range(rows):
        T[i][cols + i] = Fraction(1)
    basis = [cols + i for i in range(rows)]
    width = cols + rows
    # reduced costs for minimising the sum of artificials
    cost = [Fraction(0)] * (width + 1)
    for i in range(rows):
        for j in range(cols):
            cost[j] -= T[i][j]
        cost[width] -= T[i][width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(rows):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # unbounded direction; cannot happen for the phase-one objective
            break
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(rows):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, T[leave])]
        basis[leave] = enter

    if -cost[width] != 0:
        return None
    x = [Fraction(0)] * cols
    for i, j in enumerate(basis):
        if j < cols:
            x[j] = T[i][width]
    return x
