"""Fractional-part constructions of full transversals and simple mixed orthogonal arrays.

A cell ``v`` of the box is selected when ``frac(sum_j v_j / n_j)`` falls into a
half-open window ``[beta, beta + mu)`` (or a union of such windows).  Since
``frac(sum_j v_j / n_j) = r(v) / N`` with ``N = lcm(n)`` and an integer residue
``r(v)``, membership is decided once per residue and then looked up per cell.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .core import (
    ConstructionError,
    Dimensions,
    MultiTransversal,
    ParamSet,
    PreconditionError,
    RangeError,
    Rational,
    Subset,
    Vector,
    enumerate_pi,
    frac,
    k_subsets,
    prod,
)
from .transversal import check_transversal, fullness, konstant_holds


@dataclass(frozen=True)
class FracWindow:
    """Half-open window [beta, beta + mu) inside [0, 1)."""

    beta: Fraction
    mu: Fraction

    def __post_init__(self):
        beta, mu = Fraction(self.beta), Fraction(self.mu)
        if not 0 < mu <= 1:
            raise RangeError(f"mu={mu} must lie in (0, 1]")
        if not 0 <= beta <= 1 - mu:
            raise RangeError(f"beta={beta} must lie in [0, 1 - mu] = [0, {1 - mu}]")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "mu", mu)

    def __contains__(self, x: Fraction) -> bool:
        return self.beta <= x < self.beta + self.mu


def engel_count(n: int, alpha: Rational, w: FracWindow) -> int:
    """Number of i in 0..n-1 with frac(alpha + i/n) in the window."""
    alpha = Fraction(alpha)
    return sum(1 for i in range(n) if frac(alpha + Fraction(i, n)) in w)


def window_count(n: Sequence[int], alpha: Rational, w: FracWindow) -> int:
    """Number of cells v of the box over ``n`` with frac(alpha + sum v_i/n_i) in the window."""
    n = tuple(n)
    hits = _hit_residues(n, Fraction(alpha), w.beta, w.mu)
    counts = residue_histogram(n)
    return sum(counts[r] for r in hits)


@functools.lru_cache(maxsize=4096)
def _cell_residues(n: Vector) -> tuple[int, tuple[int, ...]]:
    N = math.lcm(*n)
    steps = [N // x for x in n]
    res = tuple(
        sum(a * s for a, s in zip(v, steps)) % N
        for v in itertools.product(*(range(x) for x in n))
    )
    return N, res


@functools.lru_cache(maxsize=4096)
def residue_histogram(n: Vector) -> tuple[int, ...]:
    """hist[j] = #{v in box(n) : frac(sum v_i/n_i) = j/N}, N = lcm(n)."""
    N, res = _cell_residues(tuple(n))
    hist = [0] * N
    for r in res:
        hist[r] += 1
    return tuple(hist)


@functools.lru_cache(maxsize=65536)
def _hit_residues(n: Vector, alpha: Fraction, beta: Fraction, mu: Fraction) -> frozenset[int]:
    # r is hit iff (r + alpha*N) mod N lies in [beta*N, (beta+mu)*N); the window
    # has length <= N, so the shifts j*N for j in -1..1 cover every wrap
    N = math.lcm(*n)
    shift = frac(alpha) * N
    lo, hi = beta * N - shift, (beta + mu) * N - shift
    hits = set()
    for j in (-1, 0, 1):
        a, b = math.ceil(lo + j * N), math.ceil(hi + j * N)
        hits.update(range(max(a, 0), min(b, N)))
    return frozenset(hits)


@functools.lru_cache(maxsize=65536)
def _select(n: Vector, hits: frozenset[int]) -> MultiTransversal:
    _, res = _cell_residues(n)
    cells = enumerate_pi(n)
    return MultiTransversal(n, {v: 1 for v, r in zip(cells, res) if r in hits})


def _as_n(dims: Dimensions | Iterable[int]) -> Vector:
    return dims.n if isinstance(dims, Dimensions) else Dimensions(tuple(dims)).n


def fractional_construction(dims: Dimensions | Iterable[int], w: FracWindow) -> MultiTransversal:
    """All cells whose fractional coordinate sum lies in the window, each once."""
    n = _as_n(dims)
    return _select(n, _hit_residues(n, Fraction(0), w.beta, w.mu))


def gencond_violations(p: ParamSet, mu: Rational) -> list[Subset]:
    mu = Fraction(mu)
    if mu <= 0:
        raise RangeError(f"mu={mu} must be positive")
    bad = []
    for P, L in p.L.items():
        N = p.N(P)
        ell = p.K(P) // N
        if ell * math.ceil(mu * N) > L:
            bad.append(P)
    return bad


def gencond_check(p: ParamSet, mu: Rational) -> bool:
    """ell_P * ceil(mu * N_P) <= L_P for every P, with N_P = lcm and ell_P = K_P / N_P."""
    return not gencond_violations(p, mu)


def construct_full(p: ParamSet, beta: Rational = 0) -> MultiTransversal:
    """Window construction at mu* = min_P L_P/K_P; full whenever the sufficiency condition holds."""
    mu = p.mu_star()
    if mu > 1:
        raise ConstructionError("min_P L_P/K_P exceeds 1; parameters exceed the box")
    bad = gencond_violations(p, mu)
    if bad:
        P = bad[0]
        raise ConstructionError(
            f"sufficiency condition fails at P={list(P)}: "
            f"{p.K(P) // p.N(P)}*ceil({mu}*{p.N(P)}) > L_P={p.L[P]}",
            subset=P,
        )
    beta = Fraction(beta)
    if not 0 <= beta <= 1 - mu:
        raise ConstructionError(f"beta={beta} outside [0, {1 - mu}]")
    return fractional_construction(p.n, FracWindow(beta, mu))


def beta_grid(n: Sequence[int], mu: Rational) -> list[Fraction]:
    """Grid of window offsets that realises every distinct window construction.

    The selected cells, as a function of beta in [0, 1 - mu], only change
    when beta or beta + mu crosses a value j/lcm(n).  Those breakpoints, together
    with 0 and 1 - mu, lie in (1/D)Z with D = lcm(n, den(mu)), and the selection is
    constant on each interval (b, b'] between consecutive breakpoints.  Hence every
    construction equals the one at some grid point j/D in [0, 1 - mu].
    """
    mu = Fraction(mu)
    D = math.lcm(*n, mu.denominator)
    top = (1 - mu) * D
    return [Fraction(j, D) for j in range(int(top) + 1)]


def full_for_all_beta(p: ParamSet, mu0: Rational) -> bool:
    """Decide whether every window construction of width mu0 is a full transversal."""
    mu0 = Fraction(mu0)
    for beta in beta_grid(p.n, mu0):
        T = fractional_construction(p.n, FracWindow(beta, mu0))
        if not check_transversal(T, p).ok or not fullness(T, p)[0]:
            return False
    return True


def partition_pi(p: ParamSet, mu0: Rational) -> list[MultiTransversal]:
    """Split the box into ceil(1/mu0) window constructions [t*mu0, (t+1)*mu0) plus a short tail."""
    mu0 = Fraction(mu0)
    if not 0 < mu0 <= 1:
        raise RangeError(f"mu0={mu0} must lie in (0, 1]")
    bad = gencond_violations(p, mu0)
    if bad:
        raise ConstructionError(f"sufficiency condition fails at P={list(bad[0])}", subset=bad[0])
    parts = []
    t = 0
    while t * mu0 < 1:
        beta = t * mu0
        width = min(mu0, 1 - beta)
        parts.append(fractional_construction(p.n, FracWindow(beta, width)))
        t += 1
    return parts


def oarray_recipe(j_seq: Sequence[int], k: int, q: int) -> tuple[ParamSet, Fraction]:
    """Parameters n_i = j_1*...*j_i, mu = 1/q, L_P = mu*K_P (q must divide n_k)."""
    j_seq = tuple(int(j) for j in j_seq)
    if any(j < 1 for j in j_seq):
        raise RangeError("sequence entries must be positive")
    n = tuple(itertools.accumulate(j_seq, lambda a, b: a * b))
    M = len(n)
    if not 1 <= k <= M:
        raise RangeError(f"k={k} outside 1..{M}")
    if q < 1 or n[k - 1] % q:
        raise ConstructionError(f"q={q} does not divide n_k={n[k - 1]}")
    mu = Fraction(1, q)
    L = {P: prod(n[i] for i in P) // q for P in k_subsets(M, k)}
    return ParamSet(n, k, L), mu


def mu_scaled_params(n: Sequence[int], k: int, mu: Rational) -> ParamSet:
    """Parameters L_P = mu*K_P, valid when mu*N_P is a positive integer for every P."""
    n = tuple(n)
    mu = Fraction(mu)
    if not 0 < mu <= 1:
        raise ConstructionError(f"mu={mu} must lie in (0, 1]")
    L = {}
    for P in k_subsets(len(n), k):
        N = math.lcm(*(n[i] for i in P))
        if (mu * N).denominator != 1:
            raise ConstructionError(f"mu*N_P = {mu * N} is not an integer at P={list(P)}", subset=P)
        L[P] = int(mu * prod(n[i] for i in P))
    return ParamSet(n, k, L)


def interval_union(mu: Rational, betas: Sequence[Rational]) -> list[tuple[Fraction, Fraction]]:
    """Half-open pieces of the alternating union of the windows [beta_l, beta_l + mu)."""
    mu = Fraction(mu)
    b = [Fraction(x) for x in betas]
    if len(b) % 2 != 1:
        raise ConstructionError(f"need an odd number of offsets, got {len(b)}")
    if not 0 < mu < 1:
        raise ConstructionError(f"mu={mu} must lie in (0, 1)")
    if b[0] < 0 or any(x >= y for x, y in zip(b, b[1:])):
        raise ConstructionError("offsets must satisfy 0 <= beta_1 < beta_2 < ...")
    if not b[-1] < b[0] + mu <= 1 or b[-1] > 1 - mu:
        raise ConstructionError("offsets must satisfy beta_last < beta_1 + mu <= 1 and beta_last <= 1 - mu")
    Q = (len(b) - 1) // 2
    pieces = [(b[2 * l], b[2 * l + 1]) for l in range(Q)]
    pieces.append((b[-1], b[0] + mu))
    pieces += [(b[2 * l + 1] + mu, b[2 * l + 2] + mu) for l in range(Q)]
    return pieces


def interval_union_construction(
    dims: Dimensions | Iterable[int], k: int, mu: Rational, betas: Sequence[Rational]
) -> MultiTransversal:
    """Cells whose fractional coordinate sum lies in the alternating union of windows.

    With the mu*N_P integrality of :func:`mu_scaled_params`, the result is a full
    k-dimensional transversal for L_P = mu*K_P and hence a simple MOA of strength M - k.
    """
    n = _as_n(dims)
    mu_scaled_params(n, k, mu)
    pieces = interval_union(mu, betas)
    N = math.lcm(*n)
    hits = frozenset(
        r for r in range(N) if any(lo <= Fraction(r, N) < hi for lo, hi in pieces)
    )
    return _select(n, hits)


Mode = Literal["transversal", "moa"]


def linear_combination(
    terms: Sequence[tuple[Rational, MultiTransversal, ParamSet]],
    mode: Mode = "transversal",
) -> tuple[MultiTransversal, ParamSet]:
    """Combine transversals with rational coefficients.

    ``transversal`` mode: coefficients must be positive, L*_P = floor(sum a_l L_P^(l)).
    ``moa`` mode: every term must be full with constant K_P/L_P; coefficients may be
    negative and L*_P = sum a_l L_P^(l) exactly.
    In both modes each combined multiplicity must be a non-negative integer.
    """
    if not terms:
        raise ConstructionError("empty combination")
    n, k = terms[0][2].n, terms[0][2].k
    coefs = []
    for a, T, p in terms:
        a = Fraction(a)
        if p.n != n or p.k != k or T.n != n:
            raise ConstructionError("all terms must share dimensions and k")
        if mode == "transversal":
            if a <= 0:
                raise ConstructionError(f"coefficient {a} must be positive in transversal mode")
            if not check_transversal(T, p).ok:
                raise ConstructionError("a term is not a transversal for its parameters")
        elif mode == "moa":
            if a == 0:
                raise ConstructionError("coefficients must be nonzero in MOA mode")
            if not check_transversal(T, p).ok or not fullness(T, p)[0] or not konstant_holds(p):
                raise ConstructionError("a term is not an MOA (full transversal with constant K_P/L_P)")
        else:
            raise ValueError(f"unknown mode {mode!r}")
        coefs.append(a)

    support = sorted({v for _, T, _ in terms for v in T})
    counts = {}
    for v in support:
        c = sum(a * T[v] for a, (_, T, _) in zip(coefs, terms))
        if c.denominator != 1 or c < 0:
            raise ConstructionError(f"combined multiplicity {c} at {v} is not a non-negative integer")
        counts[v] = int(c)

    L = {}
    for P in terms[0][2].L:
        total = sum(a * p.L[P] for a, (_, _, p) in zip(coefs, terms))
        if mode == "transversal":
            total = Fraction(math.floor(total))
        if total.denominator != 1 or total < 1:
            raise ConstructionError(f"combined bound {total} at P={list(P)} is not a positive integer", subset=P)
        L[P] = int(total)
    return MultiTransversal(n, counts), ParamSet(n, k, L)


def tensor_product(
    T1: MultiTransversal, p1: ParamSet, T2: MultiTransversal, p2: ParamSet
) -> tuple[MultiTransversal, ParamSet]:
    """Entry (a_j n2_j + b_j)_j with multiplicity mult1(a) * mult2(b); L_P = L1_P * L2_P."""
    if p1.M != p2.M or p1.k != p2.k:
        raise ConstructionError("tensor factors need the same M and k")
    if T1.n != p1.n or T2.n != p2.n:
        raise PreconditionError("transversal and parameter dimensions disagree")
    n2 = p2.n
    n = tuple(a * b for a, b in zip(p1.n, n2))
    counts = {}
    for a, ca in T1.items():
        for b, cb in T2.items():
            counts[tuple(x * y + z for x, y, z in zip(a, n2, b))] = ca * cb
    L = {P: p1.L[P] * p2.L[P] for P in p1.L}
    return MultiTransversal(n, counts), ParamSet(n, p1.k, L)


__all__ = [
    "FracWindow",
    "engel_count",
    "window_count",
    "residue_histogram",
    "fractional_construction",
    "gencond_check",
    "gencond_violations",
    "construct_full",
    "beta_grid",
    "full_for_all_beta",
    "partition_pi",
    "oarray_recipe",
    "mu_scaled_params",
    "interval_union",
    "interval_union_construction",
    "linear_combination",
    "tensor_product",
]
