"""Flat-file formats: JSON parameter files, tab-separated transversal files, MOA text files.

All indices are 0-based.  Rationals are written as "p/q" (or plain integers),
never in decimal notation.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import (
    MultiTransversal,
    MultitransError,
    ParamSet,
    ProfileMatrix,
    Rational,
    as_fraction,
    fmt_rational,
)
from .hull import GammaConstraint, GammaRow
from .transversal import Moa, moa_strength


class FormatError(MultitransError):
    """Malformed or inconsistent input file."""


def _ints(x: Any, what: str) -> tuple[int, ...]:
    if not isinstance(x, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in x):
        raise FormatError(f"{what} must be a list of integers, got {x!r}")
    return tuple(x)


def _int(x: Any, what: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise FormatError(f"{what} must be an integer, got {x!r}")
    return x


def _keys(obj: Any, required: set[str], optional: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object")
    missing = required - obj.keys()
    if missing:
        raise FormatError(f"{what} lacks {sorted(missing)}")
    extra = obj.keys() - required - optional
    if extra:
        raise FormatError(f"{what} has unknown keys {sorted(extra)}")


def parse_rational(s: str) -> Fraction:
    try:
        return as_fraction(s)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad rational {s!r}: {e}") from None


def parse_rational_list(s: str) -> list[Fraction]:
    return [parse_rational(x) for x in s.split(",") if x.strip()]


# ---------------------------------------------------------------- parameter files


@dataclass(frozen=True)
class ParamFile:
    params: ParamSet
    m: tuple[int, ...] | None = None
    gamma: GammaConstraint | None = None

    @property
    def parts(self) -> tuple[int, ...]:
        return self.m if self.m is not None else tuple(x - 1 for x in self.params.n)


def params_from_json(doc: Any) -> ParamFile:
    _keys(doc, {"n", "k", "L"}, {"m", "gamma"}, "parameter file")
    n = _ints(doc["n"], "n")
    k = _int(doc["k"], "k")
    if not isinstance(doc["L"], list):
        raise FormatError("L must be a list of {P, value} objects")
    L = {}
    for entry in doc["L"]:
        _keys(entry, {"P", "value"}, set(), "L entry")
        P = tuple(sorted(_ints(entry["P"], "P")))
        if P in L:
            raise FormatError(f"duplicate L entry for P={list(P)}")
        L[P] = _int(entry["value"], "L value")
    try:
        p = ParamSet(n, k, L)
    except MultitransError as e:
        raise FormatError(str(e)) from None
    m = None
    if "m" in doc:
        m = _ints(doc["m"], "m")
        if tuple(x + 1 for x in m) != n:
            raise FormatError(f"m={list(m)} inconsistent with n={list(n)} (need n_j = m_j + 1)")
    gamma = None
    if "gamma" in doc:
        if not isinstance(doc["gamma"], list):
            raise FormatError("gamma must be a list of rows")
        rows = []
        for row in doc["gamma"]:
            _keys(row, {"A", "alpha"}, set(), "gamma row")
            alpha = {}
            for term in row["alpha"]:
                _keys(term, {"v", "c"}, set(), "gamma coefficient")
                v = _ints(term["v"], "v")
                if len(v) != len(n) or any(not 0 <= a < b for a, b in zip(v, n)):
                    raise FormatError(f"gamma vector {list(v)} outside the box")
                alpha[v] = _int(term["c"], "c")
            try:
                rows.append(GammaRow(_int(row["A"], "A"), alpha))
            except MultitransError as e:
                raise FormatError(str(e)) from None
        gamma = GammaConstraint(tuple(rows))
    return ParamFile(p, m, gamma)


def params_to_json(pf: ParamFile | ParamSet) -> dict:
    if isinstance(pf, ParamSet):
        pf = ParamFile(pf)
    p = pf.params
    doc: dict[str, Any] = {
        "n": list(p.n),
        "k": p.k,
        "L": [{"P": list(P), "value": v} for P, v in sorted(p.L.items())],
    }
    if pf.m is not None:
        doc["m"] = list(pf.m)
    if pf.gamma is not None:
        doc["gamma"] = [
            {"A": row.A, "alpha": [{"v": list(v), "c": c} for v, c in sorted(row.alpha.items())]}
            for row in pf.gamma.rows
        ]
    return doc


def read_params(path: str | Path) -> ParamFile:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None
    return params_from_json(doc)


def write_params(path: str | Path, pf: ParamFile | ParamSet) -> None:
    Path(path).write_text(json.dumps(params_to_json(pf), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------- transversal files


def dumps_transversal(T: MultiTransversal) -> str:
    lines = [f"# transversal n={','.join(map(str, T.n))}"]
    for v, c in sorted(T.items()):
        lines.append("\t".join(map(str, v)) + f"\t{c}")
    return "\n".join(lines) + "\n"


def loads_transversal(text: str) -> MultiTransversal:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# transversal n="):
        raise FormatError("missing '# transversal n=...' header")
    try:
        n = tuple(int(x) for x in lines[0][len("# transversal n="):].strip().split(","))
    except ValueError:
        raise FormatError(f"bad header {lines[0]!r}") from None
    counts: dict[tuple[int, ...], int] = {}
    prev = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != len(n) + 1:
            raise FormatError(f"line {lineno}: expected {len(n) + 1} tab-separated fields")
        try:
            *v, c = (int(x) for x in fields)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field") from None
        v = tuple(v)
        if c < 1:
            raise FormatError(f"line {lineno}: multiplicity must be >= 1")
        if prev is not None and v <= prev:
            raise FormatError(f"line {lineno}: vectors must be strictly increasing")
        if any(not 0 <= a < b for a, b in zip(v, n)):
            raise FormatError(f"line {lineno}: {list(v)} outside the box n={list(n)}")
        counts[v] = c
        prev = v
    return MultiTransversal(n, counts)


def read_transversal(path: str | Path) -> MultiTransversal:
    try:
        return loads_transversal(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def write_transversal(path: str | Path, T: MultiTransversal) -> None:
    Path(path).write_text(dumps_transversal(T), encoding="utf-8")


# ---------------------------------------------------------------- MOA files


def dumps_moa(A: Moa) -> str:
    head = (
        f"MOA constraint={A.M} strength={A.strength} "
        f"levels={','.join(map(str, A.levels))} runs={A.runs}"
    )
    return "\n".join([head] + [" ".join(map(str, r)) for r in A.rows]) + "\n"


def loads_moa(text: str) -> Moa:
    """Parse an MOA file; the index set is filled in when the declared strength holds."""
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("MOA "):
        raise FormatError("missing 'MOA ...' header")
    fields = {}
    for tok in lines[0].split()[1:]:
        key, _, val = tok.partition("=")
        fields[key] = val
    if set(fields) != {"constraint", "strength", "levels", "runs"}:
        raise FormatError(f"header needs constraint, strength, levels, runs; got {sorted(fields)}")
    try:
        M = int(fields["constraint"])
        d = int(fields["strength"])
        levels = tuple(int(x) for x in fields["levels"].split(","))
        runs = int(fields["runs"])
        rows = [tuple(int(x) for x in l.split()) for l in lines[1:]]
    except ValueError:
        raise FormatError("non-integer value in MOA file") from None
    if len(levels) != M:
        raise FormatError(f"{len(levels)} levels given for constraint {M}")
    if len(rows) != runs:
        raise FormatError(f"header announces {runs} runs, found {len(rows)}")
    try:
        A = Moa(levels, tuple(rows), d)
    except MultitransError as e:
        raise FormatError(str(e)) from None
    res = moa_strength(A, d)
    if res.holds:
        A = Moa(levels, A.rows, d, res.lam)
    return A


def read_moa(path: str | Path) -> Moa:
    try:
        return loads_moa(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def write_moa(path: str | Path, A: Moa) -> None:
    Path(path).write_text(dumps_moa(A), encoding="utf-8")


# ---------------------------------------------------------------- profile matrices


def matrix_to_json(S: ProfileMatrix) -> dict:
    return {
        "n": list(S.n),
        "entries": [{"v": list(v), "value": fmt_rational(c)} for v, c in sorted(S.counts.items())],
    }


def matrix_from_json(doc: Any) -> ProfileMatrix:
    _keys(doc, {"n", "entries"}, set(), "profile matrix")
    n = _ints(doc["n"], "n")
    counts: dict[tuple[int, ...], Rational] = {}
    for e in doc["entries"]:
        _keys(e, {"v", "value"}, set(), "matrix entry")
        v = _ints(e["v"], "v")
        val = e["value"]
        counts[v] = parse_rational(val) if isinstance(val, str) else Fraction(_int(val, "value"))
    try:
        return ProfileMatrix(n, counts)
    except MultitransError as e:
        raise FormatError(str(e)) from None


def read_matrix(path: str | Path) -> ProfileMatrix:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None
    return matrix_from_json(doc)


__all__ = [
    "FormatError",
    "ParamFile",
    "parse_rational",
    "parse_rational_list",
    "params_from_json",
    "params_to_json",
    "read_params",
    "write_params",
    "dumps_transversal",
    "loads_transversal",
    "read_transversal",
    "write_transversal",
    "dumps_moa",
    "loads_moa",
    "read_moa",
    "write_moa",
    "matrix_to_json",
    "matrix_from_json",
    "read_matrix",
]
