"""Command-line interface: construct, verify, solve, hull.

Exit codes: 0 ok, 1 parse error, 2 construction error, 3 verification failure
or infeasible decomposition, 4 instance too large.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from fractions import Fraction

from . import construct, hull, optimize
from .core import (
    ConstructionError,
    ConversionError,
    MultitransError,
    ScaleError,
    fmt_rational,
)
from .formats import (
    FormatError,
    ParamFile,
    matrix_to_json,
    parse_rational,
    parse_rational_list,
    read_matrix,
    read_moa,
    read_params,
    read_transversal,
    write_moa,
    write_params,
    write_transversal,
)
from .transversal import check_transversal, konstant_holds, moa_strength, to_moa

EXIT_OK, EXIT_PARSE, EXIT_CONSTRUCT, EXIT_VERIFY, EXIT_SCALE = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _rational_arg(s: str) -> Fraction:
    try:
        return parse_rational(s)
    except FormatError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


# ---------------------------------------------------------------- construct


def cmd_construct(args) -> int:
    method = args.method
    params = [read_params(f) for f in args.params]
    if method in ("frac", "interval") and len(params) != 1:
        raise _Fail(EXIT_PARSE, f"{method} takes exactly one --params file")
    try:
        if method == "frac":
            p = params[0].params
            if args.mu is None:
                T = construct.construct_full(p, args.beta)
            else:
                T = construct.fractional_construction(p.n, construct.FracWindow(args.beta, args.mu))
                report = check_transversal(T, p)
                if not report.ok:
                    w = report.witnesses[0]
                    raise ConstructionError(
                        f"window selects {w.count} > L_P={w.bound} cells in a fiber of P={list(w.P)}",
                        subset=w.P,
                    )
            out_params = p
        elif method == "interval":
            p = params[0].params
            if args.mu is None or not args.betas:
                raise _Fail(EXIT_PARSE, "interval needs --mu and --betas")
            T = construct.interval_union_construction(p.n, p.k, args.mu, parse_rational_list(args.betas))
            out_params = construct.mu_scaled_params(p.n, p.k, args.mu)
        elif method == "tensor":
            if len(params) != 2 or len(args.inputs) != 2:
                raise _Fail(EXIT_PARSE, "tensor needs two --params and two --in files")
            T1, T2 = (read_transversal(f) for f in args.inputs)
            T, out_params = construct.tensor_product(T1, params[0].params, T2, params[1].params)
        elif method == "lincomb":
            coefs = [parse_rational(c) for c in args.coef]
            if not (len(params) == len(args.inputs) == len(coefs) >= 1):
                raise _Fail(EXIT_PARSE, "lincomb needs matching --params, --in and --coef lists")
            terms = [(a, read_transversal(f), pf.params) for a, f, pf in zip(coefs, args.inputs, params)]
            T, out_params = construct.linear_combination(terms, mode=args.mode)
        else:
            raise _Fail(EXIT_PARSE, f"unknown method {method}")
    except (ConstructionError, ConversionError) as e:
        raise _Fail(EXIT_CONSTRUCT, str(e)) from None
    except MultitransError as e:
        # bad window offsets and similar range problems are construction failures here
        if isinstance(e, (FormatError, ScaleError)):
            raise
        raise _Fail(EXIT_CONSTRUCT, str(e)) from None

    write_transversal(args.out, T)
    if args.params_out:
        write_params(args.params_out, out_params)
    if args.moa_out:
        try:
            write_moa(args.moa_out, to_moa(T, out_params))
        except ConversionError as e:
            raise _Fail(EXIT_CONSTRUCT, str(e)) from None
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _verify_moa_file(args) -> int:
    A = read_moa(args.moa)
    d = A.strength if args.strength is None else args.strength
    res = moa_strength(A, d)
    doc = {"runs": A.runs, "strength": d, "holds": res.holds, "simple": A.is_simple()}
    if res.holds:
        doc["lambda"] = [{"J": list(J), "value": v} for J, v in sorted(res.lam.items())]
    else:
        J, a, ca, b, cb = res.witness
        doc["witness"] = {"J": list(J), "a": list(a), "count_a": ca, "b": list(b), "count_b": cb}
    _emit(doc)
    return EXIT_OK if res.holds else EXIT_VERIFY


def cmd_verify(args) -> int:
    if args.moa:
        return _verify_moa_file(args)
    if not args.params or not args.inputs:
        raise _Fail(EXIT_PARSE, "verify needs --params and --in (or --moa)")
    p = read_params(args.params[0]).params
    T = read_transversal(args.inputs[0])
    if T.n != p.n:
        raise _Fail(EXIT_PARSE, f"transversal n={list(T.n)} does not match parameters n={list(p.n)}")
    report = check_transversal(T, p)
    tight = [list(P) for P in p.L if T.size == p.size_bound(P)] if report.ok else []
    doc = {
        "transversal": report.ok,
        "violations": [w.to_json() for w in report.witnesses],
        "size": T.size,
        "simple": T.is_simple(),
        "full": bool(tight),
        "tight": tight,
        "konstant": konstant_holds(p),
    }
    ok = report.ok and (bool(tight) or not args.require_full)
    if args.as_moa:
        moa_doc: dict = {}
        try:
            A = to_moa(T, p)
        except ConversionError as e:
            moa_doc["error"] = str(e)
            ok = False
        else:
            d = p.M - p.k if args.strength is None else args.strength
            res = moa_strength(A, d)
            moa_doc.update({"strength": d, "holds": res.holds, "runs": A.runs})
            if res.holds:
                moa_doc["lambda"] = [{"J": list(J), "value": v} for J, v in sorted(res.lam.items())]
            ok = ok and res.holds
        doc["moa"] = moa_doc
    _emit(doc)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------- solve


def cmd_solve(args) -> int:
    pf = read_params(args.params[0])
    res = optimize.max_weight_transversal(pf.params, pf.parts, mode=args.mode)
    write_transversal(args.out, res.best)
    _emit({"weight": res.weight, "node_count": res.node_count, "optimal": res.optimal})
    return EXIT_OK


# ---------------------------------------------------------------- hull


def _gamma(pf: ParamFile, simple: bool) -> hull.GammaConstraint | None:
    G = pf.gamma
    if simple:
        S = hull.simplicity_gamma(pf.params.n)
        G = S if G is None else G + S
    return G


def cmd_hull(args) -> int:
    pf = read_params(args.params[0])
    G = _gamma(pf, args.simple)
    if args.extreme:
        pts = hull.extreme_points(pf.params, G)
        _emit({"extreme_points": [matrix_to_json(S) for S in pts]})
        return EXIT_OK
    target = read_matrix(args.decompose)
    cands = hull.homogeneous_candidates(pf.params, G)
    lam = hull.convex_decomposition(target, cands)
    if lam is None:
        sys.stdout.write("infeasible\n")
        return EXIT_VERIFY
    _emit(
        {
            "decomposition": [
                {"lambda": fmt_rational(x), "matrix": matrix_to_json(S)}
                for x, S in zip(lam, cands)
                if x
            ]
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="multitrans", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a transversal and write it as a TSV file")
    c.add_argument("--method", choices=["frac", "interval", "tensor", "lincomb"], default="frac")
    c.add_argument("--params", action="append", required=True, help="parameter JSON (repeat for tensor/lincomb)")
    c.add_argument("--in", dest="inputs", action="append", default=[], help="input transversal (tensor/lincomb)")
    c.add_argument("--coef", action="append", default=[], help="rational coefficient p/q (lincomb)")
    c.add_argument("--mode", choices=["transversal", "moa"], default="transversal")
    c.add_argument("--beta", type=_rational_arg, default=Fraction(0))
    c.add_argument("--mu", type=_rational_arg)
    c.add_argument("--betas", help="comma-separated offsets for the interval union")
    c.add_argument("--out", required=True)
    c.add_argument("--params-out", help="also write the parameters the result satisfies")
    c.add_argument("--moa-out", help="also write the result as an MOA file")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a transversal (or MOA file) and print a JSON report")
    v.add_argument("--params", action="append", default=[])
    v.add_argument("--in", dest="inputs", action="append", default=[])
    v.add_argument("--moa", help="MOA file to check for strength instead")
    v.add_argument("--as-moa", action="store_true")
    v.add_argument("--strength", type=int)
    v.add_argument("--require-full", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="maximum-weight simple transversal")
    s.add_argument("--params", action="append", required=True)
    s.add_argument("--mode", choices=["exhaustive", "bnb"], default="bnb")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)

    h = sub.add_parser("hull", help="extreme points or convex decomposition of profile matrices")
    h.add_argument("--params", action="append", required=True)
    g = h.add_mutually_exclusive_group(required=True)
    g.add_argument("--extreme", action="store_true")
    g.add_argument("--decompose", metavar="TARGET", help="profile-matrix JSON to decompose")
    h.add_argument("--simple", action="store_true", help="add the simplicity constraint")
    h.set_defaults(func=cmd_hull)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return args.func(args)
    except _Fail as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except FormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ScaleError as e:
        print(f"too large: {e}", file=sys.stderr)
        return EXIT_SCALE
    except ConstructionError as e:
        print(f"construction error: {e}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except MultitransError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
