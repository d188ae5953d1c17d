"""Command-line interface: ``totalpos <subcommand> ...``.

Exit codes: 0 success, 1 a catalog claim or property failed, 2 usage or
parse error, 3 a sign could not be certified within the precision ceiling.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import catalog
from .classify import (
    NotHankelError,
    classify,
    fekete_failure,
    gp_failure,
    mixed_failure,
)
from .exact import format_rational, parse_rational
from .exppoly import (
    SignUndetermined,
    classify_power,
    count_roots_certified,
    default_max_bits,
    laguerre_bound,
    minor_exppoly,
    sign_at,
)
from .hadamard import check_product_closure, check_sum_closure, hadamard_product
from .matrix import DimensionError, Matrix, is_hankel
from .moments import DiscreteMeasure, Factorial, LambdaSquare, random_measure, sequence_to_json, shifted_hankel, stieltjes_strict_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument types -------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _t_range(text: str) -> tuple[Fraction, Fraction]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected LO:HI")
    lo_q, hi_q = _rational(lo), _rational(hi)
    if not lo_q < hi_q:
        raise argparse.ArgumentTypeError("need LO < HI")
    return lo_q, hi_q


def _param(text: str) -> tuple[str, Fraction]:
    k, sep, v = text.partition("=")
    if not sep or not k:
        raise argparse.ArgumentTypeError("expected NAME=RATIONAL")
    return k.strip(), _rational(v)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _index_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


# -- matrix sources ---------------------------------------------------------------


def _add_source(p: argparse.ArgumentParser, *, fh: bool = True) -> None:
    g = p.add_argument_group("matrix source (one of)")
    g.add_argument("--input", metavar="PATH", help="matrix file (JSON schema or whitespace text)")
    g.add_argument("--case", metavar="ID", help="catalog case id")
    g.add_argument("--matrix", metavar="NAME", help="matrix name within --case (default: first)")
    g.add_argument("--param", metavar="NAME=Q", type=_param, action="append", default=[],
                   help="override a catalog parameter (repeatable)")
    if fh:
        g.add_argument("--family", choices=["fh"], help="generated family")
        _add_fh_args(g)


def _add_fh_args(g) -> None:
    g.add_argument("--n", type=_positive_int, default=4, help="fh family size (default 4)")
    g.add_argument("--eps", type=_rational, default=Fraction(1, 10000), help="fh family epsilon (default 1/10000)")


def _fh(n: int, eps: Fraction) -> Matrix:
    if eps <= 0:
        raise UsageError("--eps must be positive")
    return catalog.fh_matrix([Fraction(2) ** i for i in range(n)], eps)


def _load_matrix(args) -> Matrix:
    chosen = [s for s in ("input", "case", "family") if getattr(args, s, None)]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --input, --case, --family")
    if args.input:
        return Matrix.load(args.input)
    if args.case:
        return catalog.case_matrix(args.case, args.matrix, dict(args.param))
    return _fh(args.n, args.eps)


# -- output --------------------------------------------------------------------


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        if isinstance(v, Fraction):
            v = format_rational(v)
        elif isinstance(v, tuple) and v and isinstance(v[0], Fraction):
            v = [format_rational(q) for q in v]
        elif isinstance(v, list) and v and isinstance(v[0], tuple):
            v = {name: format_rational(q) for name, q in v}
        out[k] = v
    out["bits"] = args.bits if getattr(args, "bits", None) else default_max_bits()
    return out


def _emit(args, report: dict, table: str) -> None:
    if args.format == "json":
        print(json.dumps({"config": _config(args), **report}, indent=2))
    else:
        print(table)


def _orders_line(c) -> str:
    line = f"tp_order={c.tp_order} tn_order={c.tn_order} (size {c.size[0]}x{c.size[1]})"
    for name, w in (("TP", c.tp_witness), ("TN", c.tn_witness)):
        if w is not None:
            val = format_rational(w.value) if w.value is not None else f"sign {w.sign:+d}"
            line += f"\n  first {name} failure: rows {list(w.rows)} cols {list(w.cols)} -> {val}"
    return line


# -- subcommands ------------------------------------------------------------------


def cmd_classify(args) -> int:
    A = _load_matrix(args)
    method = args.method
    if method in ("auto", "brute", "hankel"):
        try:
            c = classify(A, method, args.order)
        except NotHankelError as exc:
            raise UsageError(str(exc)) from None
        used = method if method != "auto" else ("hankel" if A.is_square() and is_hankel(A) else "brute")
        _emit(args, {"method": used, "classification": c.to_dict()}, f"method: {used}\n{_orders_line(c)}")
        return EXIT_OK
    r = args.order if args.order is not None else min(A.shape)
    try:
        if method == "gp":
            w = gp_failure(A)
        elif method == "fekete":
            w = fekete_failure(A, r)
        else:
            w = mixed_failure(A, r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    satisfied = w is None
    report = {"method": method, "order": None if method == "gp" else r, "satisfied": satisfied,
              "witness": w.to_dict() if w else None}
    if satisfied:
        what = "TP" if method == "gp" else f"TP_{r}"
        text = f"method: {method}\ncriterion satisfied: matrix is {what}"
    else:
        val = format_rational(w.value)
        text = (f"method: {method}\ncriterion not satisfied: first failing minor rows {list(w.rows)} "
                f"cols {list(w.cols)} -> {val}")
    _emit(args, report, text)
    return EXIT_OK


def _witness_certificate(A: Matrix, w, t: Fraction, bits: int):
    if w is None:
        return None
    f = minor_exppoly(A, w.rows, w.cols)
    return sign_at(f, t, bits).to_dict()


def cmd_power(args) -> int:
    A = _load_matrix(args)
    bits = args.bits or default_max_bits()
    c = classify_power(A, args.t, args.order, max_bits=bits)
    certs = {
        "tp_witness": _witness_certificate(A, c.tp_witness, args.t, bits) if args.t.denominator != 1 else None,
        "tn_witness": _witness_certificate(A, c.tn_witness, args.t, bits) if args.t.denominator != 1 else None,
    }
    text = f"t = {format_rational(args.t)}\n{_orders_line(c)}"
    for k, cert in certs.items():
        if cert:
            text += f"\n  {k} certified by {cert['method']} at {cert['precision_bits']} bits"
    _emit(args, {"t": format_rational(args.t), "classification": c.to_dict(), "certificates": certs}, text)
    return EXIT_OK


def cmd_scan(args) -> int:
    if bool(args.family) == bool(args.input):
        raise UsageError("give exactly one of --family, --input")
    if args.input:
        A = Matrix.load(args.input)
        label = args.input
    elif args.family == "fh":
        A = _fh(args.n, args.eps)
        label = f"fh n={args.n} eps={format_rational(args.eps)}"
    else:
        A = catalog.case_matrix(args.family, args.matrix, dict(args.param))
        label = args.family if not args.matrix else f"{args.family}:{args.matrix}"
    r = min(A.shape) if args.order is None else min(args.order, *A.shape)
    bits = args.bits or default_max_bits()
    lo, hi = args.t_range
    step = (hi - lo) / args.steps
    points = []
    for k in range(args.steps + 1):
        t = lo + k * step
        if t <= 0:
            continue
        c = classify_power(A, t, r, max_bits=bits)
        points.append({"t": format_rational(t), "tn": c.is_tn_r(r), "tp": c.is_tp_r(r),
                       "tp_order": c.tp_order, "tn_order": c.tn_order})
    failures = [p["t"] for p in points if not p["tn"]]
    report = {"family": label, "order": r, "points": points, "tn_failures": failures,
              "tp_failures": [p["t"] for p in points if not p["tp"]]}
    hankel = A.is_square() and is_hankel(A)
    if hankel and r >= 2:
        bound = Fraction(max(r - 2, 0))
        report["tn_failures_above_critical_exponent"] = [t for t in failures if parse_rational(t) >= bound]
    lines = [f"scan {label}, order {r}, t in [{format_rational(lo)}, {format_rational(hi)}], {args.steps} steps"]
    for p in points:
        lines.append(f"  t={p['t']:>8}  TN_{r}: {'yes' if p['tn'] else 'NO '}  TP_{r}: {'yes' if p['tp'] else 'no'}")
    lines.append("TN failures: " + (", ".join(failures) if failures else "none"))
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_repro(args) -> int:
    if bool(args.case) == bool(args.all):
        raise UsageError("give exactly one of --case ID, --all")
    if args.all:
        if args.param:
            raise UsageError("--param needs --case")
        rep = catalog.run_all()
        _emit(args, rep.to_dict(), rep.table())
    else:
        rep = catalog.run_case(args.case, dict(args.param))
        _emit(args, rep.to_dict(), rep.table())
    return EXIT_OK if rep.failures == 0 else EXIT_FAIL


def cmd_hadamard(args) -> int:
    A, B = Matrix.load(args.a), Matrix.load(args.b)
    rep = check_sum_closure(A, B, args.order) if args.op == "sum" else check_product_closure(A, B, args.order)
    result = A + B if args.op == "sum" else hadamard_product(A, B)
    lines = [
        f"A: {_orders_line(rep.a)}",
        f"B: {_orders_line(rep.b)}",
        f"{args.op}: {_orders_line(rep.result)}",
        "applicable results: " + (", ".join(rep.applicable) or "none"),
        f"violation: {rep.violation}",
    ]
    _emit(args, {"result": result.to_json(), "report": rep.to_dict()}, "\n".join(lines))
    return EXIT_FAIL if rep.violation else EXIT_OK


def cmd_hankel_gen(args) -> int:
    chosen = [x for x in (args.measure, args.factorial or None, args.lambda2, args.random) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --measure, --factorial, --lambda2, --random")
    if args.measure:
        seq = DiscreteMeasure.parse(args.measure)
    elif args.factorial:
        seq = Factorial()
    elif args.lambda2:
        seq = LambdaSquare(args.lambda2)
    else:
        import numpy as np

        seq = random_measure(args.random, np.random.default_rng(args.seed))
    H = shifted_hankel(seq, args.n, args.shift)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(H.to_json(), fh, indent=2)
            fh.write("\n")
    check = stieltjes_strict_check(seq, args.n)
    report = {"sequence": sequence_to_json(seq), "matrix": H.to_json(), "stieltjes": check.to_dict()}
    text = f"{H}\nleading Hankel determinants: {', '.join(format_rational(d) for d in check.deltas)}"
    text += f"\nstrict (TP section): {check.strict}"
    _emit(args, report, text)
    return EXIT_OK


def _parse_minor(text: str | None, A: Matrix):
    if text is None:
        return None, None
    rows, sep, cols = text.partition(";")
    if not sep:
        raise UsageError("--minor expects 'I;J', e.g. '1,2;2,3'")
    return _index_list(rows), _index_list(cols)


def cmd_exppoly(args) -> int:
    A = _load_matrix(args)
    I, J = _parse_minor(args.minor, A)
    f = minor_exppoly(A, I, J)
    bound, parity = laguerre_bound(f)
    k = len(I) if I else A.m
    lo, hi = args.t_range if args.t_range else (Fraction(-1), Fraction(k + 1))
    report = {"exppoly": f.to_json(), "text": str(f), "laguerre_bound": bound, "parity": parity}
    lines = [f"f(t) = {f}", f"Laguerre bound: {bound} (parity {parity})"]
    if f.is_zero():
        lines.append("identically zero")
        report["roots"] = None
    else:
        roots = count_roots_certified(f, lo, hi, grid=args.grid, max_bits=args.bits or default_max_bits())
        report["roots"] = roots.to_dict()
        lines.append(f"roots in [{format_rational(lo)}, {format_rational(hi)}]:")
        for r in roots.roots:
            where = format_rational(r.lo) if r.exact else f"({format_rational(r.lo)}, {format_rational(r.hi)})"
            mult = f"{'>=' if r.at_least else ''}{r.multiplicity}"
            lines.append(f"  {where}  multiplicity {mult}")
        lines.append(f"complete: {roots.complete}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_harness(args) -> int:
    from .harness import HarnessConfig, run_property_suite

    config = HarnessConfig.load(args.config) if args.config else HarnessConfig.load_default()
    if args.max_size:
        config = config.replace(max_size=args.max_size)
    if args.iterations:
        config = config.replace(iterations=args.iterations)
    rep = run_property_suite(config)
    _emit(args, rep.to_dict(), rep.table())
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="table")
    common.add_argument("--seed", type=int, default=0, help="rng seed (random generators only)")

    p = argparse.ArgumentParser(prog="totalpos", description="Exact total positivity of matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="TP/TN order of a matrix")
    _add_source(s)
    s.add_argument("--method", choices=["auto", "brute", "gp", "fekete", "mixed", "hankel"], default="auto")
    s.add_argument("--order", type=_positive_int)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("power", parents=[common], help="classify the Hadamard power A^t")
    _add_source(s)
    s.add_argument("--t", type=_rational, required=True)
    s.add_argument("--order", type=_positive_int)
    s.add_argument("--bits", type=_positive_int, help="precision ceiling (default $TOTALPOS_BITS or 4096)")
    s.set_defaults(func=cmd_power)

    s = sub.add_parser("scan", parents=[common], help="TN_r of A^t over a grid of t")
    s.add_argument("--family", help="'fh' or a catalog case id")
    s.add_argument("--input", metavar="PATH", help="matrix file, instead of --family")
    s.add_argument("--matrix", metavar="NAME")
    s.add_argument("--param", type=_param, action="append", default=[])
    _add_fh_args(s)
    s.add_argument("--t-range", type=_t_range, required=True, metavar="LO:HI")
    s.add_argument("--steps", type=_positive_int, default=12)
    s.add_argument("--order", type=_positive_int)
    s.add_argument("--bits", type=_positive_int)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("repro", parents=[common], help="re-check catalog claims")
    s.add_argument("--case", metavar="ID")
    s.add_argument("--all", action="store_true")
    s.add_argument("--param", type=_param, action="append", default=[])
    s.set_defaults(func=cmd_repro)

    s = sub.add_parser("hadamard", parents=[common], help="Hadamard product or sum, classified")
    s.add_argument("--a", required=True, metavar="PATH")
    s.add_argument("--b", required=True, metavar="PATH")
    s.add_argument("--op", choices=["product", "sum"], default="product")
    s.add_argument("--order", type=_positive_int)
    s.set_defaults(func=cmd_hadamard)

    s = sub.add_parser("hankel-gen", parents=[common], help="Hankel section of a moment sequence")
    s.add_argument("--measure", metavar="X:W,...")
    s.add_argument("--factorial", action="store_true")
    s.add_argument("--lambda2", type=_rational, metavar="LAMBDA")
    s.add_argument("--random", type=_positive_int, metavar="ATOMS", help="random measure (uses --seed)")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--shift", type=int, default=0)
    s.add_argument("--output", metavar="PATH", help="also write the matrix JSON here")
    s.set_defaults(func=cmd_hankel_gen)

    s = sub.add_parser("exppoly", parents=[common], help="minor of A^t as an exponential polynomial")
    _add_source(s)
    s.add_argument("--minor", metavar="I;J", help="1-based rows;cols, default the full determinant")
    s.add_argument("--t-range", type=_t_range, metavar="LO:HI")
    s.add_argument("--grid", type=_positive_int, default=64)
    s.add_argument("--bits", type=_positive_int)
    s.set_defaults(func=cmd_exppoly)

    s = sub.add_parser("harness", parents=[common], help="run the seeded property suite")
    s.add_argument("--config", metavar="PATH")
    s.add_argument("--max-size", type=_positive_int)
    s.add_argument("--iterations", type=_positive_int)
    s.set_defaults(func=cmd_harness)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SignUndetermined as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.interval:
            print(f"enclosure: [{exc.interval[0]}, {exc.interval[1]}] at {exc.bits} bits", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, catalog.CatalogError, NotHankelError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
