"""Registry of the worked examples and their checkable claims.

Matrices live in ``data/catalog_matrices.json`` (matrix JSON, where an entry
may also be an arithmetic expression in the case parameters and in ``x``);
claims live in ``data/catalog_claims.json``.  :func:`run_case` evaluates
every claim of a case and reports computed against expected values.
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Mapping, Sequence

from .classify import classify, contiguous_index_pairs, is_additive_core, is_tp_gp, is_tpr_fekete, is_tpr_mixed, perturb_to_tp
from .matrix import index_sets
from .exact import Poly, TPoly, as_fraction, format_rational, parse_rational
from .exppoly import count_roots_certified, classify_power, laguerre_bound, minor_exppoly, sign_at, ExpPoly
from .hadamard import hadamard_power_int, hadamard_power_series, hadamard_product
from .matrix import Matrix, det, is_hankel, submatrix

__all__ = [
    "CatalogError",
    "ClaimResult",
    "CaseReport",
    "SuiteReport",
    "case_ids",
    "load_case",
    "run_case",
    "run_all",
    "case_matrix",
    "appendix_b_formula",
    "appendix_b_oracle",
    "fh_matrix",
    "fh_series_matrix",
    "evaluate_expression",
]


class CatalogError(ValueError):
    pass


# -- leading term of det A_n(eps)^t for A_n(eps) = (1 + eps*u_i*u_j) ----------


def fh_matrix(u: Sequence, eps) -> Matrix:
    eps = as_fraction(eps)
    u = [as_fraction(v) for v in u]
    return Matrix([[1 + eps * a * b for b in u] for a in u])


def fh_series_matrix(u: Sequence) -> Matrix:
    """``(1 + u_i u_j x)`` with ``x`` standing for eps."""
    u = [as_fraction(v) for v in u]
    return Matrix([[Poly([1, a * b]) for b in u] for a in u])


def appendix_b_formula(u: Sequence) -> tuple[Poly, int]:
    """Leading coefficient (in ``t``) and exponent of ``det A_n(eps)^{∘t}``.

    The coefficient of ``eps**(n(n-1)/2)`` is
    ``prod_{k<n} 1/k! * prod_{i<j} (u_i - u_j)**2 * prod_{k<=n-2} (t-k)**(n-1-k)``.
    """
    u = [as_fraction(v) for v in u]
    n = len(u)
    if n < 2:
        raise ValueError("need n >= 2")
    if len(set(u)) != n:
        raise ValueError("repeated u_i: the leading coefficient degenerates to 0")
    c = Fraction(1)
    for k in range(1, n):
        c /= math.factorial(k)
    for i in range(n):
        for j in range(i + 1, n):
            c *= (u[i] - u[j]) ** 2
    p = TPoly([c])
    for k in range(n - 1):
        p = p * TPoly([-k, 1]) ** (n - 1 - k)
    return p, n * (n - 1) // 2


def appendix_b_oracle(u: Sequence) -> tuple[Poly, int]:
    """Same quantity read off the series determinant of the Hadamard power."""
    n = len(u)
    N = n * (n - 1) // 2
    d = det(hadamard_power_series(fh_series_matrix(u), N))
    lead = d.leading_term()
    if lead is None:
        return TPoly(), N
    return lead[1], lead[0]


# -- expression evaluation ----------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def evaluate_expression(text: str, params: Mapping[str, Fraction]):
    """Evaluate ``+ - * / **`` over integer literals, parameters and ``x``."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id == "x":
                return Poly([0, 1])
            if node.id in params:
                return params[node.id]
            raise CatalogError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            exp = ev(node.right)
            if isinstance(exp, Poly) or exp.denominator != 1:
                raise CatalogError(f"non-integer exponent in {text!r}")
            return ev(node.left) ** int(exp)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise CatalogError(f"unsupported syntax in {text!r}")

    try:
        tree = ast.parse(str(text), mode="eval")
    except SyntaxError as exc:
        raise CatalogError(f"cannot parse {text!r}") from exc
    value = ev(tree)
    if isinstance(value, Poly) and value.is_constant():
        return value.coeff(0)
    return value


def _entry(value, params):
    if isinstance(value, dict) and "poly" in value:
        return Poly([evaluate_expression(c, params) for c in value["poly"]])
    return evaluate_expression(value, params)


def _matrix_from_spec(spec: dict, params) -> Matrix:
    mat = Matrix([[_entry(v, params) for v in row] for row in spec["entries"]])
    if mat.shape != (spec.get("rows", mat.m), spec.get("cols", mat.n)):
        raise CatalogError("declared rows/cols disagree with entries")
    return mat


# -- data loading --------------------------------------------------------------


def _load(name: str) -> dict:
    return json.loads(resources.files("totalpos").joinpath("data").joinpath(name).read_text(encoding="utf-8"))


_MATRICES: dict | None = None
_CLAIMS: dict | None = None


def _data() -> tuple[dict, dict]:
    global _MATRICES, _CLAIMS
    if _MATRICES is None:
        _MATRICES = _load("catalog_matrices.json")
        _CLAIMS = _load("catalog_claims.json")
    return _MATRICES, _CLAIMS


def case_ids() -> list[str]:
    return sorted(_data()[1])


def load_case(case_id: str) -> dict:
    matrices, claims = _data()
    if case_id not in claims:
        raise CatalogError(f"unknown case {case_id!r}")
    return {"id": case_id, **matrices.get(case_id, {}), **claims[case_id]}


# -- claim evaluation ------------------------------------------------------------


class _Context:
    def __init__(self, case: dict, params: dict):
        self.case = case
        self.params = params
        self._cache: dict = {}

    def matrix(self, name: str) -> Matrix:
        if name not in self._cache:
            specs = self.case.get("matrices", {})
            if name not in specs:
                raise CatalogError(f"case {self.case['id']!r} has no matrix {name!r}")
            self._cache[name] = _matrix_from_spec(specs[name], self.params)
        return self._cache[name]

    def expr(self, e) -> Matrix:
        if isinstance(e, str):
            return self.matrix(e)
        if not isinstance(e, dict) or len(e) != 1:
            raise CatalogError(f"bad matrix expression {e!r}")
        (op, arg), = e.items()
        if op == "hadamard":
            return hadamard_product(self.expr(arg[0]), self.expr(arg[1]))
        if op == "sum":
            return self.expr(arg[0]) + self.expr(arg[1])
        if op == "power":
            return hadamard_power_int(self.expr(arg[0]), int(arg[1]))
        if op == "transpose":
            return self.expr(arg).T
        if op == "submatrix":
            return submatrix(self.expr(arg[0]), arg[1], arg[2])
        if op == "perturb":
            return perturb_to_tp(self.expr(arg[0]), evaluate_expression(arg[1], self.params))
        if op == "fh":
            return fh_matrix([evaluate_expression(v, self.params) for v in arg["u"]],
                             evaluate_expression(arg["eps"], self.params))
        if op == "fh_series":
            return fh_series_matrix([evaluate_expression(v, self.params) for v in arg["u"]])
        raise CatalogError(f"unknown matrix operation {op!r}")


def case_matrix(case_id: str, name: str | None = None, overrides: Mapping[str, Any] | None = None) -> Matrix:
    """A named matrix of a case (default: the first one listed) with parameters applied."""
    case = load_case(case_id)
    specs = case.get("matrices", {})
    if not specs:
        raise CatalogError(f"case {case_id!r} stores no matrices")
    name = next(iter(specs)) if name is None else name
    return _Context(case, _resolve_params(case, overrides)).matrix(name)


def _fmt(v) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, Poly):
        return str(v)
    if isinstance(v, Matrix):
        return [[str(a) for a in row] for row in v.rows]
    return v


def _expected_value(spec, params):
    if isinstance(spec, bool):
        return spec
    if isinstance(spec, dict) and "poly" in spec:
        return Poly([evaluate_expression(c, params) for c in spec["poly"]])
    if isinstance(spec, dict) and "tpoly" in spec:
        return TPoly([evaluate_expression(c, params) for c in spec["tpoly"]])
    if isinstance(spec, dict) and "entries" in spec:
        return _matrix_from_spec(spec, params)
    if isinstance(spec, list):
        return [_expected_value(s, params) for s in spec]
    return evaluate_expression(spec, params)


def _minor_block(M: Matrix, claim: dict) -> Matrix:
    if "rows" in claim or "cols" in claim:
        return submatrix(M, claim.get("rows", range(1, M.m + 1)), claim.get("cols", range(1, M.n + 1)))
    return M


def _claim_exact_value(ctx: _Context, claim: dict):
    M = ctx.expr(claim["of"])
    q = claim.get("quantity", "det")
    if q == "det":
        got = det(_minor_block(M, claim))
    elif q == "matrix":
        got = _minor_block(M, claim)
    elif q == "is_hankel":
        got = is_hankel(M)
    elif q == "is_symmetric":
        got = M.is_symmetric()
    elif q == "is_additive_core":
        got = is_additive_core(M)
    elif q == "coefficientwise_nonnegative_det":
        d = det(_minor_block(M, claim))
        got = d.is_coefficientwise_nonnegative() if isinstance(d, Poly) else d >= 0
    elif q == "all_contiguous_nonnegative":
        got = all(
            det(submatrix(M, I, J)) >= 0
            for k in range(1, min(M.shape) + 1)
            for I, J in contiguous_index_pairs(M.m, M.n, k)
        )
    elif q == "coefficientwise_tn":
        got = all(
            _nonneg(det(submatrix(M, I, J)))
            for k in range(1, min(M.shape) + 1)
            for I in index_sets(M.m, k)
            for J in index_sets(M.n, k)
        )
    elif q == "entries":
        got = [M.rows[i - 1][j - 1] for i, j in claim["at"]]
    elif q == "criterion":
        name, r = claim["criterion"], claim.get("order")
        fn = {"gp": lambda A: is_tp_gp(A),
              "fekete": lambda A: is_tpr_fekete(A, r or min(A.shape)),
              "mixed": lambda A: is_tpr_mixed(A, r or min(A.shape))}[name]
        got = fn(M)
    else:
        raise CatalogError(f"unknown quantity {q!r}")
    expected = _expected_value(claim["expected"], ctx.params)
    return got == expected, got, expected


def _nonneg(v) -> bool:
    return v.is_coefficientwise_nonnegative() if isinstance(v, Poly) else v >= 0


def _claim_classification(ctx: _Context, claim: dict):
    M = ctx.expr(claim["of"])
    if "at_x" in claim:
        x = parse_rational(claim["at_x"])
        M = M.map(lambda v: v(x) if isinstance(v, Poly) else v)
    r = claim.get("order")
    if "power" in claim:
        c = classify_power(M, parse_rational(claim["power"]), r)
    else:
        c = classify(M, claim.get("method", "auto"), r)
    got = {"tp_order": c.tp_order, "tn_order": c.tn_order}
    expected = {k: claim[k] for k in ("tp_order", "tn_order") if k in claim}
    ok = all(got[k] == v for k, v in expected.items())
    if "tn_witness_value" in claim:
        w = c.tn_witness.value if c.tn_witness else None
        got["tn_witness_value"] = _fmt(w)
        expected["tn_witness_value"] = claim["tn_witness_value"]
        ok &= w == parse_rational(claim["tn_witness_value"])
    if "tn_witness_noncontiguous" in claim:
        w = c.tn_witness
        nc = w is not None and not (_is_interval(w.rows) and _is_interval(w.cols))
        got["tn_witness_noncontiguous"] = nc
        expected["tn_witness_noncontiguous"] = claim["tn_witness_noncontiguous"]
        ok &= nc == claim["tn_witness_noncontiguous"]
    return ok, got, expected


def _is_interval(idx) -> bool:
    return all(b == a + 1 for a, b in zip(idx, idx[1:]))


def _claim_sign(ctx: _Context, claim: dict):
    M = ctx.expr(claim["of"])
    var = claim.get("variable", "t")
    got, expected = [], []
    if var == "t":
        f = minor_exppoly(M, claim.get("rows"), claim.get("cols")) if "rows" in claim else minor_exppoly(M)
        for s in claim["samples"]:
            got.append(sign_at(f, parse_rational(s["at"])).sign)
            expected.append(s["sign"])
    elif var == "x":
        d = det(_minor_block(M, claim))
        for s in claim["samples"]:
            v = d(parse_rational(s["at"])) if isinstance(d, Poly) else d
            got.append((v > 0) - (v < 0))
            expected.append(s["sign"])
    else:
        raise CatalogError(f"unknown variable {var!r}")
    return got == expected, got, expected


def _claim_series(ctx: _Context, claim: dict):
    M = _minor_block(ctx.expr(claim["of"]), claim)
    d = det(hadamard_power_series(M, int(claim["order"])))
    got = d.coeff(int(claim["power"]))
    expected = _expected_value(claim["expected"], ctx.params)
    return got == expected, str(got), str(expected)


def _claim_formula(ctx: _Context, claim: dict):
    kind = claim["formula"]
    if kind == "appendix_b":
        u = [evaluate_expression(v, ctx.params) for v in claim["u"]]
        formula, oracle = appendix_b_formula(u), appendix_b_oracle(u)
        ok = formula == oracle
        if "expected" in claim:
            exp = (_expected_value(claim["expected"]["coefficient"], ctx.params), claim["expected"]["exponent"])
            ok &= formula == exp
        return ok, {"coefficient": str(oracle[0]), "exponent": oracle[1]}, {
            "coefficient": str(formula[0]), "exponent": formula[1]}
    M = ctx.expr(claim["of"])
    f = minor_exppoly(M, claim["rows"], claim["cols"]) if "rows" in claim else minor_exppoly(M)
    if kind == "exppoly":
        expected = ExpPoly((parse_rational(d["base"]), parse_rational(d["coeff"])) for d in claim["expected"])
        return f == expected, str(f), str(expected)
    if kind == "laguerre_bound":
        got = laguerre_bound(f)[0]
        return got == claim["expected"], got, claim["expected"]
    if kind == "roots":
        lo, hi = (parse_rational(v) for v in claim["interval"])
        rep = count_roots_certified(f, lo, hi, claim.get("grid", 64))
        got = [{"at": format_rational(r.lo), "multiplicity": r.multiplicity} for r in rep.roots if r.exact]
        got_all = {"exact_roots": got, "isolated": len(rep.roots), "complete": rep.complete}
        exp = {"exact_roots": claim["expected"], "isolated": len(claim["expected"]), "complete": True}
        return got_all == exp, got_all, exp
    raise CatalogError(f"unknown formula {kind!r}")


_HANDLERS = {
    "ExactValue": _claim_exact_value,
    "ClassificationIs": _claim_classification,
    "SignOnInterval": _claim_sign,
    "SeriesCoefficient": _claim_series,
    "FormulaMatch": _claim_formula,
}


@dataclass(frozen=True)
class ClaimResult:
    label: str
    kind: str
    passed: bool
    computed: Any
    expected: Any
    params: dict
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "passed": self.passed,
            "computed": _jsonable(self.computed),
            "expected": _jsonable(self.expected),
            "params": self.params,
            "error": self.error,
        }


def _jsonable(v):
    if isinstance(v, (Fraction, Poly, Matrix)):
        return _fmt(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True)
class CaseReport:
    case_id: str
    anchor: str
    params: dict
    claims: tuple[ClaimResult, ...]

    @property
    def failures(self) -> int:
        return sum(not c.passed for c in self.claims)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "id": self.case_id,
            "anchor": self.anchor,
            "params": self.params,
            "passed": self.passed,
            "failures": self.failures,
            "claims": [c.to_dict() for c in self.claims],
        }

    def table(self) -> str:
        lines = [f"{self.case_id}: {self.anchor}"]
        if self.params:
            lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in self.params.items()))
        for c in self.claims:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.label}: {_short(c.computed)}")
            if not c.passed:
                lines.append(f"         expected {_short(c.expected)}" + (f" ({c.error})" if c.error else ""))
        return "\n".join(lines)


def _short(v) -> str:
    text = json.dumps(_jsonable(v)) if not isinstance(v, str) else v
    return text if len(text) <= 160 else text[:157] + "..."


@dataclass(frozen=True)
class SuiteReport:
    cases: tuple[CaseReport, ...]

    @property
    def failures(self) -> int:
        return sum(c.failures for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "cases": [c.to_dict() for c in self.cases],
            "claims": sum(len(c.claims) for c in self.cases),
            "failures": self.failures,
        }

    def table(self) -> str:
        body = "\n".join(c.table() for c in self.cases)
        total = sum(len(c.claims) for c in self.cases)
        return f"{body}\n{total - self.failures}/{total} claims passed"


def _resolve_params(case: dict, overrides: Mapping[str, Any] | None) -> dict[str, Fraction]:
    params = {k: parse_rational(v) for k, v in case.get("params", {}).items()}
    for k, v in (overrides or {}).items():
        if k not in params:
            raise CatalogError(f"case {case['id']!r} has no parameter {k!r}")
        try:
            params[k] = as_fraction(v)
        except (TypeError, ValueError) as exc:
            raise CatalogError(f"invalid override {k}={v!r}") from exc
    return params


def run_case(case_id: str, overrides: Mapping[str, Any] | None = None, *, case: dict | None = None) -> CaseReport:
    """Evaluate every claim of a registered case.

    ``case`` substitutes an in-memory case definition (used for negative
    controls); otherwise the registry entry for ``case_id`` is used.
    """
    case = load_case(case_id) if case is None else {"id": case_id, **case}
    base = _resolve_params(case, overrides)
    results = []
    for claim in case["claims"]:
        params = dict(base)
        params.update({k: parse_rational(v) for k, v in claim.get("params", {}).items()})
        ctx = _Context(case, params)
        handler = _HANDLERS.get(claim["kind"])
        label = claim.get("label", claim["kind"])
        shown = {k: format_rational(v) for k, v in params.items()}
        if handler is None:
            results.append(ClaimResult(label, claim["kind"], False, None, None, shown, "unknown claim kind"))
            continue
        try:
            ok, got, exp = handler(ctx, claim)
            results.append(ClaimResult(label, claim["kind"], bool(ok), got, exp, shown))
        except (ArithmeticError, ValueError, KeyError, TypeError) as exc:
            results.append(ClaimResult(label, claim["kind"], False, None, None, shown, f"{type(exc).__name__}: {exc}"))
    return CaseReport(case_id, case.get("anchor", ""), {k: format_rational(v) for k, v in base.items()}, tuple(results))


def run_all() -> SuiteReport:
    return SuiteReport(tuple(run_case(cid) for cid in case_ids()))
