"""Seeded property suite.

Each property is a function ``(rng, config, classifier) -> str | None`` returning a
failure message or ``None``.  Iteration ``i`` of property ``p`` under seed
``s`` draws from ``numpy.random.default_rng([s, index(p), i])``, so a
failure is reproduced from the ``(seed, iteration)`` pair in the report.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import permutations
from typing import Callable, Optional

import numpy as np

from .classify import (
    classify_brute,
    classify_hankel,
    is_additive_core,
    is_tp_gp,
    is_tpr_fekete,
    is_tpr_mixed,
    perturb_to_tp,
)
from .exact import Poly, series_power
from .exppoly import ExpPoly, count_roots_certified, laguerre_bound, minor_exppoly
from .generators import (
    random_hankel,
    random_matrix,
    random_moment_hankel,
    random_positive,
    random_rational,
    random_rectangular,
    random_symmetric_tn,
    random_tn,
    random_tn2,
    random_tridiagonal_tn,
)
from .hadamard import (
    check_power_closure,
    check_product_closure,
    check_sum_closure,
    check_tn2_product,
    hadamard_power_int,
)
from .matrix import Matrix, det, det_cofactor
from .moments import random_measure, shifted_hankel, stieltjes_strict_check

__all__ = [
    "HarnessConfig",
    "PropertyResult",
    "SuiteReport",
    "PROPERTIES",
    "leibniz_det",
    "behavioural_additive_core",
    "core_breaker",
    "run_property",
    "run_property_suite",
]


@dataclass(frozen=True)
class HarnessConfig:
    seeds: tuple[int, ...] = (20240601,)
    max_size: int = 5
    iterations: int = 100
    bits: int = 4096
    core_trials: int = 20
    iteration_overrides: dict = field(default_factory=dict)
    properties: tuple[str, ...] | None = None

    def replace(self, **kw) -> "HarnessConfig":
        return dataclasses.replace(self, **kw)

    def iterations_for(self, name: str) -> int:
        return int(self.iteration_overrides.get(name, self.iterations))

    def to_json(self) -> dict:
        out = dataclasses.asdict(self)
        out["seeds"] = list(self.seeds)
        out["properties"] = list(self.properties) if self.properties is not None else None
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HarnessConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown harness config keys {sorted(unknown)}")
        data = dict(data)
        data["seeds"] = tuple(int(s) for s in data.get("seeds", cls.seeds))
        if data.get("properties") is not None:
            data["properties"] = tuple(data["properties"])
        return cls(**data)

    @classmethod
    def load(cls, path) -> "HarnessConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    @classmethod
    def load_default(cls) -> "HarnessConfig":
        text = resources.files("totalpos").joinpath("data").joinpath("harness_config.json").read_text(encoding="utf-8")
        return cls.from_json(json.loads(text))


# -- oracles ----------------------------------------------------------------------


def leibniz_det(A: Matrix) -> Fraction:
    """Sum over permutations; independent of the elimination code."""
    n = A.n
    total = Fraction(0)
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = Fraction(1)
        for i in range(n):
            term *= A.rows[i][p[i]]
            if not term:
                break
        total += -term if inv % 2 else term
    return total


def _is_tn(A: Matrix, classifier) -> bool:
    return classifier(A).is_tn


def core_breaker(A: Matrix) -> Optional[Matrix]:
    """A TN ``B`` with ``A + B`` not TN, when ``A`` has a positive off-corner entry.

    ``B`` has a single entry ``lam`` diagonally adjacent to that entry, large
    enough to make a 2x2 minor of ``A + B`` negative.
    """
    m, n = A.shape
    for i in range(m):
        for j in range(n):
            a = A.rows[i][j]
            if (i, j) in ((0, 0), (m - 1, n - 1)) or a <= 0:
                continue
            if i > 0 and j < n - 1:
                r, c = i - 1, j + 1
                d = A.rows[i - 1][j] * A.rows[i][j + 1] - A.rows[i - 1][j + 1] * a
            else:
                r, c = i + 1, j - 1
                d = A.rows[i][j - 1] * A.rows[i + 1][j] - a * A.rows[i + 1][j - 1]
            lam = abs(d) / a + 1
            rows = [[Fraction(0)] * n for _ in range(m)]
            rows[r][c] = lam
            return Matrix(rows)
    return None


def behavioural_additive_core(A: Matrix, rng: np.random.Generator, trials: int = 20, classifier=classify_brute) -> bool:
    """Whether ``A + B`` stays TN for ``B = 0``, ``trials`` random TN ``B`` and the constructed breaker."""
    m, n = A.shape
    zero = Matrix([[0] * n for _ in range(m)])
    candidates = [zero]
    N = max(m, n)
    for _ in range(trials):
        B = random_tn(N, rng)
        candidates.append(Matrix([row[:n] for row in B.rows[:m]]))
    breaker = core_breaker(A)
    if breaker is not None:
        candidates.append(breaker)
    return all(_is_tn(A + B, classifier) for B in candidates)


# -- properties -----------------------------------------------------------------


def _show(A: Matrix) -> str:
    return json.dumps(A.to_json()["entries"])


def _size(rng, config, lo=2, hi=None) -> int:
    hi = config.max_size if hi is None else min(hi, config.max_size)
    lo = min(lo, hi)
    return int(rng.integers(lo, hi + 1))


def prop_poly_ring(rng, config, classifier):
    def rp():
        return Poly([random_rational(rng, -3, 3) for _ in range(int(rng.integers(0, 5)))])

    p, q, r = rp(), rp(), rp()
    if p * (q + r) != p * q + p * r:
        return f"distributivity fails for {p}, {q}, {r}"
    if not q.is_zero():
        quo, rem = p.divmod(q)
        if quo * q + rem != p or (not rem.is_zero() and rem.degree >= q.degree):
            return f"divmod({p}, {q}) inconsistent"
    x = random_rational(rng, -2, 2)
    if (p * q)(x) != p(x) * q(x):
        return f"evaluation is not a ring map at {x}"
    return None


def prop_series_integer_t(rng, config, classifier):
    p = Poly([1] + [random_rational(rng, -2, 3) for _ in range(int(rng.integers(1, 3)))])
    N = int(rng.integers(1, 6))
    k = int(rng.integers(0, 5))
    s = series_power(p, N)
    if s.substitute_t(k) != (p**k).truncate(N):
        return f"(1 + ...)^t at t={k} disagrees with p^{k} for p={p}"
    return None


def prop_det_oracle(rng, config, classifier):
    n = _size(rng, config, 1)
    A = random_matrix(n, n, rng, -3, 3)
    d = det(A)
    if d != leibniz_det(A) or d != det_cofactor(A):
        return f"det mismatch on {_show(A)}"
    B = random_matrix(n, n, rng, -2, 2)
    if det(A @ B) != d * det(B):
        return "det is not multiplicative"
    return None


def prop_transpose(rng, config, classifier):
    A = random_rectangular(rng, config.max_size)
    if classifier(A).orders() != classifier(A.T).orders():
        return f"classification not transpose invariant for {_show(A)}"
    return None


def prop_criteria(rng, config, classifier):
    A = random_rectangular(rng, config.max_size)
    c = classifier(A)
    if is_tp_gp(A) != c.is_tp:
        return f"initial-minor test disagrees with brute force ({c.orders()}) on {_show(A)}"
    for r in range(1, c.cap + 1):
        if is_tpr_fekete(A, r) != c.is_tp_r(r):
            return f"contiguous test at r={r} disagrees with brute force on {_show(A)}"
        if is_tpr_mixed(A, r) != c.is_tp_r(r):
            return f"mixed test at r={r} disagrees with brute force on {_show(A)}"
    return None


def prop_hankel_classify(rng, config, classifier):
    n = _size(rng, config, 1)
    H = random_hankel(n, rng)
    a, b = classify_hankel(H).orders(), classifier(H).orders()
    if a != b:
        return f"principal-minor orders {a} != brute force {b} on {_show(H)}"
    return None


def _hankel_pair(rng, config):
    n = _size(rng, config)
    return random_hankel(n, rng), random_hankel(n, rng)


def _order_for(A, B, classifier) -> int:
    return max(1, min(classifier(A).tn_order, classifier(B).tn_order))


def prop_hankel_sum(rng, config, classifier):
    A, B = _hankel_pair(rng, config)
    r = _order_for(A, B, classifier)
    rep = check_sum_closure(A, B, r)
    if rep.violation:
        return f"Hankel sum closure violated at r={r}: {_show(A)} + {_show(B)}"
    return None


def prop_hankel_product(rng, config, classifier):
    A, B = _hankel_pair(rng, config)
    r = _order_for(A, B, classifier)
    rep = check_product_closure(A, B, r)
    if rep.violation:
        return f"Hankel product closure violated at r={r}: {_show(A)} o {_show(B)}"
    return None


def prop_tn2_product(rng, config, classifier):
    m, n = _size(rng, config), _size(rng, config)
    A, B = random_tn2(m, n, rng), random_tn2(m, n, rng)
    if rng.random() < 0.3:
        B = Matrix([[v * (1 + i) for i, v in enumerate(row)] for row in B.rows])
    rep = check_tn2_product(A, B)
    if "tn2_product" not in rep.applicable:
        return "generator produced a non-TN_2 matrix"
    if rep.violation:
        return f"TN_2 product closure violated: {_show(A)} o {_show(B)}"
    return None


def prop_symmetric3_product(rng, config, classifier):
    # symmetric TN from L D L^T, or symmetric TP from 3+ atom moment sequences
    gen = (lambda g: random_symmetric_tn(3, g)) if rng.random() < 0.7 else _sym_tp
    A, B = gen(rng), gen(rng)
    rep = check_product_closure(A, B)
    if not any(x.startswith("symmetric3") for x in rep.applicable):
        return "generator produced a non-TN symmetric matrix"
    if rep.violation:
        return f"3x3 symmetric product closure violated: {_show(A)} o {_show(B)}"
    return None


def _sym_tp(rng) -> Matrix:
    return shifted_hankel(random_measure(3 + int(rng.integers(0, 2)), rng), 3)


def prop_tridiagonal_product(rng, config, classifier):
    n = _size(rng, config)
    A = random_tridiagonal_tn(n, rng)
    B = random_tn(n, rng)
    rep = check_product_closure(A, B)
    if "tridiagonal_product_tn" not in rep.applicable:
        return "generator produced a non-TN matrix"
    if rep.violation:
        return f"tridiagonal product closure violated: {_show(A)} o {_show(B)}"
    return None


def _random_core_candidate(rng, config) -> Matrix:
    m, n = _size(rng, config), _size(rng, config)
    rows = [[Fraction(0)] * n for _ in range(m)]
    rows[0][0] = random_rational(rng, 0, 3)
    rows[-1][-1] = random_rational(rng, 0, 3)
    kind = int(rng.integers(0, 3))
    if kind == 1:
        i, j = int(rng.integers(0, m)), int(rng.integers(0, n))
        if (i, j) not in ((0, 0), (m - 1, n - 1)):
            rows[i][j] = random_rational(rng, -2, 2) or Fraction(1, 2)
    elif kind == 2:
        corner = (0, 0) if rng.random() < 0.5 else (m - 1, n - 1)
        rows[corner[0]][corner[1]] = -random_rational(rng, 1, 2)
    return Matrix(rows)


def prop_additive_core(rng, config, classifier):
    A = _random_core_candidate(rng, config)
    structural = is_additive_core(A)
    behavioural = behavioural_additive_core(A, rng, config.core_trials, classifier)
    if structural != behavioural:
        return f"additive core: structural {structural}, behavioural {behavioural} for {_show(A)}"
    return None


def prop_power_closure(rng, config, classifier):
    n = _size(rng, config, 2, 4)
    A = random_moment_hankel(n, rng) if rng.random() < 0.6 else random_tn2(n, n, rng)
    if any(v <= 0 for v in A.entries()):
        return None
    r = n
    base = max(r - 2, 0)
    t = Fraction(base) + random_rational(rng, 0, 2, 4)
    if t <= 0:
        t = Fraction(1, 4)
    rep = check_power_closure(A, t, r, max_bits=config.bits)
    if rep.violation:
        return f"power closure violated at t={t}: {_show(A)} ({rep.applicable})"
    return None


def prop_moment_hankel(rng, config, classifier):
    n = _size(rng, config, 1)
    atoms = int(rng.integers(1, n + 2))
    mu = random_measure(atoms, rng)
    H = shifted_hankel(mu, n)
    c = classifier(H)
    if not c.is_tn:
        return f"moment Hankel not TN for {mu.to_json()}"
    if c.tp_order != min(n, atoms):
        return f"moment Hankel tp_order {c.tp_order}, expected {min(n, atoms)}"
    rep = stieltjes_strict_check(mu, n)
    if rep.strict != c.is_tp:
        return "strict Stieltjes check disagrees with brute force"
    return None


def prop_perturbation(rng, config, classifier):
    n = _size(rng, config, 1)
    H = random_hankel(n, rng)
    r = classifier(H).tn_order
    if r == 0:
        return None
    eps = Fraction(1, int(rng.integers(1, 1000)))
    P = perturb_to_tp(H, eps)
    if not classifier(P).is_tp_r(r):
        return f"TN_{r} Hankel + eps*H_fact is not TP_{r} (eps={eps})"
    return None


def prop_exppoly_integer(rng, config, classifier):
    n = _size(rng, config, 1, 4)
    A = random_positive(n, n, rng)
    f = minor_exppoly(A)
    k = int(rng.integers(0, 4))
    if f.eval_exact(k) != det(hadamard_power_int(A, k) if k else A.map(lambda v: Fraction(1))):
        return f"exponential polynomial at t={k} disagrees with det(A^{k})"
    return None


def prop_laguerre(rng, config, classifier):
    size = int(rng.integers(2, 5))
    bases = rng.choice(np.arange(1, 12), size=size, replace=False)
    f = ExpPoly((Fraction(int(b)), random_rational(rng, -3, 3) or Fraction(1)) for b in bases)
    if f.is_zero():
        return None
    bound, _ = laguerre_bound(f)
    rep = count_roots_certified(f, -4, 4, grid=16, tol=Fraction(1, 2**16), max_bits=config.bits)
    found = sum(r.multiplicity for r in rep.roots)
    if found > bound:
        return f"found {found} roots of {f}, more than the sign-change bound {bound}"
    if rep.complete and (found - bound) % 2:
        return "parity mismatch"
    return None


PROPERTIES: dict[str, Callable] = {
    "poly_ring": prop_poly_ring,
    "series_integer_t": prop_series_integer_t,
    "det_oracle": prop_det_oracle,
    "classify_transpose": prop_transpose,
    "criteria_vs_brute": prop_criteria,
    "hankel_vs_brute": prop_hankel_classify,
    "hankel_sum_closure": prop_hankel_sum,
    "hankel_product_closure": prop_hankel_product,
    "tn2_product_closure": prop_tn2_product,
    "symmetric3_product_closure": prop_symmetric3_product,
    "tridiagonal_product_closure": prop_tridiagonal_product,
    "additive_core": prop_additive_core,
    "power_closure": prop_power_closure,
    "moment_hankel": prop_moment_hankel,
    "perturbation_tp": prop_perturbation,
    "exppoly_integer_t": prop_exppoly_integer,
    "laguerre_bound": prop_laguerre,
}


# -- running ---------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyResult:
    name: str
    iterations: int
    failures: int
    first_failure: Optional[dict]
    seconds: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "iterations": self.iterations,
            "passed": self.passed,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "seconds": round(self.seconds, 3),
        }


@dataclass(frozen=True)
class SuiteReport:
    config: HarnessConfig
    results: tuple[PropertyResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "harness_config": self.config.to_json(),
            "passed": self.passed,
            "properties": [r.to_dict() for r in self.results],
        }

    def table(self) -> str:
        lines = []
        for r in self.results:
            mark = "PASS" if r.passed else "FAIL"
            line = f"[{mark}] {r.name:<28} {r.iterations:>5} iterations  {r.seconds:7.2f}s"
            if r.first_failure:
                f = r.first_failure
                line += f"\n       seed {f['seed']} iteration {f['iteration']}: {f['message']}"
            lines.append(line)
        lines.append("all properties pass" if self.passed else "FAILURES")
        return "\n".join(lines)


def run_property(name: str, config: HarnessConfig, classifier=classify_brute) -> PropertyResult:
    fn = PROPERTIES[name]
    index = list(PROPERTIES).index(name)
    iterations = config.iterations_for(name)
    failures, first = 0, None
    start = time.perf_counter()
    for seed in config.seeds:
        for i in range(iterations):
            rng = np.random.default_rng([seed, index, i])
            try:
                msg = fn(rng, config, classifier)
            except Exception as exc:  # reported with the seed, not raised
                msg = f"{type(exc).__name__}: {exc}"
            if msg is not None:
                failures += 1
                if first is None:
                    first = {"seed": seed, "iteration": i, "message": msg}
    return PropertyResult(name, iterations * len(config.seeds), failures, first, time.perf_counter() - start)


def run_property_suite(config: HarnessConfig | None = None, classifier=classify_brute) -> SuiteReport:
    """Run every property (or ``config.properties``) and aggregate.

    ``classifier`` is the brute-force oracle the properties compare against;
    tests substitute a corrupted one as a negative control.
    """
    config = HarnessConfig.load_default() if config is None else config
    names = list(PROPERTIES) if config.properties is None else list(config.properties)
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise ValueError(f"unknown properties {unknown}")
    return SuiteReport(config, tuple(run_property(n, config, classifier) for n in names))

