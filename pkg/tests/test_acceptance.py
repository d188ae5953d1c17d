"""Acceptance criteria 1-7, with their runtime budgets.

Each test records a one-line PASS/FAIL verdict in ``RESULTS``; the conftest
hook prints them at the end of the session.  Run this file directly to get
the same lines without pytest.
"""

import time
from fractions import Fraction
from itertools import combinations

import pytest

from totalpos.catalog import appendix_b_formula, appendix_b_oracle, case_matrix, fh_matrix
from totalpos.classify import classify_brute
from totalpos.exact import Poly, TPoly
from totalpos.exppoly import (
    ExpPoly,
    classify_power,
    count_roots_certified,
    laguerre_bound,
    minor_exppoly,
    sign_at,
)
from totalpos.hadamard import SYMBOLIC_T, hadamard_power, hadamard_power_int, hadamard_product
from totalpos.harness import HarnessConfig, run_property
from totalpos.matrix import det, minor

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}
MAX_BITS = 4096


def record(n, budget, title):
    """Time the wrapped check, store its verdict and enforce the budget."""
    def deco(fn):
        def run():
            start = time.perf_counter()
            try:
                fn()
            except BaseException as exc:
                RESULTS[n] = f"criterion {n}: FAIL  {title} ({type(exc).__name__}: {exc})"
                raise
            took = time.perf_counter() - start
            ok = budget is None or took < budget
            limit = f" < {budget:g} s" if budget else ""
            RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title} [{took:.2f} s{limit}]"
            assert ok, f"took {took:.2f} s, budget {budget} s"
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return deco


@record(1, 5, "exact counterexample values")
def test_criterion_1_counterexamples():
    W = case_matrix("hadamard3asym", "W")
    assert det(hadamard_product(W, W.T)) == -1
    A, B = case_matrix("hadamard4sym", "A"), case_matrix("hadamard4sym", "B")
    assert minor(hadamard_product(A, B), (1, 2, 3), (2, 3, 4)) == -6
    F = case_matrix("fallat07")
    assert classify_brute(F).is_tp
    assert det(hadamard_power_int(F, 2)) == -114904113
    P = case_matrix("hadamard4asym")
    assert det(hadamard_power_int(P, 2)) == Poly([0, 0, 0, 0, -16, 248])


@record(2, 30, "symbolic Hadamard-power expansions")
def test_criterion_2_series():
    d = det(hadamard_power(case_matrix("hadamard4asym"), SYMBOLIC_T, order=4))
    assert d.coeff(4) == TPoly([0, 0, 0, 2, -2])
    assert all(d.coeff(k).is_zero() for k in range(4))
    d = det(hadamard_power(case_matrix("hadamard4asym_bis"), SYMBOLIC_T, order=4))
    assert d.coeff(4) == TPoly([0, 0, 0, 28584, -28584])
    eps = Fraction(1, 10)
    d = det(hadamard_power(case_matrix("hadamard4asym_tp", overrides={"eps": eps}), SYMBOLIC_T, order=4))
    c = (8 - 70 * eps - 59 * eps**2 - 4 * eps**3) / 4
    assert d.coeff(3) == TPoly([0, 0, 0, eps**2])
    assert d.coeff(4) == TPoly([0, 0, 0, c, -c])
    assert all(d.coeff(k).is_zero() for k in range(3))


U_VECTORS = {
    2: [(0, 1), (Fraction(1, 2), 3), (-2, Fraction(5, 3))],
    3: [(1, 2, 4), (0, Fraction(1, 3), -1), (Fraction(7, 2), 2, Fraction(-1, 4))],
    4: [(1, 2, 4, 8), (0, 1, 3, -2), (Fraction(1, 2), Fraction(2, 3), 5, -1)],
    5: [(1, 2, 4, 8, 16), (0, 1, -1, 2, 3), (Fraction(1, 3), 1, Fraction(5, 2), -2, 7)],
}


@record(3, 60, "leading coefficient formula vs series determinant")
def test_criterion_3_leading_term():
    for n, vectors in U_VECTORS.items():
        for u in vectors:
            formula, oracle = appendix_b_formula(u), appendix_b_oracle(u)
            assert formula == oracle, (n, u)
            assert formula[1] == n * (n - 1) // 2
            assert not formula[0].is_zero()


@record(4, 5, "3x3 moment Hankel exponential polynomial, roots and signs")
def test_criterion_4_moment_hankel():
    A = case_matrix("exam_jw")
    f = minor_exppoly(A)
    assert f == ExpPoly([(170, 1), (162, -1), (153, -1), (135, 2), (125, -1)])
    assert f.terms == ((125, -1), (135, 2), (153, -1), (162, -1), (170, 1))
    assert laguerre_bound(f)[0] == 3
    roots = count_roots_certified(f, -1, 3, max_bits=MAX_BITS)
    assert roots.complete
    assert [(r.lo, r.hi, r.multiplicity) for r in roots.roots] == [(0, 0, 2), (1, 1, 1)]
    for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        assert sign_at(f, t, MAX_BITS).sign == -1
    assert sign_at(f, 2, MAX_BITS).sign == 1


CLOSURE_PROPERTIES = (
    "hankel_sum_closure",
    "hankel_product_closure",
    "tn2_product_closure",
    "symmetric3_product_closure",
    "additive_core",
)


@record(5, 300, "closure theorems, 100 seeded iterations each")
def test_criterion_5_closure():
    config = HarnessConfig.load_default()
    assert config.max_size == 5 and config.core_trials == 20
    for name in CLOSURE_PROPERTIES:
        assert config.iterations_for(name) == 100
        res = run_property(name, config)
        assert res.iterations == 100 * len(config.seeds)
        assert res.passed, res.to_dict()


def quarter_points(n):
    return [Fraction(k, 4) for k in range(1, 4 * (n - 2)) if k % 4]


def negative_principal_minor(A, t):
    for k in range(2, A.m + 1):
        for I in combinations(range(1, A.m + 1), k):
            if sign_at(minor_exppoly(A, I, I), t, MAX_BITS).sign < 0:
                return I
    return None


@record(6, 120, "critical exponent of the fh family, n = 3, 4, 5")
def test_criterion_6_critical_exponent():
    eps = Fraction(1, 10**4)
    for n in (3, 4, 5):
        A = fh_matrix([2**i for i in range(n)], eps)
        for t in quarter_points(n):
            assert negative_principal_minor(A, t) is not None, (n, t)
        for t in (n - 2, n - 1, n):
            assert classify_power(A, t, max_bits=MAX_BITS).is_tn, (n, t)


@record(7, None, "criteria and Hankel test agree with brute force")
def test_criterion_7_oracles():
    config = HarnessConfig.load_default()
    res = run_property("criteria_vs_brute", config)
    assert res.iterations == 500 and res.passed, res.to_dict()
    res = run_property("hankel_vs_brute", config)
    assert res.iterations == 200 and res.passed, res.to_dict()


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for test in tests:
        try:
            test()
        except BaseException:
            pass
    for n in sorted(RESULTS):
        print(RESULTS[n])
