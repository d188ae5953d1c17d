from fractions import Fraction

import numpy as np
import pytest

from totalpos.catalog import case_matrix
from totalpos.classify import classify_brute
from totalpos.exact import Poly, TPoly
from totalpos.generators import random_moment_hankel, random_symmetric_tn, random_tn2
from totalpos.hadamard import (
    SYMBOLIC_T,
    check_power_closure,
    check_product_closure,
    check_sum_closure,
    check_tn2_product,
    hadamard_power,
    hadamard_power_int,
    hadamard_power_series,
    hadamard_product,
    is_tridiagonal,
)
from totalpos.matrix import DimensionError, Matrix, det, identity, ones


def test_product_and_power():
    A = Matrix([[1, 2], [3, 4]])
    assert hadamard_product(A, A) == hadamard_power_int(A, 2) == Matrix([[1, 4], [9, 16]])
    assert hadamard_power(A, 3) == Matrix([[1, 8], [27, 64]])
    with pytest.raises(DimensionError):
        hadamard_product(A, ones(2, 3))
    with pytest.raises(ValueError):
        hadamard_power(A, Fraction(1, 2))
    with pytest.raises(ValueError):
        hadamard_power(A, SYMBOLIC_T)


def test_series_power_specialises():
    x = Poly([0, 1])
    A = Matrix([[1 + x, 1 + 2 * x], [1 + 2 * x, 1 + 5 * x]])
    S = hadamard_power(A, SYMBOLIC_T, order=3)
    d = det(S)
    for k in range(4):
        assert d.substitute_t(k) == det(A.map(lambda p: p**k)).truncate(3)
    # first-order term of a 2x2 minor: t * (a11 + a22 - a12 - a21)
    assert d.coeff(1) == TPoly([0, 2])


def test_series_power_rejects_bad_constant():
    with pytest.raises(ValueError):
        hadamard_power_series(Matrix([[Poly([2, 1])]]), 2)


def test_tridiagonal():
    assert is_tridiagonal(Matrix([[1, 1, 0], [1, 1, 1], [0, 1, 1]]))
    assert not is_tridiagonal(ones(3))


class TestClosureReports:
    def test_w_wt_observed_failure_without_violation(self):
        W = case_matrix("hadamard3asym", "W")
        rep = check_product_closure(W, W.T)
        assert rep.a.is_tn and rep.b.is_tn
        assert rep.observed_failure and not rep.violation
        assert not any(a.startswith("hankel") for a in rep.applicable)
        assert rep.to_dict()["result"]["tn_order"] == 2

    def test_hankel_sum_and_product(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            A, B = random_moment_hankel(4, rng), random_moment_hankel(4, rng)
            s = check_sum_closure(A, B)
            p = check_product_closure(A, B)
            assert "hankel_sum_tn" in s.applicable and not s.violation
            assert "hankel_product_tn" in p.applicable and not p.violation

    def test_i_plus_j(self):
        rep = check_sum_closure(identity(3), ones(3))
        assert rep.observed_failure
        assert "hankel_sum_tn" not in rep.applicable  # identity is not Hankel

    def test_tn2(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            rep = check_tn2_product(random_tn2(3, 4, rng), random_tn2(3, 4, rng))
            assert "tn2_product" in rep.applicable and not rep.violation

    def test_symmetric3(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            rep = check_product_closure(random_symmetric_tn(3, rng), random_symmetric_tn(3, rng))
            assert "symmetric3_product_tn" in rep.applicable and not rep.violation

    def test_symmetric4_counterexample_not_covered(self):
        A, B = case_matrix("hadamard4sym", "A"), case_matrix("hadamard4sym", "B")
        rep = check_product_closure(A, B)
        assert rep.observed_failure and not rep.violation
        assert rep.applicable == ()


class TestPowerClosure:
    def test_moment_hankel_below_and_at_threshold(self):
        A = case_matrix("exam_jw")
        below = check_power_closure(A, Fraction(1, 2))
        assert below.observed_failure and not below.violation
        assert "power_hankel_tn" not in below.applicable
        at = check_power_closure(A, 1)
        assert "power_hankel_tn" in at.applicable and not at.violation

    def test_tp4_square_not_covered_for_non_symmetric(self):
        A = case_matrix("fallat07")
        rep = check_power_closure(A, 2)
        assert rep.observed_failure and not rep.violation
        assert "power_symmetric4_tn" not in rep.applicable

    def test_order_two_for_all_positive_t(self):
        A = Matrix([[1, 2, 4], [2, 5, 11], [3, 8, 19]])
        assert classify_brute(A).is_tn_r(2)
        for t in (Fraction(1, 3), Fraction(3, 2)):
            rep = check_power_closure(A, t, 2)
            assert "power_order2_tn" in rep.applicable and not rep.violation
