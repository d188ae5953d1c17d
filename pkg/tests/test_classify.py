from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from totalpos.catalog import case_matrix
from totalpos.classify import (
    Criterion,
    NotHankelError,
    classify,
    classify_brute,
    classify_hankel,
    contiguous_index_pairs,
    factorial_hankel,
    fekete_failure,
    gp_failure,
    initial_index_pairs,
    is_additive_core,
    is_tp_gp,
    is_tpr_fekete,
    is_tpr_mixed,
    mixed_failure,
    perturb_to_tp,
)
from totalpos.generators import random_hankel, random_rectangular, random_tn, random_tp
from totalpos.harness import behavioural_additive_core, core_breaker, leibniz_det
from totalpos.matrix import Matrix, corner_matrix, hankel_from, identity, ones, submatrix


def naive_orders(A: Matrix) -> tuple[int, int]:
    """Largest k with every minor of size <= k positive / nonnegative."""
    tp = tn = None
    for k in range(1, min(A.shape) + 1):
        vals = [leibniz_det(submatrix(A, I, J)) for I in combinations(range(1, A.m + 1), k)
                for J in combinations(range(1, A.n + 1), k)]
        if tp is None and min(vals) <= 0:
            tp = k - 1
        if tn is None and min(vals) < 0:
            tn = k - 1
    cap = min(A.shape)
    return (cap if tp is None else tp), (cap if tn is None else tn)


entries = st.integers(-2, 6).map(Fraction)


@st.composite
def matrices(draw, max_n=4):
    m, n = draw(st.integers(1, max_n)), draw(st.integers(1, max_n))
    return Matrix(draw(st.lists(st.lists(entries, min_size=n, max_size=n), min_size=m, max_size=m)))


class TestBrute:
    @settings(max_examples=120)
    @given(matrices())
    def test_matches_naive_oracle(self, A):
        assert classify_brute(A).orders() == naive_orders(A)

    def test_identity(self):
        c = classify_brute(identity(4))
        assert c.orders() == (0, 4)
        assert c.is_tn and not c.is_tp
        w = c.tp_witness
        assert (w.rows, w.cols, w.value) == ((1,), (2,), 0)

    def test_all_ones(self):
        assert classify_brute(ones(3)).orders() == (1, 3)

    def test_witness_is_lexicographically_first(self):
        A = Matrix([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
        c = classify_brute(A)
        assert c.tn_order == 2
        assert (c.tn_witness.rows, c.tn_witness.cols, c.tn_witness.value) == ((1, 2, 3), (1, 2, 3), -1)

    def test_order_cap(self):
        A = Matrix([[1, 1, 0], [1, 1, 1], [0, 1, 1]])
        c = classify_brute(A, r=2)
        assert c.tn_order == 2 and c.is_tn_r(2)

    def test_to_dict(self):
        d = classify_brute(identity(2)).to_dict()
        assert d["tp_order"] == 0 and d["tn_order"] == 2 and d["tn_witness"] is None
        assert d["tp_witness"]["value"] == "0"

    def test_cryer_a_fails_on_noncontiguous_minor(self):
        A = case_matrix("cryer_a")
        c = classify_brute(A)
        assert c.tn_order == 1
        assert c.tn_witness.value == -1
        for k in (1, 2, 3):
            for I, J in contiguous_index_pairs(3, 3, k):
                assert leibniz_det(submatrix(A, I, J)) >= 0


class TestCriteria:
    def test_initial_pairs_count_and_corners(self):
        pairs = list(initial_index_pairs(3, 4))
        assert len(pairs) == 12
        corners = {(I[-1], J[-1]) for I, J in pairs}
        assert corners == {(i, j) for i in range(1, 4) for j in range(1, 5)}
        assert all(I[0] == 1 or J[0] == 1 for I, J in pairs)

    def test_tp_matrix_passes_all(self):
        A = Matrix([[1, 1, 1], [1, 2, 4], [1, 3, 9]])  # Vandermonde, increasing nodes
        assert is_tp_gp(A)
        assert is_tpr_fekete(A, 3) and is_tpr_mixed(A, 3)
        assert classify_brute(A).is_tp

    def test_cryer_a_reports_first_initial_failure(self):
        A = case_matrix("cryer_a")
        w = gp_failure(A)
        assert w is not None and w.value <= 0

    def test_order_validation(self):
        with pytest.raises(ValueError):
            is_tpr_fekete(identity(2), 3)
        with pytest.raises(ValueError):
            mixed_failure(identity(2), 0)

    def test_classify_refuses_one_sided_criteria(self):
        with pytest.raises(ValueError):
            classify(identity(2), Criterion.GP_INITIAL)

    def test_tn_not_certified_by_strict_criteria(self):
        assert not is_tp_gp(identity(3))
        assert fekete_failure(identity(3), 1) is not None

    @pytest.mark.parametrize("seed", range(40))
    def test_equivalent_to_brute(self, seed):
        rng = np.random.default_rng(seed)
        A = random_rectangular(rng, 5)
        c = classify_brute(A)
        assert is_tp_gp(A) == c.is_tp
        for r in range(1, c.cap + 1):
            assert is_tpr_fekete(A, r) == c.is_tp_r(r)
            assert is_tpr_mixed(A, r) == c.is_tp_r(r)


class TestHankel:
    def test_requires_hankel(self):
        with pytest.raises(NotHankelError):
            classify_hankel(Matrix([[1, 2], [3, 4]]))
        with pytest.raises(NotHankelError):
            classify(Matrix([[1, 2], [3, 4]]), "hankel")

    def test_auto_dispatch(self):
        H = factorial_hankel(3)
        assert classify(H).orders() == classify_brute(H).orders() == (3, 3)
        assert classify(Matrix([[1, 2], [3, 4]])).orders() == classify_brute(Matrix([[1, 2], [3, 4]])).orders()

    def test_corner_matrix(self):
        C = corner_matrix(3)
        assert classify_hankel(C).orders() == classify_brute(C).orders() == (0, 0)

    def test_witness_in_original_coordinates(self):
        # fails only in A': the 2x2 minor on rows {1,2}, cols {2,3}
        H = hankel_from([Fraction(v) for v in (1, 1, 1, 2, 1)], 3)
        c = classify_hankel(H)
        b = classify_brute(H)
        assert c.orders() == b.orders()
        w = c.tn_witness
        assert leibniz_det(submatrix(H, w.rows, w.cols)) == w.value < 0

    @pytest.mark.parametrize("seed", range(60))
    def test_equivalent_to_brute(self, seed):
        rng = np.random.default_rng(1000 + seed)
        H = random_hankel(int(rng.integers(1, 6)), rng)
        assert classify_hankel(H).orders() == classify_brute(H).orders()

    @settings(max_examples=80)
    @given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.lists(entries, min_size=2 * n - 1, max_size=2 * n - 1))))
    def test_equivalent_to_naive(self, data):
        n, seq = data
        H = hankel_from(seq, n)
        assert classify_hankel(H).orders() == naive_orders(H)


class TestAdditiveCore:
    def test_structure(self):
        assert is_additive_core(Matrix([[2, 0], [0, 3]]))
        assert is_additive_core(Matrix([[0, 0, 0], [0, 0, 1]]))
        assert not is_additive_core(Matrix([[1, 1], [0, 1]]))
        assert not is_additive_core(Matrix([[-1, 0], [0, 1]]))

    def test_breaker_breaks(self):
        A = Matrix([[1, 0, 0], [0, 2, 0], [0, 0, 1]])
        B = core_breaker(A)
        assert classify_brute(B).is_tn
        assert not classify_brute(A + B).is_tn

    @pytest.mark.parametrize("seed", range(10))
    def test_behavioural_equivalence(self, seed):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        rows = [[Fraction(0)] * n for _ in range(m)]
        rows[0][0], rows[-1][-1] = Fraction(int(rng.integers(0, 3))), Fraction(int(rng.integers(0, 3)))
        if seed % 2:
            i, j = int(rng.integers(0, m)), int(rng.integers(0, n))
            if (i, j) not in ((0, 0), (m - 1, n - 1)):
                rows[i][j] = Fraction(1)
        A = Matrix(rows)
        assert is_additive_core(A) == behavioural_additive_core(A, rng, 20)

    def test_random_tn_sums_with_core(self):
        rng = np.random.default_rng(7)
        core = Matrix([[3, 0, 0], [0, 0, 0], [0, 0, 5]])
        for _ in range(20):
            assert classify_brute(core + random_tn(3, rng)).is_tn


class TestPerturbation:
    def test_factorial_hankel_is_tp(self):
        for n in range(1, 6):
            assert classify_hankel(factorial_hankel(n)).is_tp

    def test_tn_hankel_becomes_tp(self):
        J = ones(3)
        assert classify_brute(J).tp_order == 1
        assert classify_brute(perturb_to_tp(J, Fraction(1, 1000))).is_tp

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            perturb_to_tp(ones(2), 0)
        with pytest.raises(NotHankelError):
            perturb_to_tp(Matrix([[1, 2], [3, 4]]), 1)

    def test_tp_generators(self):
        rng = np.random.default_rng(3)
        for n in range(1, 6):
            assert classify_brute(random_tp(n, rng)).is_tp
