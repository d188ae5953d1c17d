import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from totalpos.exact import Poly, TSeries, series_power
from totalpos.harness import leibniz_det
from totalpos.matrix import (
    DimensionError,
    Matrix,
    UnsupportedStructure,
    corner_matrix,
    det,
    det_cofactor,
    hankel_from,
    hankel_sequence,
    identity,
    index_sets,
    is_contiguous,
    is_hankel,
    is_initial,
    minor,
    ones,
    submatrix,
)

small = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def square(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    return Matrix(draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))


class TestConstruction:
    def test_accepts_numpy_and_strings(self):
        A = Matrix(np.array([[1, 2], [3, 4]]))
        assert A == Matrix([["1", "2"], ["3", "4"]])
        assert A.shape == (2, 2)
        assert A[1, 0] == 3

    def test_rejects_floats_and_ragged(self):
        with pytest.raises(TypeError):
            Matrix([[0.5]])
        with pytest.raises(DimensionError):
            Matrix([[1, 2], [3]])
        with pytest.raises(DimensionError):
            Matrix([])

    def test_immutable(self):
        A = identity(2)
        with pytest.raises(AttributeError):
            A.rows = ()

    def test_json_round_trip_with_polys(self):
        A = Matrix([[1, Poly([1, 3])], [Fraction(2, 3), Poly([0, 0, -1])]])
        assert Matrix.from_json(json.loads(json.dumps(A.to_json()))) == A

    def test_json_declared_shape_checked(self):
        with pytest.raises(DimensionError):
            Matrix.from_json({"rows": 3, "cols": 2, "entries": [["1", "2"], ["3", "4"]]})

    def test_json_rejects_floats(self):
        with pytest.raises(ValueError):
            Matrix.from_json({"entries": [[0.5]]})

    def test_text_format(self, tmp_path):
        p = tmp_path / "a.txt"
        p.write_text("# comment\n1 2/3\n-4 5  # trailing\n")
        assert Matrix.load(p) == Matrix([[1, Fraction(2, 3)], [-4, 5]])

    def test_algebra(self):
        A = Matrix([[1, 2], [3, 4]])
        assert A + identity(2) == Matrix([[2, 2], [3, 5]])
        assert A @ identity(2) == A
        assert A.T == Matrix([[1, 3], [2, 4]])
        assert A * Fraction(1, 2) == Matrix([[Fraction(1, 2), 1], [Fraction(3, 2), 2]])
        with pytest.raises(DimensionError):
            A + ones(2, 3)


class TestIndexSets:
    def test_lexicographic(self):
        assert list(index_sets(4, 2)) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]

    def test_contiguous_and_initial(self):
        assert is_contiguous((2, 3, 4)) and not is_contiguous((1, 3))
        assert is_initial((1, 2)) and not is_initial((2, 3))

    def test_submatrix_validates(self):
        A = identity(3)
        assert submatrix(A, [1, 3], [1, 3]) == identity(2)
        with pytest.raises(ValueError):
            submatrix(A, [2, 1], [1, 2])
        with pytest.raises(IndexError):
            submatrix(A, [1, 4], [1, 2])


class TestDeterminant:
    @settings(max_examples=150)
    @given(square())
    def test_bareiss_matches_leibniz(self, A):
        assert det(A) == leibniz_det(A)
        assert det_cofactor(A) == leibniz_det(A)

    @settings(max_examples=60)
    @given(square(4), st.data())
    def test_multiplicative_and_transpose(self, A, data):
        n = A.n
        B = Matrix(data.draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
        assert det(A @ B) == det(A) * det(B)
        assert det(A.T) == det(A)

    def test_zero_pivot_column(self):
        assert det(Matrix([[0, 1, 2], [0, 3, 4], [0, 5, 6]])) == 0
        # pivot search needed, nonsingular
        assert det(Matrix([[0, 1], [1, 0]])) == -1
        assert det(Matrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])) == -1

    def test_non_square(self):
        with pytest.raises(DimensionError):
            det(ones(2, 3))

    def test_polynomial_entries(self):
        x = Poly([0, 1])
        A = Matrix([[1 + x, 1], [1, 1 + x]])
        assert det(A) == Poly([0, 2, 1])
        # oracle: evaluate then take the rational determinant
        for v in (Fraction(-2), Fraction(1, 3), Fraction(5)):
            assert det(A)(v) == det(A.map(lambda e: e(v) if isinstance(e, Poly) else e))

    def test_series_entries_use_cofactor(self):
        A = Matrix([[series_power(Poly([1, 1]), 3), series_power(Poly([1, 2]), 3)],
                    [series_power(Poly([1, 2]), 3), series_power(Poly([1, 4]), 3)]])
        d = det(A)
        assert isinstance(d, TSeries)
        # at t = 1 the series is the polynomial determinant, truncated
        assert d.substitute_t(1) == (Poly([1, 1]) * Poly([1, 4]) - Poly([1, 2]) ** 2).truncate(3)

    def test_cofactor_size_cap(self):
        with pytest.raises(UnsupportedStructure):
            det_cofactor(identity(9))

    def test_minor(self):
        A = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
        assert minor(A, [1, 3], [2, 3]) == 2 * 10 - 3 * 8


class TestHankel:
    def test_round_trip(self):
        seq = [Fraction(k * k + 1) for k in range(7)]
        H = hankel_from(seq, 4)
        assert is_hankel(H)
        assert hankel_sequence(H) == seq

    def test_not_hankel(self):
        assert not is_hankel(Matrix([[1, 2], [3, 4]]))
        with pytest.raises(ValueError):
            hankel_sequence(Matrix([[1, 2], [3, 4]]))

    def test_short_sequence(self):
        with pytest.raises(ValueError):
            hankel_from([1, 2], 2)

    @given(st.lists(small, min_size=9, max_size=9))
    def test_generated_matrices_are_hankel(self, seq):
        assert is_hankel(hankel_from(seq, 5))

    def test_corner(self):
        C = corner_matrix(3)
        assert is_hankel(C)
        assert C[0, 0] == 1 and C[2, 2] == -1
