"""Dense matrices over exact rings, minors, and Hankel structure.

Row and column index sets are 1-based tuples in increasing order (the usual
convention for minors); Hankel sequences are 0-based, ``A[i][j] = a[i+j]``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

from .exact import Poly, TSeries, as_fraction, format_rational, parse_rational

__all__ = [
    "Matrix",
    "DimensionError",
    "UnsupportedStructure",
    "det",
    "det_cofactor",
    "submatrix",
    "minor",
    "is_contiguous",
    "is_initial",
    "index_sets",
    "is_hankel",
    "hankel_from",
    "corner_matrix",
    "identity",
    "ones",
    "zeros",
]

# Laplace expansion is O(n 2^n) with memoisation; beyond this it is refused.
MAX_COFACTOR_SIZE = 8


class DimensionError(ValueError):
    pass


class UnsupportedStructure(ValueError):
    pass


def _entry(value):
    if isinstance(value, (Poly, TSeries)):
        return value
    return as_fraction(value)


class Matrix:
    """Immutable m-by-n matrix stored row-major as a tuple of tuples.

    Entries may be ints/Fractions/rational strings (stored as Fraction),
    :class:`Poly` or :class:`TSeries`.  ``A[i, j]`` is 0-based.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        if hasattr(rows, "tolist"):
            rows = rows.tolist()
        data = tuple(tuple(_entry(v) for v in row) for row in rows)
        if not data or not data[0]:
            raise DimensionError("a matrix needs at least one row and one column")
        n = len(data[0])
        if any(len(r) != n for r in data):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def is_square(self) -> bool:
        return self.m == self.n

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.rows)

    def entries(self) -> Iterator:
        for row in self.rows:
            yield from row

    def map(self, fn: Callable) -> "Matrix":
        return Matrix([[fn(v) for v in row] for row in self.rows])

    @property
    def T(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.m) for j in range(i)
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + other.map(lambda v: -v)

    def __neg__(self) -> "Matrix":
        return self.map(lambda v: -v)

    def __mul__(self, scalar) -> "Matrix":
        if isinstance(scalar, Matrix):
            return NotImplemented
        return self.map(lambda v: v * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n != other.m:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        return Matrix(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.rows]
        )

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({[[str(v) for v in row] for row in self.rows]})"

    def __str__(self):
        cells = [[str(v) for v in row] for row in self.rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Poly):
                return {"poly": v.to_json()}
            if isinstance(v, Fraction):
                return format_rational(v)
            raise TypeError(f"cannot serialise entry of type {type(v).__name__}")

        return {"rows": self.m, "cols": self.n, "entries": [[enc(v) for v in row] for row in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "Matrix":
        def dec(v):
            if isinstance(v, dict):
                if set(v) != {"poly"}:
                    raise ValueError(f"unknown entry object {v!r}")
                return Poly.from_json(v["poly"])
            if isinstance(v, int) and not isinstance(v, bool):
                return Fraction(v)
            if isinstance(v, str):
                return parse_rational(v)
            raise ValueError(f"bad matrix entry {v!r}")

        rows = [[dec(v) for v in row] for row in data["entries"]]
        mat = cls(rows)
        if "rows" in data and data["rows"] != mat.m or "cols" in data and data["cols"] != mat.n:
            raise DimensionError("declared rows/cols disagree with entries")
        return mat

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        """Whitespace-separated rationals, one row per line; ``#`` starts a comment."""
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append([parse_rational(tok) for tok in line.split()])
        return cls(rows)

    @classmethod
    def load(cls, path) -> "Matrix":
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            return cls.from_json(json.loads(text))
        return cls.from_text(text)


def identity(n: int) -> Matrix:
    return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def ones(m: int, n: int | None = None) -> Matrix:
    return Matrix([[1] * (m if n is None else n) for _ in range(m)])


def zeros(m: int, n: int | None = None) -> Matrix:
    return Matrix([[0] * (m if n is None else n) for _ in range(m)])


# -- index sets --------------------------------------------------------------


def _check_index_set(idx: Sequence[int], bound: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in idx)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"index set {idx} is not strictly increasing")
    if idx and (idx[0] < 1 or idx[-1] > bound):
        raise IndexError(f"index set {idx} out of range 1..{bound}")
    return idx


def is_contiguous(idx: Sequence[int]) -> bool:
    return all(b == a + 1 for a, b in zip(idx, idx[1:]))


def is_initial(idx: Sequence[int]) -> bool:
    return bool(idx) and idx[0] == 1 and is_contiguous(idx)


def index_sets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of 1..n in lexicographic order."""
    return combinations(range(1, n + 1), k)


def submatrix(A: Matrix, I: Sequence[int], J: Sequence[int]) -> Matrix:
    I = _check_index_set(I, A.m)
    J = _check_index_set(J, A.n)
    return Matrix([[A.rows[i - 1][j - 1] for j in J] for i in I])


# -- determinants ------------------------------------------------------------


def _zero_like(v):
    if isinstance(v, TSeries):
        return TSeries([], v.order)
    if isinstance(v, Poly):
        return Poly((), v.var)
    return Fraction(0)


def _is_zero(v) -> bool:
    return v.is_zero() if isinstance(v, (Poly, TSeries)) else v == 0


def det_cofactor(A: Matrix):
    """Laplace expansion along the first row, memoised on column subsets.

    Uses only ring operations, so it is valid for truncated series where
    Bareiss division would lose precision.
    """
    if not A.is_square():
        raise DimensionError(f"determinant of a non-square {A.shape} matrix")
    n = A.n
    if n > MAX_COFACTOR_SIZE:
        raise UnsupportedStructure(f"cofactor expansion refused for size {n} > {MAX_COFACTOR_SIZE}")
    rows = A.rows
    zero = _zero_like(rows[0][0])

    @lru_cache(maxsize=None)
    def expand(r: int, cols: tuple[int, ...]):
        if r == n:
            return zero + 1
        total = zero
        for pos, c in enumerate(cols):
            a = rows[r][c]
            if _is_zero(a):
                continue
            term = a * expand(r + 1, cols[:pos] + cols[pos + 1:])
            total = total - term if pos % 2 else total + term
        return total

    return expand(0, tuple(range(n)))


def det(A: Matrix):
    """Exact determinant.

    Fraction-free Bareiss elimination with a first-nonzero pivot search for
    integral domains (rationals, polynomials); series entries go through
    :func:`det_cofactor`.
    """
    if not A.is_square():
        raise DimensionError(f"determinant of a non-square {A.shape} matrix")
    if any(isinstance(v, TSeries) for v in A.entries()):
        return det_cofactor(A)
    n = A.n
    M = [list(r) for r in A.rows]
    zero = _zero_like(M[0][0])
    sign = 1
    prev = zero + 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if not _is_zero(M[i][k])), None)
        if piv is None:
            return zero
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pk - M[i][k] * M[k][j]) / prev
            M[i][k] = zero
        prev = pk
    out = M[n - 1][n - 1]
    return out if sign > 0 else -out


def minor(A: Matrix, I: Sequence[int], J: Sequence[int]):
    return det(submatrix(A, I, J))


# -- Hankel structure --------------------------------------------------------


def is_hankel(A: Matrix) -> bool:
    """True iff every contiguous 2-by-2 submatrix is symmetric.

    That is ``A[i+1][j] == A[i][j+1]`` throughout, which forces ``A[i][j]`` to
    depend only on ``i + j``.
    """
    r = A.rows
    return all(r[i + 1][j] == r[i][j + 1] for i in range(A.m - 1) for j in range(A.n - 1))


def hankel_from(sequence: Sequence, n: int) -> Matrix:
    """The n-by-n matrix ``(a[i+j])`` for ``0 <= i, j < n``."""
    if n < 1:
        raise DimensionError("Hankel size must be positive")
    if len(sequence) < 2 * n - 1:
        raise ValueError(f"need {2 * n - 1} sequence terms for a {n}x{n} Hankel matrix, got {len(sequence)}")
    return Matrix([[sequence[i + j] for j in range(n)] for i in range(n)])


def hankel_sequence(A: Matrix) -> list:
    """Recover ``a_0 .. a_{m+n-2}`` from a Hankel matrix."""
    if not is_hankel(A):
        raise ValueError("matrix is not Hankel")
    return [A.rows[0][j] for j in range(A.n)] + [A.rows[i][A.n - 1] for i in range(1, A.m)]


def corner_matrix(n: int) -> Matrix:
    """1 in the upper-left corner, -1 in the lower-right, zeros elsewhere."""
    if n < 2:
        raise DimensionError("corner matrix needs n >= 2")
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = 1
    rows[n - 1][n - 1] = -1
    return Matrix(rows)
