"""Order of total positivity / total nonnegativity of exact matrices.

``classify_brute`` enumerates every minor.  The cheaper criteria only ever
certify *strict* positivity: a matrix with zero entries can be TN while no
amount of checking contiguous or initial minors proves it, so those
functions return ``False`` rather than guess.  ``classify_hankel`` is exact
for both TN and TP, but only for Hankel input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .exact import as_fraction, format_rational
from .matrix import Matrix, det, index_sets, is_hankel, hankel_from, submatrix

__all__ = [
    "Witness",
    "Classification",
    "Criterion",
    "classify",
    "classify_brute",
    "classify_hankel",
    "is_tp_gp",
    "is_tpr_fekete",
    "is_tpr_mixed",
    "is_additive_core",
    "perturb_to_tp",
    "factorial_hankel",
    "initial_index_pairs",
    "contiguous_index_pairs",
    "NotHankelError",
]


class NotHankelError(ValueError):
    pass


class Criterion(enum.Enum):
    BRUTE = "brute"
    GP_INITIAL = "gp"
    FEKETE_CONTIGUOUS = "fekete"
    TPR_MIXED = "mixed"
    HANKEL_PRINCIPAL = "hankel"


@dataclass(frozen=True)
class Witness:
    """A minor certifying failure: rows ``rows``, columns ``cols`` (1-based).

    ``value`` is the exact minor when known; Hadamard powers with a
    non-integer exponent only carry the certified ``sign``.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: Optional[Fraction]
    sign: int

    def to_dict(self) -> dict:
        out = {"rows": list(self.rows), "cols": list(self.cols)}
        out["value"] = format_rational(self.value) if self.value is not None else None
        out["sign"] = self.sign
        return out


@dataclass(frozen=True)
class Classification:
    tp_order: int
    tn_order: int
    tp_witness: Optional[Witness] = None
    tn_witness: Optional[Witness] = None
    size: tuple[int, int] = (0, 0)

    @property
    def cap(self) -> int:
        return min(self.size)

    @property
    def is_tn(self) -> bool:
        return self.tn_order >= self.cap

    @property
    def is_tp(self) -> bool:
        return self.tp_order >= self.cap

    def is_tn_r(self, r: int) -> bool:
        return self.tn_order >= min(r, self.cap)

    def is_tp_r(self, r: int) -> bool:
        return self.tp_order >= min(r, self.cap)

    def orders(self) -> tuple[int, int]:
        return self.tp_order, self.tn_order

    def to_dict(self) -> dict:
        return {
            "tp_order": self.tp_order,
            "tn_order": self.tn_order,
            "tp_witness": self.tp_witness.to_dict() if self.tp_witness else None,
            "tn_witness": self.tn_witness.to_dict() if self.tn_witness else None,
            "rows": self.size[0],
            "cols": self.size[1],
        }


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _scan(
    cap: int,
    candidates: Callable[[int], Iterator[tuple[tuple[int, ...], tuple[int, ...]]]],
    value: Callable[[tuple[int, ...], tuple[int, ...]], Fraction],
    size: tuple[int, int],
) -> Classification:
    """Run both tracks size by size; the first failure per size is the witness."""
    tp = tn = None
    tp_w = tn_w = None
    for k in range(1, cap + 1):
        if tn is not None:
            break
        first_nonpos = first_neg = None
        for I, J in candidates(k):
            v = value(I, J)
            if v <= 0 and first_nonpos is None and tp is None:
                first_nonpos = Witness(I, J, v, _sign(v))
            if v < 0:
                first_neg = Witness(I, J, v, -1)
                break
        if tp is None and first_nonpos is not None:
            tp, tp_w = k - 1, first_nonpos
        if first_neg is not None:
            tn, tn_w = k - 1, first_neg
    return Classification(
        tp_order=cap if tp is None else tp,
        tn_order=cap if tn is None else tn,
        tp_witness=tp_w,
        tn_witness=tn_w,
        size=size,
    )


def classify_brute(A: Matrix, r: int | None = None) -> Classification:
    """Classify by enumerating every minor of size ``<= r`` (default all).

    Index pairs of a given size are visited in lexicographic order (rows,
    then columns), so witnesses are reproducible.
    """
    cap = min(A.m, A.n) if r is None else min(r, A.m, A.n)
    cache: dict = {}

    def candidates(k):
        for I in index_sets(A.m, k):
            for J in index_sets(A.n, k):
                yield I, J

    def value(I, J):
        key = (I, J)
        if key not in cache:
            cache[key] = det(submatrix(A, I, J))
        return cache[key]

    return _scan(cap, candidates, value, (A.m, A.n))


def principal_index_pairs(n: int, k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Principal minors of ``A`` then of ``A'`` (upper-right corner) of size k.

    ``A'`` occupies rows ``1..n-1`` and columns ``2..n`` of ``A``, so its
    principal minor on ``S`` is the minor of ``A`` on rows ``S``, columns
    ``S + 1``.
    """
    for S in index_sets(n, k):
        yield S, S
    if n >= 2:
        for S in index_sets(n - 1, k):
            yield S, tuple(s + 1 for s in S)


def classify_hankel(A: Matrix, r: int | None = None) -> Classification:
    """Classify a square Hankel matrix from principal minors of A and A' only.

    A Hankel matrix is TN_r (TP_r) exactly when every principal minor of
    ``A`` and of ``A'`` of size ``<= r`` is nonnegative (positive).  Orders
    agree with :func:`classify_brute`; the witness is the first failing
    principal minor, reported in the coordinates of ``A``.
    """
    if not A.is_square() or not is_hankel(A):
        raise NotHankelError("classify_hankel needs a square Hankel matrix")
    n = A.n
    cap = n if r is None else min(r, n)
    return _scan(
        cap,
        lambda k: principal_index_pairs(n, k),
        lambda I, J: det(submatrix(A, I, J)),
        (n, n),
    )


def classify(A: Matrix, method: Criterion | str = "auto", r: int | None = None) -> Classification:
    if method == "auto":
        method = Criterion.HANKEL_PRINCIPAL if A.is_square() and is_hankel(A) else Criterion.BRUTE
    method = Criterion(method)
    if method is Criterion.HANKEL_PRINCIPAL:
        return classify_hankel(A, r)
    if method is Criterion.BRUTE:
        return classify_brute(A, r)
    raise ValueError(f"{method} certifies positivity only; use the is_* predicates")


# -- strict-positivity criteria ---------------------------------------------


def contiguous_index_pairs(m: int, n: int, k: int):
    for i in range(1, m - k + 2):
        for j in range(1, n - k + 2):
            yield tuple(range(i, i + k)), tuple(range(j, j + k))


def initial_index_pairs(m: int, n: int, max_size: int | None = None):
    """The initial submatrix ending at each entry ``(i, j)``.

    Every entry is the lower-right corner of exactly one initial submatrix,
    of size ``min(i, j)``; there are ``m*n`` of them.
    """
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            k = min(i, j)
            if max_size is not None and k > max_size:
                continue
            yield tuple(range(i - k + 1, i + 1)), tuple(range(j - k + 1, j + 1))


def _first_nonpositive(A: Matrix, pairs) -> Optional[Witness]:
    for I, J in pairs:
        v = det(submatrix(A, I, J))
        if v <= 0:
            return Witness(I, J, v, _sign(v))
    return None


def gp_failure(A: Matrix) -> Optional[Witness]:
    return _first_nonpositive(A, initial_index_pairs(A.m, A.n))


def is_tp_gp(A: Matrix) -> bool:
    """All ``m*n`` initial minors positive (which implies TP)."""
    return gp_failure(A) is None


def fekete_failure(A: Matrix, r: int) -> Optional[Witness]:
    _check_order(A, r)
    for k in range(1, r + 1):
        w = _first_nonpositive(A, contiguous_index_pairs(A.m, A.n, k))
        if w is not None:
            return w
    return None


def is_tpr_fekete(A: Matrix, r: int) -> bool:
    """All contiguous minors of size ``<= r`` positive (implies TP_r)."""
    return fekete_failure(A, r) is None


def mixed_failure(A: Matrix, r: int) -> Optional[Witness]:
    _check_order(A, r)
    w = _first_nonpositive(A, initial_index_pairs(A.m, A.n, max_size=r - 1))
    if w is None:
        w = _first_nonpositive(A, contiguous_index_pairs(A.m, A.n, r))
    return w


def is_tpr_mixed(A: Matrix, r: int) -> bool:
    """Initial minors of size ``<= r-1`` and contiguous minors of size ``r`` positive."""
    return mixed_failure(A, r) is None


def _check_order(A: Matrix, r: int) -> None:
    if not 1 <= r <= min(A.m, A.n):
        raise ValueError(f"order {r} outside 1..{min(A.m, A.n)}")


# -- additive core and perturbation ------------------------------------------


def is_additive_core(A: Matrix) -> bool:
    """Upper-left and lower-right entries nonnegative, every other entry zero.

    For ``m, n >= 2`` these are exactly the matrices with ``A + B`` TN for
    every TN ``B``.  (A single row or column is TN iff nonnegative, so the
    behavioural equivalence needs both dimensions at least 2.)
    """
    m, n = A.shape
    for i in range(m):
        for j in range(n):
            v = A.rows[i][j]
            if (i, j) in ((0, 0), (m - 1, n - 1)):
                if v < 0:
                    return False
            elif v != 0:
                return False
    return True


def factorial_hankel(n: int) -> Matrix:
    """Hankel matrix of ``a_k = k!``, a TP moment matrix."""
    seq, f = [], 1
    for k in range(2 * n - 1):
        if k:
            f *= k
        seq.append(f)
    return hankel_from(seq, n)


def perturb_to_tp(A: Matrix, eps=1) -> Matrix:
    """``A + eps * H`` with ``H`` the factorial-moment Hankel matrix.

    If ``A`` is a TN_r Hankel matrix, the result is a TP_r Hankel matrix for
    every ``eps > 0``.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not A.is_square() or not is_hankel(A):
        raise NotHankelError("perturb_to_tp needs a square Hankel matrix")
    return A + factorial_hankel(A.n) * eps
