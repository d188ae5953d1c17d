"""Hadamard products and powers, and executable closure checks.

Each ``check_*`` function classifies the inputs and the output, decides
which known closure results apply to the inputs, and raises a ``violation``
flag when an applicable result's conclusion fails.  For correct code the
flag never fires; ``observed_failure`` records the (expected) loss of
positivity when no result applies, e.g. for symmetric non-Hankel inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import Classification, classify
from .exact import Poly, as_fraction, series_power
from .exppoly import classify_power
from .matrix import DimensionError, Matrix, is_hankel

__all__ = [
    "SYMBOLIC_T",
    "hadamard_product",
    "hadamard_power",
    "hadamard_power_int",
    "hadamard_power_series",
    "is_tridiagonal",
    "ClosureReport",
    "check_sum_closure",
    "check_product_closure",
    "check_tn2_product",
    "check_power_closure",
]

SYMBOLIC_T = "t"


def hadamard_product(A: Matrix, B: Matrix) -> Matrix:
    if A.shape != B.shape:
        raise DimensionError(f"Hadamard product of {A.shape} and {B.shape}")
    return Matrix([[a * b for a, b in zip(r, s)] for r, s in zip(A.rows, B.rows)])


def hadamard_power_int(A: Matrix, k: int) -> Matrix:
    if int(k) != k or k < 1:
        raise ValueError("integer Hadamard power needs k >= 1")
    k = int(k)
    return A.map(lambda v: v**k)


def hadamard_power_series(A: Matrix, order: int) -> Matrix:
    """Entrywise ``p(x)**t`` as series in ``x`` with coefficients in Q[t].

    Every entry must be a polynomial (or rational) with constant term 1.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")

    def power(v):
        p = v if isinstance(v, Poly) else Poly([v])
        return series_power(p, order)

    return A.map(power)


def hadamard_power(A: Matrix, exponent, *, order: int | None = None):
    """Dispatch on the exponent.

    An integer gives the exact matrix ``A^{∘k}``; :data:`SYMBOLIC_T` gives the
    series matrix (``order`` required).  Non-integer rationals have no exact
    matrix; use :func:`totalpos.exppoly.minor_exppoly` or
    :func:`classify_power` for those.
    """
    if exponent == SYMBOLIC_T:
        if order is None:
            raise ValueError("symbolic Hadamard power needs a truncation order")
        return hadamard_power_series(A, order)
    t = as_fraction(exponent)
    if t.denominator == 1:
        return hadamard_power_int(A, int(t))
    raise ValueError("non-integer Hadamard powers are handled minor by minor in totalpos.exppoly")


def is_tridiagonal(A: Matrix) -> bool:
    return all(A.rows[i][j] == 0 for i in range(A.m) for j in range(A.n) if abs(i - j) > 1)


@dataclass(frozen=True)
class ClosureReport:
    operation: str
    order: int
    a: Classification
    b: Classification
    result: Classification
    applicable: tuple[str, ...]
    violation: bool
    observed_failure: bool
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "operation": self.operation,
            "order": self.order,
            "a": self.a.to_dict(),
            "b": self.b.to_dict(),
            "result": self.result.to_dict(),
            "applicable": list(self.applicable),
            "violation": self.violation,
            "observed_failure": self.observed_failure,
            "notes": list(self.notes),
        }


def _square_pair(A: Matrix, B: Matrix) -> None:
    if A.shape != B.shape:
        raise DimensionError(f"inputs of shapes {A.shape} and {B.shape}")


def check_sum_closure(A: Matrix, B: Matrix, r: int | None = None) -> ClosureReport:
    """Sums of Hankel matrices: TN_r + TN_r is TN_r; TN_r + TP_r is TP_r."""
    _square_pair(A, B)
    r = min(A.shape) if r is None else r
    ca, cb = classify(A), classify(B)
    S = A + B
    cs = classify(S)
    hankel = A.is_square() and is_hankel(A) and is_hankel(B)
    applicable, violated = [], False
    if hankel and ca.is_tn_r(r) and cb.is_tn_r(r):
        applicable.append("hankel_sum_tn")
        violated |= not cs.is_tn_r(r)
        if ca.is_tp_r(r) or cb.is_tp_r(r):
            applicable.append("hankel_sum_tp")
            violated |= not cs.is_tp_r(r)
    observed = ca.is_tn_r(r) and cb.is_tn_r(r) and not cs.is_tn_r(r)
    return ClosureReport("sum", r, ca, cb, cs, tuple(applicable), violated, observed)


def check_product_closure(A: Matrix, B: Matrix, r: int | None = None) -> ClosureReport:
    """Hadamard products preserving TN_r / TP_r.

    Applicable results: both Hankel; one of them tridiagonal TN_r; both 3x3
    symmetric.
    """
    _square_pair(A, B)
    r = min(A.shape) if r is None else r
    ca, cb = classify(A), classify(B)
    P = hadamard_product(A, B)
    cp = classify(P)
    applicable, violated = [], False
    both_tn, both_tp = ca.is_tn_r(r) and cb.is_tn_r(r), ca.is_tp_r(r) and cb.is_tp_r(r)
    if A.is_square() and is_hankel(A) and is_hankel(B):
        if both_tn:
            applicable.append("hankel_product_tn")
            violated |= not cp.is_tn_r(r)
        if both_tp:
            applicable.append("hankel_product_tp")
            violated |= not cp.is_tp_r(r)
    if both_tn and (is_tridiagonal(A) or is_tridiagonal(B)):
        applicable.append("tridiagonal_product_tn")
        violated |= not cp.is_tn_r(r)
    if A.shape == (3, 3) and A.is_symmetric() and B.is_symmetric():
        if ca.is_tn and cb.is_tn:
            applicable.append("symmetric3_product_tn")
            violated |= not cp.is_tn
        if ca.is_tp and cb.is_tp:
            applicable.append("symmetric3_product_tp")
            violated |= not cp.is_tp
    observed = both_tn and not cp.is_tn_r(r)
    return ClosureReport("product", r, ca, cb, cp, tuple(applicable), violated, observed)


def check_tn2_product(A: Matrix, B: Matrix) -> ClosureReport:
    """TN_2 ∘ TN_2 is TN_2, and TP_2 ∘ (TP_1 ∩ TN_2) is TP_2."""
    _square_pair(A, B)
    ca, cb = classify(A, r=2), classify(B, r=2)
    cp = classify(hadamard_product(A, B), r=2)
    applicable, violated = [], False
    if ca.is_tn_r(2) and cb.is_tn_r(2):
        applicable.append("tn2_product")
        violated |= not cp.is_tn_r(2)
        if (ca.is_tp_r(2) and cb.is_tp_r(1)) or (cb.is_tp_r(2) and ca.is_tp_r(1)):
            applicable.append("tp2_product")
            violated |= not cp.is_tp_r(2)
    return ClosureReport("tn2_product", 2, ca, cb, cp, tuple(applicable), violated, False)


def check_power_closure(A: Matrix, t, r: int | None = None, max_bits: int | None = None) -> ClosureReport:
    """Real Hadamard powers ``A^{∘t}`` of a positive matrix.

    Applicable results: TN_2/TP_2 for all ``t > 0``; TN_3/TP_3 for ``t >= 1``;
    4x4 symmetric TN/TP for ``t >= 2``; TN_r/TP_r Hankel for ``t >= r - 2``.
    The ``b`` slot of the report repeats ``a``.
    """
    t = as_fraction(t)
    r = min(A.shape) if r is None else min(r, *A.shape)
    ca = classify(A, r=r)
    cp = classify_power(A, t, r, max_bits=max_bits)
    checks: list[tuple[str, int, bool]] = []  # (name, order, strict)
    for strict, ok in ((False, ca.is_tn_r), (True, ca.is_tp_r)):
        if ok(2):
            checks.append(("power_order2", min(2, r), strict))
        if t >= 1 and ok(3):
            checks.append(("power_order3", min(3, r), strict))
        if t >= 2 and A.shape == (4, 4) and A.is_symmetric() and ok(4) and r >= 4:
            checks.append(("power_symmetric4", 4, strict))
        if r >= 3 and t >= r - 2 and A.is_square() and is_hankel(A) and ok(r):
            checks.append(("power_hankel", r, strict))
    applicable, violated = [], False
    for name, k, strict in checks:
        applicable.append(f"{name}_{'tp' if strict else 'tn'}")
        violated |= not (cp.is_tp_r(k) if strict else cp.is_tn_r(k))
    observed = ca.is_tn_r(r) and not cp.is_tn_r(r)
    return ClosureReport(
        f"power t={t}", r, ca, ca, cp, tuple(applicable), violated, observed
    )
