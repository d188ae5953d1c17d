"""Minors of real Hadamard powers as exponential polynomials.

For a matrix with positive rational entries, every minor of ``A^{∘t}`` is
``f(t) = sum_i c_i * b_i**t`` with rational coefficients ``c_i`` and
positive rational bases ``b_i`` (the products of entries along each
permutation).  Signs are decided exactly at integer ``t`` and otherwise by
interval arithmetic at increasing precision until the enclosure excludes 0.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Optional, Sequence

import mpmath
from mpmath import iv

from .classify import Classification, Witness, _scan
from .exact import as_fraction, format_rational, parse_rational
from .matrix import Matrix, index_sets, submatrix

__all__ = [
    "ExpPoly",
    "SignCertificate",
    "SignUndetermined",
    "RootInterval",
    "RootReport",
    "DEFAULT_MAX_BITS",
    "default_max_bits",
    "minor_exppoly",
    "laguerre_bound",
    "sign_at",
    "derivative_sign_at",
    "count_roots_certified",
    "classify_power",
]

DEFAULT_MAX_BITS = 4096
START_BITS = 64
MAX_PERMUTATION_SIZE = 7
# Exact log-derivative test multiplies out b**n; skip it past this many bits.
_EXACT_LOG_BITS = 2_000_000


def default_max_bits() -> int:
    env = os.environ.get("TOTALPOS_BITS")
    return int(env) if env else DEFAULT_MAX_BITS


class SignUndetermined(ArithmeticError):
    """The enclosure still contained 0 at the precision ceiling."""

    def __init__(self, message: str, interval: tuple[str, str] | None = None, bits: int = 0):
        super().__init__(message)
        self.interval = interval
        self.bits = bits


class ExpPoly:
    """``sum c_i * b_i**t`` with distinct positive bases in increasing order.

    Equal bases are merged and zero coefficients dropped on construction,
    so the zero function has no terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple] = ()):
        acc: dict[Fraction, Fraction] = {}
        for base, coeff in terms:
            base, coeff = as_fraction(base), as_fraction(coeff)
            if base <= 0:
                raise ValueError(f"base {base} is not positive")
            acc[base] = acc.get(base, Fraction(0)) + coeff
        object.__setattr__(self, "terms", tuple((b, c) for b, c in sorted(acc.items()) if c != 0))

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    @property
    def bases(self) -> tuple[Fraction, ...]:
        return tuple(b for b, _ in self.terms)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(c for _, c in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.terms + other.terms)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly((b, -c) for b, c in self.terms)

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly((b1 * b2, c1 * c2) for b1, c1 in self.terms for b2, c2 in other.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def eval_exact(self, t: int) -> Fraction:
        """Exact value at an integer exponent (negative allowed)."""
        if int(t) != t:
            raise ValueError("exact evaluation needs an integer exponent")
        t = int(t)
        return sum((c * b**t for b, c in self.terms), Fraction(0))

    def eval_interval(self, t: Fraction, bits: int, derivative: int = 0):
        """Interval enclosure of the ``derivative``-th derivative at ``t``."""
        iv.prec = bits
        tt = iv.mpf(t.numerator) / iv.mpf(t.denominator)
        total = iv.mpf(0)
        for b, c in self.terms:
            lb = iv.log(iv.mpf(b.numerator) / iv.mpf(b.denominator))
            term = iv.exp(tt * lb) * (iv.mpf(c.numerator) / iv.mpf(c.denominator))
            if derivative:
                term = term * lb**derivative
            total = total + term
        return total

    def to_json(self) -> list[dict]:
        return [{"base": format_rational(b), "coeff": format_rational(c)} for b, c in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "ExpPoly":
        return cls((parse_rational(d["base"]), parse_rational(d["coeff"])) for d in data)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for b, c in self.terms:
            mag = abs(c)
            body = f"{format_rational(b)}^t" if mag == 1 else f"{format_rational(mag)}*{format_rational(b)}^t"
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def __repr__(self):
        return f"ExpPoly({self})"


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def minor_exppoly(A: Matrix, I: Sequence[int] | None = None, J: Sequence[int] | None = None) -> ExpPoly:
    """``det((A^{∘t})_{IJ})`` as an exponential polynomial in ``t``.

    Sums ``sgn(σ) * (prod of entries)**t`` over permutations and collects
    equal products.  Defaults to the full determinant.
    """
    S = A if I is None and J is None else submatrix(A, I, J)
    if not S.is_square():
        raise ValueError(f"minor of a non-square {S.shape} block")
    k = S.n
    if k > MAX_PERMUTATION_SIZE:
        raise ValueError(f"{k}x{k} minors exceed the permutation-expansion cap of {MAX_PERMUTATION_SIZE}")
    rows = S.rows
    for v in S.entries():
        if not isinstance(v, Fraction) or v <= 0:
            raise ValueError(f"Hadamard powers need strictly positive rational entries, found {v}")
    acc: dict[Fraction, int] = {}
    for p in permutations(range(k)):
        prod = Fraction(1)
        for i in range(k):
            prod *= rows[i][p[i]]
        acc[prod] = acc.get(prod, 0) + _perm_sign(p)
    return ExpPoly(acc.items())


def laguerre_bound(f: ExpPoly) -> tuple[int, int]:
    """Sign changes of the coefficients ordered by base, and their parity.

    The number of real zeros counted with multiplicity is at most this and
    has the same parity.
    """
    cs = f.coeffs
    changes = sum(1 for a, b in zip(cs, cs[1:]) if (a > 0) != (b > 0))
    return changes, changes % 2


@dataclass(frozen=True)
class SignCertificate:
    t: Fraction
    sign: int
    precision_bits: int
    method: str  # "exact" or "interval"
    enclosure: Optional[tuple[str, str]] = None

    def to_dict(self) -> dict:
        return {
            "t": format_rational(self.t),
            "sign": self.sign,
            "precision_bits": self.precision_bits,
            "method": self.method,
            "enclosure": list(self.enclosure) if self.enclosure else None,
        }


def _exact_root(q: Fraction, p: int, den: int) -> Optional[Fraction]:
    """``q ** (p/den)`` when it is rational, else None."""

    def iroot(n: int) -> Optional[int]:
        if n <= 1:
            return n
        if n.bit_length() <= den:  # 2**den > n, so n is no perfect den-th power
            return None
        r = round(n ** (1.0 / den)) if n < 2**1000 else None
        if r is None:
            lo, hi = 0, 1 << (n.bit_length() // den + 1)
            while lo < hi:
                mid = (lo + hi) // 2
                if mid**den < n:
                    lo = mid + 1
                else:
                    hi = mid
            r = lo
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**den == n:
                return cand
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b) ** p


def _exact_value(f: ExpPoly, t: Fraction) -> Optional[Fraction]:
    if t.denominator == 1:
        return f.eval_exact(int(t))
    total = Fraction(0)
    for b, c in f.terms:
        r = _exact_root(b, t.numerator, t.denominator)
        if r is None:
            return None
        total += c * r
    return total


def _endpoints(val, bits: int) -> tuple[str, str]:
    """Decimal strings that round-trip to the binary interval endpoints."""
    digits = mpmath.libmp.repr_dps(bits)
    with mpmath.workprec(bits):
        return tuple(mpmath.nstr(mpmath.mpf(e), digits) for e in val._mpi_)


def _interval_sign(f: ExpPoly, t: Fraction, max_bits: int, derivative: int = 0):
    bits = START_BITS
    while True:
        val = f.eval_interval(t, bits, derivative)
        if val.a > 0:
            return 1, bits, val
        if val.b < 0:
            return -1, bits, val
        if bits >= max_bits:
            raise SignUndetermined(
                f"sign of {f} at t={format_rational(t)} undetermined at {bits} bits",
                _endpoints(val, bits),
                bits,
            )
        bits = min(2 * bits, max_bits)


def sign_at(f: ExpPoly, t, max_bits: int | None = None) -> SignCertificate:
    """Certified sign of ``f(t)``.

    Integer ``t`` (and any ``t`` at which every ``b_i**t`` is rational) is
    evaluated exactly; otherwise precision doubles from 64 bits up to
    ``max_bits``.
    """
    t = as_fraction(t)
    max_bits = default_max_bits() if max_bits is None else max_bits
    if f.is_zero():
        return SignCertificate(t, 0, 0, "exact")
    exact = _exact_value(f, t)
    if exact is not None:
        return SignCertificate(t, (exact > 0) - (exact < 0), 0, "exact")
    sign, bits, val = _interval_sign(f, t, max_bits)
    return SignCertificate(t, sign, bits, "interval", _endpoints(val, bits))


def _exact_log_sum_sign(weights: Sequence[tuple[Fraction, Fraction]]) -> Optional[int]:
    """Sign of ``sum w * log(b)`` by comparing ``prod b**(L*w)`` with 1.

    ``L`` clears the denominators of the weights.  Returns None if the
    products would be too large to form.
    """
    L = 1
    for _, w in weights:
        L = L * w.denominator // math.gcd(L, w.denominator)
    size = 0
    for b, w in weights:
        size += abs(int(w * L)) * (b.numerator.bit_length() + b.denominator.bit_length())
    if size > _EXACT_LOG_BITS:
        return None
    prod = Fraction(1)
    for b, w in weights:
        prod *= b ** int(w * L)
    return (prod > 1) - (prod < 1)


def derivative_sign_at(f: ExpPoly, t, order: int = 1, max_bits: int | None = None) -> Optional[int]:
    """Sign of ``f^(order)(t)``; exact zero is only decidable for ``order == 1``
    at integer ``t``.  Returns None when the sign cannot be certified."""
    t = as_fraction(t)
    max_bits = default_max_bits() if max_bits is None else max_bits
    if f.is_zero():
        return 0
    if order == 1 and t.denominator == 1:
        m = int(t)
        s = _exact_log_sum_sign([(b, c * b**m) for b, c in f.terms])
        if s is not None:
            return s
    try:
        return _interval_sign(f, t, max_bits, derivative=order)[0]
    except SignUndetermined:
        return None


@dataclass(frozen=True)
class RootInterval:
    lo: Fraction
    hi: Fraction
    multiplicity: int
    at_least: bool = False  # multiplicity is a lower bound

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_dict(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "multiplicity": self.multiplicity,
            "at_least": self.at_least,
        }


@dataclass(frozen=True)
class RootReport:
    roots: tuple[RootInterval, ...]
    laguerre_bound: int
    complete: bool

    @property
    def count(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def to_dict(self) -> dict:
        return {
            "roots": [r.to_dict() for r in self.roots],
            "count": self.count,
            "laguerre_bound": self.laguerre_bound,
            "complete": self.complete,
        }


def _multiplicity_at(f: ExpPoly, t: Fraction, max_bits: int) -> tuple[int, bool]:
    d1 = derivative_sign_at(f, t, 1, max_bits)
    if d1:
        return 1, False
    if d1 is None:
        return 1, True
    d2 = derivative_sign_at(f, t, 2, max_bits)
    return (2, False) if d2 else (2, True)


def count_roots_certified(
    f: ExpPoly,
    t_lo,
    t_hi,
    grid: int = 64,
    tol=Fraction(1, 2**30),
    max_bits: int | None = None,
) -> RootReport:
    """Isolate the real zeros of ``f`` in ``[t_lo, t_hi]``.

    The grid is the uniform one plus every integer in range (zeros at
    integers are found exactly; their multiplicity comes from the first and
    second derivatives).  Sign changes between nonzero nodes are bisected
    down to width ``tol``.  ``complete`` is set only when the multiplicities
    found add up to the Laguerre bound, in which case ``f`` has no other
    real zeros at all.
    """
    lo, hi = as_fraction(t_lo), as_fraction(t_hi)
    if not lo < hi:
        raise ValueError("need t_lo < t_hi")
    if grid < 1:
        raise ValueError("grid must be at least 1")
    if f.is_zero():
        raise ValueError("the zero function has no isolated roots")
    max_bits = default_max_bits() if max_bits is None else max_bits
    tol = as_fraction(tol)
    step = (hi - lo) / grid
    nodes = {lo + k * step for k in range(grid + 1)}
    nodes.update(Fraction(k) for k in range(math.ceil(lo), math.floor(hi) + 1))
    nodes = sorted(nodes)
    signs = [sign_at(f, t, max_bits).sign for t in nodes]

    roots: list[RootInterval] = []
    prev_t, prev_s = None, 0
    for t, s in zip(nodes, signs):
        if s == 0:
            mult, at_least = _multiplicity_at(f, t, max_bits)
            roots.append(RootInterval(t, t, mult, at_least))
            continue
        if prev_s and s != prev_s and not (roots and roots[-1].exact and roots[-1].lo > prev_t):
            roots.append(_bisect(f, prev_t, t, prev_s, tol, max_bits))
        prev_t, prev_s = t, s

    bound, parity = laguerre_bound(f)
    total = sum(r.multiplicity for r in roots)
    complete = total == bound and not any(r.at_least for r in roots)
    return RootReport(tuple(roots), bound, complete)


def _bisect(f: ExpPoly, a: Fraction, b: Fraction, sa: int, tol: Fraction, max_bits: int) -> RootInterval:
    while b - a > tol:
        mid = (a + b) / 2
        s = sign_at(f, mid, max_bits).sign
        if s == 0:
            mult, at_least = _multiplicity_at(f, mid, max_bits)
            return RootInterval(mid, mid, mult, at_least)
        if s == sa:
            a = mid
        else:
            b = mid
    return RootInterval(a, b, 1)


def classify_power(A: Matrix, t, r: int | None = None, max_bits: int | None = None) -> Classification:
    """Classification of ``A^{∘t}`` with every minor sign certified.

    Witnesses carry the exact minor value when ``t`` is an integer and only
    the sign otherwise.  A sign that cannot be certified raises
    :class:`SignUndetermined` naming the minor.
    """
    t = as_fraction(t)
    if t <= 0:
        raise ValueError("Hadamard exponent must be positive")
    max_bits = default_max_bits() if max_bits is None else max_bits
    cap = min(A.m, A.n) if r is None else min(r, A.m, A.n)

    def candidates(k):
        for I in index_sets(A.m, k):
            for J in index_sets(A.n, k):
                yield I, J

    def value(I, J):
        f = minor_exppoly(A, I, J)
        try:
            cert = sign_at(f, t, max_bits)
        except SignUndetermined as exc:
            raise SignUndetermined(
                f"minor rows={list(I)} cols={list(J)}: {exc}", exc.interval, exc.bits
            ) from exc
        if t.denominator == 1:
            return f.eval_exact(int(t))
        return _SignOnly(cert.sign)

    cls = _scan(cap, candidates, value, (A.m, A.n))
    return Classification(
        cls.tp_order,
        cls.tn_order,
        _strip(cls.tp_witness),
        _strip(cls.tn_witness),
        cls.size,
    )


class _SignOnly:
    """Stand-in for a minor value whose sign alone is certified."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __le__(self, other):
        return self.sign <= 0

    def __lt__(self, other):
        return self.sign < 0

    def __gt__(self, other):
        return self.sign > 0


def _strip(w: Optional[Witness]) -> Optional[Witness]:
    if w is None or not isinstance(w.value, _SignOnly):
        return w
    return Witness(w.rows, w.cols, None, w.value.sign)
