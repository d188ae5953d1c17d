"""Exact scalars, univariate polynomials over Q, and truncated power series.

Rationals are plain :class:`fractions.Fraction` objects, which are kept in
lowest terms with a positive denominator on every construction.  On top of
that this module provides

* :class:`Poly` -- a univariate polynomial with rational coefficients.  The
  same class serves for matrix entries in ``x`` (``PolyEntry``) and for
  polynomials in the exponent symbol ``t`` (``TPoly``); only the printed
  variable name differs.
* :class:`TSeries` -- a power series in ``x`` truncated after ``x**order``
  whose coefficients are polynomials in ``t``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Fraction",
    "Poly",
    "TPoly",
    "PolyEntry",
    "TSeries",
    "as_fraction",
    "parse_rational",
    "format_rational",
    "falling_factorial",
    "binomial_tpoly",
    "binomial_series",
    "tpoly_eval",
    "series_power",
]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"``, ``"-p"`` or ``"p/q"`` into a Fraction.

    Decimal points and exponents are rejected on purpose: a float literal
    would silently stand in for a different rational.
    """
    if isinstance(text, Fraction):
        return text
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings; refuse floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    if hasattr(value, "item") and not isinstance(value, float):
        # numpy integer scalars
        item = value.item()
        if isinstance(item, int):
            return Fraction(item)
    raise TypeError(f"cannot use {value!r} ({type(value).__name__}) as an exact scalar")


Scalar = Union[int, Fraction]


class Poly:
    """Polynomial with rational coefficients, constant term first.

    Instances are immutable and hashable.  Trailing zero coefficients are
    stripped, so the zero polynomial has ``coeffs == ()`` and equality is
    structural.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c, var: str = "x") -> "Poly":
        return cls([c], var)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "x") -> "Poly":
        return cls([0] * k + [c], var)

    @classmethod
    def from_json(cls, data: Sequence[str], var: str = "x") -> "Poly":
        return cls([parse_rational(s) for s in data], var)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_coefficientwise_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def valuation(self) -> int | None:
        """Index of the lowest nonzero coefficient (``None`` for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, var)

    def truncate(self, order: int) -> "Poly":
        return Poly(self.coeffs[: order + 1], self.var)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.var == self.var or other.is_constant():
                return other
            if self.is_constant():
                return other
            raise ValueError(f"cannot combine polynomials in {self.var} and {other.var}")
        try:
            return Poly([as_fraction(other)], self.var)
        except TypeError:
            return None

    def _joint_var(self, o: "Poly") -> str:
        return o.var if self.is_constant() and not o.is_constant() else self.var

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self.coeff(k) + o.coeff(k) for k in range(n)], self._joint_var(o))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        var = self._joint_var(o)
        if not self.coeffs or not o.coeffs:
            return Poly((), var)
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out, var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("Poly powers need a nonnegative integer exponent")
        result = Poly([1], self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other) -> tuple["Poly", "Poly"]:
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = o.coeffs[-1]
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Poly((), self.var), self
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(o.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot, self.var), Poly(rem, self.var)

    def __truediv__(self, other):
        """Exact division; raises ``ArithmeticError`` on a nonzero remainder."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_constant():
            if o.is_zero():
                raise ZeroDivisionError("polynomial division by zero")
            c = o.coeffs[0]
            return Poly([a / c for a in self.coeffs], self.var)
        q, r = self.divmod(o)
        if not r.is_zero():
            raise ArithmeticError(f"{o} does not divide {self}")
        return q

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __call__(self, value):
        """Horner evaluation at a scalar (or any ring element)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        if isinstance(acc, int):
            acc = Fraction(acc)
        return acc

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeff(0))
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({[format_rational(c) for c in self.coeffs]!r}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = format_rational(mag)
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


# Aliases matching the two roles Poly plays.
PolyEntry = Poly


def TPoly(coeffs: Iterable = ()) -> Poly:
    """A polynomial in the exponent symbol ``t``."""
    return Poly(coeffs, var="t")


def falling_factorial(k: int) -> Poly:
    """``t (t-1) ... (t-k+1)`` as a polynomial in ``t``, built by exact products."""
    out = TPoly([1])
    for j in range(k):
        out = out * TPoly([-j, 1])
    return out


def binomial_tpoly(k: int) -> Poly:
    """The binomial coefficient ``C(t, k)`` as a polynomial in ``t``."""
    fact = 1
    for j in range(2, k + 1):
        fact *= j
    return falling_factorial(k) / fact


def tpoly_eval(p: Poly, t) -> Fraction:
    return Fraction(p(as_fraction(t)))


class TSeries:
    """Power series in ``x`` modulo ``x**(order+1)`` with coefficients in Q[t].

    ``coeffs[k]`` is the coefficient of ``x**k``; it always has length
    ``order + 1``.  Sums and products of two series require equal orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise ValueError("series order must be nonnegative")
        cs = [c if isinstance(c, Poly) else TPoly([c]) for c in coeffs]
        cs = [c.with_var("t") for c in cs[: order + 1]]
        cs += [TPoly()] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("TSeries is immutable")

    @classmethod
    def constant(cls, c, order: int) -> "TSeries":
        return cls([c], order)

    def coeff(self, k: int) -> Poly:
        return self.coeffs[k] if 0 <= k <= self.order else TPoly()

    def _check(self, other) -> "TSeries | None":
        if isinstance(other, TSeries):
            if other.order != self.order:
                raise ValueError("series of different truncation orders")
            return other
        if isinstance(other, Poly):
            return TSeries([other.with_var("t")], self.order)
        try:
            return TSeries([as_fraction(other)], self.order)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return TSeries([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        n = self.order
        out = [TPoly() for _ in range(n + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(n + 1 - i):
                b = o.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TSeries(out, n)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def substitute_t(self, t) -> Poly:
        """Evaluate every coefficient at ``t`` and return a polynomial in ``x``."""
        t = as_fraction(t)
        return Poly([c(t) for c in self.coeffs], var="x")

    def leading_term(self) -> tuple[int, Poly] | None:
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k, c
        return None

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"TSeries(order={self.order}, {self})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("*x" if k == 1 else f"*x^{k}")
            parts.append(f"({c}){mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(x^{self.order + 1})"


def binomial_series(alpha, order: int) -> TSeries:
    """Expansion of ``(1 + alpha*x)**t`` up to ``x**order``.

    The coefficient of ``x**k`` is ``alpha**k * t(t-1)...(t-k+1) / k!``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    alpha = as_fraction(alpha)
    return TSeries([binomial_tpoly(k) * alpha**k for k in range(order + 1)], order)


def series_power(p: Poly, order: int) -> TSeries:
    """``p(x)**t`` truncated at ``x**order`` for a polynomial with ``p(0) == 1``.

    Writes ``p = 1 + y`` and sums ``C(t, k) * y**k``; since ``y`` has no
    constant term only ``k <= order`` contributes.
    """
    if p.coeff(0) != 1:
        raise ValueError(f"entry {p} does not have constant term 1")
    y = Poly([0] + list(p.coeffs[1:]), "x")
    if y.degree <= 1:
        return binomial_series(y.coeff(1), order)
    out = [TPoly() for _ in range(order + 1)]
    ypow = Poly([1], "x")
    for k in range(order + 1):
        if k:
            ypow = (ypow * y).truncate(order)
        if ypow.is_zero():
            break
        ck = binomial_tpoly(k)
        for j, c in enumerate(ypow.coeffs):
            if c:
                out[j] = out[j] + ck * c
    return TSeries(out, order)
