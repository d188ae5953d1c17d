"""Stieltjes moment sequences from discrete measures and their Hankel sections."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Union

import numpy as np

from .exact import as_fraction, format_rational, parse_rational
from .matrix import Matrix, det, hankel_from

__all__ = [
    "DiscreteMeasure",
    "Factorial",
    "LambdaSquare",
    "Explicit",
    "MomentSequence",
    "moments",
    "shifted_hankel",
    "StieltjesReport",
    "stieltjes_strict_check",
    "random_measure",
    "random_tn_hankel",
    "sequence_from_json",
    "sequence_to_json",
]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Positive point masses ``w`` at locations ``x >= 0``."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        atoms = tuple(sorted((as_fraction(x), as_fraction(w)) for x, w in self.atoms))
        if not atoms:
            raise ValueError("a measure needs at least one atom")
        for (x, w), nxt in zip(atoms, atoms[1:] + ((None, None),)):
            if x < 0:
                raise ValueError(f"atom location {x} is negative")
            if w <= 0:
                raise ValueError(f"atom weight {w} is not positive")
            if nxt[0] is not None and nxt[0] == x:
                raise ValueError(f"repeated atom location {x}")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def parse(cls, text: str) -> "DiscreteMeasure":
        """``"x:w,x:w,..."`` with rational literals."""
        atoms = []
        for part in text.split(","):
            x, _, w = part.partition(":")
            atoms.append((parse_rational(x), parse_rational(w or "1")))
        return cls(tuple(atoms))

    @property
    def support_size(self) -> int:
        return len(self.atoms)

    def moments(self, count: int) -> list[Fraction]:
        out = []
        powers = [Fraction(1)] * len(self.atoms)
        for _ in range(count):
            out.append(sum((w * p for (_, w), p in zip(self.atoms, powers)), Fraction(0)))
            powers = [p * x for (x, _), p in zip(self.atoms, powers)]
        return out

    def to_json(self) -> dict:
        return {"atoms": [{"x": format_rational(x), "w": format_rational(w)} for x, w in self.atoms]}

    @classmethod
    def from_json(cls, data: dict) -> "DiscreteMeasure":
        return cls(tuple((parse_rational(a["x"]), parse_rational(a["w"])) for a in data["atoms"]))


@dataclass(frozen=True)
class Factorial:
    """``a_k = k!`` (moments of ``e^{-x} dx``)."""

    def moments(self, count: int) -> list[Fraction]:
        return [Fraction(factorial(k)) for k in range(count)]


@dataclass(frozen=True)
class LambdaSquare:
    """``a_k = lam ** (k*k)`` with rational ``lam > 1``."""

    lam: Fraction

    def __post_init__(self):
        lam = as_fraction(self.lam)
        if lam <= 1:
            raise ValueError("LambdaSquare needs lam > 1")
        object.__setattr__(self, "lam", lam)

    def moments(self, count: int) -> list[Fraction]:
        return [self.lam ** (k * k) for k in range(count)]


@dataclass(frozen=True)
class Explicit:
    values: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def moments(self, count: int) -> list[Fraction]:
        if count > len(self.values):
            raise ValueError(f"explicit sequence has {len(self.values)} terms, {count} requested")
        return list(self.values[:count])


MomentSequence = Union[DiscreteMeasure, Factorial, LambdaSquare, Explicit]


def moments(seq: MomentSequence, count: int) -> list[Fraction]:
    if count < 1:
        raise ValueError("count must be at least 1")
    return seq.moments(count)


def shifted_hankel(seq: MomentSequence, n: int, shift: int = 0) -> Matrix:
    """``(a_{i+j+shift})`` for ``0 <= i, j < n``."""
    if shift < 0:
        raise ValueError("shift must be nonnegative")
    a = moments(seq, 2 * n - 1 + shift)
    return hankel_from(a[shift:], n)


@dataclass(frozen=True)
class StieltjesReport:
    depth: int
    deltas: tuple[Fraction, ...]
    shifted_deltas: tuple[Fraction, ...]
    strict: bool
    first_failure: str | None

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "deltas": [format_rational(d) for d in self.deltas],
            "shifted_deltas": [format_rational(d) for d in self.shifted_deltas],
            "strict": self.strict,
            "first_failure": self.first_failure,
        }


def stieltjes_strict_check(seq: MomentSequence, depth: int) -> StieltjesReport:
    """Leading Hankel determinants ``det H_k^(0)`` and ``det H_k^(1)``, ``k <= depth``.

    All positive iff the Hankel section of size ``depth`` is TP.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    a = moments(seq, 2 * depth)
    d0 = tuple(det(hankel_from(a, k)) for k in range(1, depth + 1))
    d1 = tuple(det(hankel_from(a[1:], k)) for k in range(1, depth + 1))
    failure = None
    for k in range(depth):
        if d0[k] <= 0:
            failure = f"Delta_{k + 1}"
            break
        if d1[k] <= 0:
            failure = f"Delta'_{k + 1}"
            break
    return StieltjesReport(depth, d0, d1, failure is None, failure)


def random_measure(atom_count: int, rng: np.random.Generator) -> DiscreteMeasure:
    """Atoms at distinct multiples of 1/10 in (0, 10], weights multiples of 1/10 in (0, 5]."""
    if atom_count < 1:
        raise ValueError("atom_count must be at least 1")
    xs = rng.choice(np.arange(1, 101), size=atom_count, replace=False)
    ws = rng.integers(1, 51, size=atom_count)
    return DiscreteMeasure(tuple((Fraction(int(x), 10), Fraction(int(w), 10)) for x, w in zip(xs, ws)))


def random_tn_hankel(n: int, atom_count: int, seed=None, shift: int = 0) -> Matrix:
    """Hankel section of a random ``atom_count``-atom measure.

    Always TN; TP when ``atom_count >= n`` and rank ``min(n, atom_count)``.
    ``seed`` may be an int or a numpy Generator.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return shifted_hankel(random_measure(atom_count, rng), n, shift)


def sequence_to_json(seq: MomentSequence) -> dict:
    if isinstance(seq, DiscreteMeasure):
        return {"kind": "measure", **seq.to_json()}
    if isinstance(seq, Factorial):
        return {"kind": "factorial"}
    if isinstance(seq, LambdaSquare):
        return {"kind": "lambda_square", "lambda": format_rational(seq.lam)}
    return {"kind": "explicit", "values": [format_rational(v) for v in seq.values]}


def sequence_from_json(data: dict) -> MomentSequence:
    kind = data.get("kind")
    if kind == "measure":
        return DiscreteMeasure.from_json(data)
    if kind == "factorial":
        return Factorial()
    if kind == "lambda_square":
        return LambdaSquare(parse_rational(data["lambda"]))
    if kind == "explicit":
        return Explicit(tuple(parse_rational(v) for v in data["values"]))
    raise ValueError(f"unknown sequence kind {kind!r}")
