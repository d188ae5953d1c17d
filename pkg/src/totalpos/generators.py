"""Seeded random generators for TN, TP, TN_2 and Hankel test matrices.

All generators take a ``numpy.random.Generator`` and return exact matrices.
Positivity comes from construction, not from rejection sampling:

* products of elementary bidiagonal matrices with nonnegative parameters
  are TN (and every TN matrix is such a product with a positive diagonal
  factor, up to limits);
* ``q ** (x_i * y_j)`` with increasing ``x``, ``y`` is a generalized
  Vandermonde matrix and hence TP;
* ``2 ** phi(i, j)`` is TN_2 exactly when ``phi`` is supermodular;
* ``L D L^T`` with ``L`` a TN lower-triangular product is symmetric TN.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .matrix import Matrix, hankel_from, identity, submatrix
from .moments import random_measure, shifted_hankel

__all__ = [
    "random_rational",
    "elementary_lower",
    "elementary_upper",
    "random_tn",
    "random_tp",
    "random_tn2",
    "random_symmetric_tn",
    "random_tridiagonal_tn",
    "random_hankel",
    "random_moment_hankel",
    "random_matrix",
    "random_positive",
    "random_rectangular",
]


def random_rational(rng: np.random.Generator, lo: int = 0, hi: int = 4, den: int = 2) -> Fraction:
    """A uniform element of ``{k/den : lo*den <= k <= hi*den}``."""
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def elementary_lower(n: int, i: int, a) -> Matrix:
    """Identity plus ``a`` at 0-based position ``(i+1, i)``."""
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    rows[i + 1][i] = Fraction(a)
    return Matrix(rows)


def elementary_upper(n: int, i: int, a) -> Matrix:
    return elementary_lower(n, i, a).T


def _whitney_product(n: int, params, lower: bool) -> Matrix:
    """Bidiagonal product in the Whitney order; ``params`` supplies one value per factor."""
    M = identity(n)
    it = iter(params)
    for k in range(n - 1):
        for i in range(n - 2, k - 1, -1):
            E = elementary_lower(n, i, next(it)) if lower else elementary_upper(n, i, next(it))
            M = M @ E
    return M


def random_tn(n: int, rng: np.random.Generator, zero_prob: float = 0.3) -> Matrix:
    """``L D U`` with nonnegative bidiagonal parameters; some set to zero."""
    count = n * (n - 1) // 2

    def params():
        return [Fraction(0) if rng.random() < zero_prob else random_rational(rng, 0, 3) for _ in range(count)]

    d = [Fraction(0) if rng.random() < zero_prob / 3 else random_rational(rng, 1, 3) for _ in range(n)]
    L = _whitney_product(n, params(), lower=True)
    U = _whitney_product(n, params(), lower=False)
    D = Matrix([[d[i] if i == j else 0 for j in range(n)] for i in range(n)])
    return L @ D @ U


def random_tp(n: int, rng: np.random.Generator) -> Matrix:
    """Generalized Vandermonde ``q ** (x_i * y_j)`` with increasing integer ``x``, ``y``."""
    q = Fraction(int(rng.integers(3, 6)), 2)
    x = np.sort(rng.choice(np.arange(0, 6), size=n, replace=False))
    y = np.sort(rng.choice(np.arange(0, 6), size=n, replace=False))
    return Matrix([[q ** int(xi * yj) for yj in y] for xi in x])


def random_tn2(m: int, n: int, rng: np.random.Generator) -> Matrix:
    """``2 ** phi`` with ``phi(i,j) = f(i) + g(j) + sum of nonnegative mixed increments``."""
    f = rng.integers(-2, 3, size=m)
    g = rng.integers(-2, 3, size=n)
    c = rng.integers(0, 2, size=(m, n))
    phi = np.zeros((m, n), dtype=int)
    for i in range(m):
        for j in range(n):
            phi[i, j] = f[i] + g[j] + int(c[1 : i + 1, 1 : j + 1].sum())
    return Matrix([[Fraction(2) ** int(phi[i, j]) for j in range(n)] for i in range(m)])


def random_symmetric_tn(n: int, rng: np.random.Generator, zero_prob: float = 0.3) -> Matrix:
    count = n * (n - 1) // 2
    params = [Fraction(0) if rng.random() < zero_prob else random_rational(rng, 0, 3) for _ in range(count)]
    L = _whitney_product(n, params, lower=True)
    D = Matrix([[random_rational(rng, 1, 3) if i == j else 0 for j in range(n)] for i in range(n)])
    return L @ D @ L.T


def random_tridiagonal_tn(n: int, rng: np.random.Generator) -> Matrix:
    """``L D U`` with a single lower and a single upper bidiagonal factor."""
    L, U = identity(n), identity(n)
    for i in range(n - 1):
        L = L @ elementary_lower(n, i, random_rational(rng, 0, 3))
        U = elementary_upper(n, i, random_rational(rng, 0, 3)) @ U
    D = Matrix([[random_rational(rng, 1, 3) if i == j else 0 for j in range(n)] for i in range(n)])
    return L @ D @ U


def random_moment_hankel(n: int, rng: np.random.Generator, shift: int | None = None) -> Matrix:
    """Hankel section of a random discrete measure (TN; TP when atoms >= n)."""
    atoms = int(rng.integers(1, n + 2))
    shift = int(rng.integers(0, 2)) if shift is None else shift
    return shifted_hankel(random_measure(atoms, rng), n, shift)


def random_hankel(n: int, rng: np.random.Generator) -> Matrix:
    """A mix of moment Hankels, perturbed moment Hankels and arbitrary positive ones.

    The mix gives every TN_r / TP_r order a fair chance of appearing.
    """
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return random_moment_hankel(n, rng)
    if kind == 3:
        seq = [Fraction(int(rng.integers(0, 6))) for _ in range(2 * n - 1)]
        return hankel_from(seq, n)
    H = random_moment_hankel(n, rng)
    seq = [H[0, 0]] + [H[0, j] for j in range(1, n)] + [H[i, n - 1] for i in range(1, n)]
    k = int(rng.integers(0, 2 * n - 1))
    seq[k] = seq[k] + random_rational(rng, -2 if kind == 1 else 0, 2)
    return hankel_from(seq, n)


def random_matrix(m: int, n: int, rng: np.random.Generator, lo: int = -1, hi: int = 4) -> Matrix:
    return Matrix([[random_rational(rng, lo, hi, 1) for _ in range(n)] for _ in range(m)])


def random_positive(m: int, n: int, rng: np.random.Generator) -> Matrix:
    return Matrix([[random_rational(rng, 1, 5, 1) for _ in range(n)] for _ in range(m)])


def random_rectangular(rng: np.random.Generator, max_size: int = 5, min_size: int = 2) -> Matrix:
    """A random matrix for criterion testing: TP, TP with one entry nudged, TN, or arbitrary."""
    m = int(rng.integers(min_size, max_size + 1))
    n = int(rng.integers(min_size, max_size + 1))
    N = max(m, n)
    kind = int(rng.integers(0, 4))
    if kind in (0, 1):
        A = random_tp(N, rng)
        if kind == 1:
            i, j = int(rng.integers(0, N)), int(rng.integers(0, N))
            rows = [list(r) for r in A.rows]
            rows[i][j] = rows[i][j] * random_rational(rng, 0, 2, 4)
            A = Matrix(rows)
    elif kind == 2:
        A = random_tn(N, rng, zero_prob=0.1)
    else:
        A = random_matrix(N, N, rng, 0, 4)
    I = sorted(rng.choice(np.arange(1, N + 1), size=m, replace=False))
    J = sorted(rng.choice(np.arange(1, N + 1), size=n, replace=False))
    return submatrix(A, [int(i) for i in I], [int(j) for j in J])
