"""Non-integer Hadamard powers: certified signs below the critical exponent."""

from fractions import Fraction

from totalpos.catalog import case_matrix, fh_matrix
from totalpos.exppoly import (
    classify_power,
    count_roots_certified,
    laguerre_bound,
    minor_exppoly,
    sign_at,
)

# the 3x3 moment Hankel matrix of 1^n + 2^n
A = case_matrix("exam_jw")
f = minor_exppoly(A)
print("det(A^t) =", f)
print("sign-change bound:", laguerre_bound(f))

roots = count_roots_certified(f, -1, 3)
for r in roots.roots:
    print(f"  root at {r.lo}, multiplicity {r.multiplicity}")
print("all roots accounted for:", roots.complete)

for t in (Fraction(1, 4), Fraction(1, 2), 2):
    cert = sign_at(f, t)
    print(f"  t={t}: sign {cert.sign:+d} ({cert.method}, {cert.precision_bits} bits)")

# rank-two family, n = 4: PSD fails at non-integer t < 2, holds from t = 2 on
M = fh_matrix([1, 2, 4, 8], Fraction(1, 10**4))
for k in range(1, 13):
    t = Fraction(k, 4)
    c = classify_power(M, t)
    print(f"  t={str(t):>4}  TN: {c.is_tn}")
