"""Entrywise products and powers that leave the TN class."""

from totalpos import classify_brute
from totalpos.catalog import case_matrix
from totalpos.hadamard import (
    SYMBOLIC_T,
    check_product_closure,
    hadamard_power,
    hadamard_power_int,
    hadamard_product,
)
from totalpos.matrix import det, minor

# W and its transpose are TN, their entrywise product is not
W = case_matrix("hadamard3asym", "W")
P = hadamard_product(W, W.T)
print(P)
print("det:", det(P))

rep = check_product_closure(W, W.T)
print("observed failure:", rep.observed_failure, "| covered by a closure result:", rep.applicable or "none")

# symmetric is not enough at size 4
A, B = case_matrix("hadamard4sym", "A"), case_matrix("hadamard4sym", "B")
print("upper-right 3x3 minor of A o B:", minor(hadamard_product(A, B), (1, 2, 3), (2, 3, 4)))

# a TP matrix whose entrywise square has negative determinant
F = case_matrix("fallat07")
print("TP:", classify_brute(F).is_tp, "| det of square:", det(hadamard_power_int(F, 2)))

# over Q[x]: exact polynomial determinant, then a symbolic power t
G = case_matrix("hadamard4asym")
print("det(G o G) =", det(hadamard_power_int(G, 2)))
d = det(hadamard_power(G, SYMBOLIC_T, order=4))
print("x^4 coefficient of det(G^t):", d.coeff(4))
