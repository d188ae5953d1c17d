"""Classifying small matrices, and why contiguous minors are not enough for TN."""

from totalpos import classify, classify_brute
from totalpos.catalog import case_matrix
from totalpos.classify import gp_failure, is_tpr_fekete
from totalpos.matrix import Matrix, identity, ones

# a Vandermonde matrix with increasing nodes is TP
V = Matrix([[1, 1, 1], [1, 2, 4], [1, 3, 9]])
print(V)
print("orders (tp, tn):", classify_brute(V).orders())
print("initial minors certify TP:", gp_failure(V) is None)

# identity: TN but not even TP_1 (off-diagonal zeros)
c = classify_brute(identity(3))
print("identity:", c.orders(), "first failing minor", c.tp_witness.rows, c.tp_witness.cols)

# every contiguous minor of this one is >= 0 but it is not TN_2
A = case_matrix("cryer_a")
print(A)
c = classify_brute(A)
w = c.tn_witness
print(f"tn_order {c.tn_order}, minor rows {w.rows} cols {w.cols} = {w.value}")

# the strict criteria are still exact for TP_r
print("contiguous test, TP_2:", is_tpr_fekete(A, 2), "| brute force:", c.is_tp_r(2))

# I + J: both TN, the sum is not TN_2
S = identity(3) + ones(3)
print("I + J orders:", classify_brute(S).orders())

# Hankel input is dispatched to the principal-minor test
H = Matrix([[2, 3, 5], [3, 5, 9], [5, 9, 17]])
print("moment Hankel:", classify(H).orders())
