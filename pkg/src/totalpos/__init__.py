"""Exact total positivity and total nonnegativity of matrices.

Entries are rationals (:class:`fractions.Fraction`), polynomials in ``x``,
or truncated power series in ``x`` with coefficients in Q[t].  Minors are
computed exactly; signs of Hadamard powers at non-integer exponents are
certified with interval arithmetic.
"""

from .classify import (
    Classification,
    Criterion,
    NotHankelError,
    Witness,
    classify,
    classify_brute,
    classify_hankel,
    factorial_hankel,
    is_additive_core,
    is_tp_gp,
    is_tpr_fekete,
    is_tpr_mixed,
    perturb_to_tp,
)
from .exact import Poly, TPoly, TSeries, format_rational, parse_rational
from .exppoly import (
    ExpPoly,
    RootReport,
    SignCertificate,
    SignUndetermined,
    classify_power,
    count_roots_certified,
    laguerre_bound,
    minor_exppoly,
    sign_at,
)
from .hadamard import (
    ClosureReport,
    check_power_closure,
    check_product_closure,
    check_sum_closure,
    check_tn2_product,
    hadamard_power,
    hadamard_product,
)
from .matrix import DimensionError, Matrix, det, hankel_from, is_hankel, minor, submatrix
from .moments import DiscreteMeasure, Explicit, Factorial, LambdaSquare, shifted_hankel, stieltjes_strict_check

__version__ = "0.1.0"

__all__ = [
    "Classification", "Criterion", "NotHankelError", "Witness",
    "classify", "classify_brute", "classify_hankel", "factorial_hankel",
    "is_additive_core", "is_tp_gp", "is_tpr_fekete", "is_tpr_mixed", "perturb_to_tp",
    "Poly", "TPoly", "TSeries", "format_rational", "parse_rational",
    "ExpPoly", "RootReport", "SignCertificate", "SignUndetermined",
    "classify_power", "count_roots_certified", "laguerre_bound", "minor_exppoly", "sign_at",
    "ClosureReport", "check_power_closure", "check_product_closure", "check_sum_closure",
    "check_tn2_product", "hadamard_power", "hadamard_product",
    "DimensionError", "Matrix", "det", "hankel_from", "is_hankel", "minor", "submatrix",
    "DiscreteMeasure", "Explicit", "Factorial", "LambdaSquare", "shifted_hankel",
    "stieltjes_strict_check",
]
