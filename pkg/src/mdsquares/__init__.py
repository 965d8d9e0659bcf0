"""Squares in missing-digit subsets of finite fields: exact counts, bounds and proof diagnostics."""

from .bounds import bound_dms, bound_main, corollary1_check, corollary2_check, thresholds_prior
from .counting import CountReport, count_squares_enum, count_squares_identity
from .digit_space import (
    Basis,
    DigitSpec,
    StrataReport,
    decode,
    encode,
    enumerate_w,
    make_basis,
    make_digit_spec,
    polynomial_basis,
    stratify,
)
from .field_core import (
    FieldCtx,
    FieldElement,
    are_conjugate,
    arith,
    degree_over_prime,
    discrete_log,
    fe_inv,
    fe_pow,
    find_irreducible,
    frobenius,
    make_field,
    mult_char,
    quadratic_char,
)
from .proof_diagnostics import compute_chain, h_curve, s2_combinatorial_check, wan_lemma_sum

__version__ = "0.1.0"
