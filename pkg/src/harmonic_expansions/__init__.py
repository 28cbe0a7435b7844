"""Exact coefficients and certified error bounds for asymptotic expansions of H_n."""
from .approximations import (
    EvalReport,
    FormulaId,
    SequencePoint,
    asymptotic_error_ratio,
    eval_formula,
    sequence_value,
    theta_r,
)
from .coefficients import (
    detemple_wang_coefficient,
    euler_term,
    ramanujan_coefficient,
    ramanujan_coefficient_umbral,
    ramanujan_from_dw_transform,
)
from .exactmath import (
    DensePolynomial,
    LaurentPolynomial,
    bernoulli_number,
    bernoulli_poly_at_half,
    harmonic_exact,
)
from .precision import (
    Enclosure,
    PrecisionConfig,
    PrecisionExhausted,
    digamma_enclosure,
    euler_gamma,
    ln_enclosure,
    trigamma_enclosure,
)
from .verification import VerificationReport, run_suite

__version__ = "0.1.0"
