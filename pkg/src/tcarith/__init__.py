"""Exact-arithmetic reductions, generalized Catalan numbers, inversion series with
certified error bounds, and a residue-class normalizer for bounded formulas."""

from .catalan import DegreeVector, catalan, count_trees_oracle
from .divpow import divide_via_powers, powers_via_division
from .errors import (
    BudgetExceeded, CertificateError, ConvergenceDomainError, FormulaSyntaxError,
    NormalizationFailed, PreconditionError, ShapeError, TcArithError,
)
from .exact import ExactInt, ExactRat, format_rat, parse_rat
from .lif import LifSeries, PartialSumCertificate, lif_coefficients, partial_sum_root
from .poly import Polynomial
from .roots import RootCertificate, SignChangeInterval, approx_root, hensel_normalize, refine_sign_change

__all__ = [
    "BudgetExceeded", "CertificateError", "ConvergenceDomainError", "DegreeVector", "ExactInt",
    "ExactRat", "FormulaSyntaxError", "LifSeries", "NormalizationFailed", "PartialSumCertificate",
    "Polynomial", "PreconditionError", "RootCertificate", "ShapeError", "SignChangeInterval",
    "TcArithError", "approx_root", "catalan", "count_trees_oracle", "divide_via_powers",
    "format_rat", "hensel_normalize", "lif_coefficients", "parse_rat", "partial_sum_root",
    "powers_via_division", "refine_sign_change",
]
