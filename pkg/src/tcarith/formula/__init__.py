"""Bounded formulas with truncated subtraction and halving: parsing, residue normal
form, sign-invariant breakpoints and minimization."""

from .ast import FormulaAst, compile_formula
from .minsat import min_sat, min_sat_report
from .normal import ResidueNormalForm, normalize_formula, normalize_term
from .parser import parse
from .signs import SignDecomposition, sign_decompose

__all__ = [
    "FormulaAst", "ResidueNormalForm", "SignDecomposition", "compile_formula", "min_sat",
    "min_sat_report", "normalize_formula", "normalize_term", "parse", "sign_decompose",
]
