"""Exact linear algebra over Q and certified real algebraic numbers."""

from .algebraic import AlgebraicReal, algebraic_equal
from .jordan import (
    AbsoluteJordanForm,
    RealJordanData,
    absolute_jordan_form,
    ajf_power,
    block_structure,
    char_poly,
    factor_squarefree_irreducible,
    modulus_of_root_class,
    real_jordan_data,
)
from .matrix import RationalMatrix
from .poly import IntPolynomial

__all__ = [
    "AbsoluteJordanForm",
    "AlgebraicReal",
    "IntPolynomial",
    "RationalMatrix",
    "RealJordanData",
    "absolute_jordan_form",
    "ajf_power",
    "algebraic_equal",
    "block_structure",
    "char_poly",
    "factor_squarefree_irreducible",
    "modulus_of_root_class",
    "real_jordan_data",
]
