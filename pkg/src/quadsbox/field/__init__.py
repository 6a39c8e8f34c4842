"""
Finite field core for GF(2^n), n = 2m.

This module provides the field arithmetic (scalar and vectorized), the
conjugation x -> x^(2^m), absolute and subfield traces, and the
GF(2)-linear solvers for linearized, quadratic and Artin-Schreier equations.
"""

from .field_spec import (
    FieldElement,
    FieldSpec,
    get_field_spec,
    is_irreducible,
    smallest_irreducible,
    validate_parameters,
)
from .linear import (
    LinearizedOperator,
    SolutionSet,
    solve_artin_schreier,
    solve_linearized,
    solve_quadratic,
)
from .encoding import element_from_hex, element_to_hex, tuple_from_text, tuple_to_text

__all__ = [
    "FieldElement",
    "FieldSpec",
    "get_field_spec",
    "is_irreducible",
    "smallest_irreducible",
    "validate_parameters",
    "LinearizedOperator",
    "SolutionSet",
    "solve_artin_schreier",
    "solve_linearized",
    "solve_quadratic",
    "element_from_hex",
    "element_to_hex",
    "tuple_from_text",
    "tuple_to_text",
]
