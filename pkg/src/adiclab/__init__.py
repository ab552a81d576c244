"""Exact truncated realizations of the shift algebras on the s-adic tree."""

from .sadic import Ball, LCFunction, TreeFunction, ball_children
from .scalars import QuadScalar, inv_sqrt
from .operators import SparseOperator, identity, zero
from .shifts import ShiftKind, make_shift, make_shift_adjoint, make_mult
from .grading import expectation, fourier_coeff, graded
from .ktheory import IntMatrix, KClass, phi_matrix, rewrite_oracle, snf
from .exprlang import check_text, eval_text, parse, print_expr

__all__ = [
    "Ball",
    "LCFunction",
    "TreeFunction",
    "ball_children",
    "QuadScalar",
    "inv_sqrt",
    "SparseOperator",
    "identity",
    "zero",
    "ShiftKind",
    "make_shift",
    "make_shift_adjoint",
    "make_mult",
    "expectation",
    "fourier_coeff",
    "graded",
    "IntMatrix",
    "KClass",
    "phi_matrix",
    "rewrite_oracle",
    "snf",
    "check_text",
    "eval_text",
    "parse",
    "print_expr",
]

__version__ = "0.1.0"
