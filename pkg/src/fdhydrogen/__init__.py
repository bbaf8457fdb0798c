"""Exact entire solutions of the discretised hydrogen equation and their spectral applications."""

from .closed_form import ClosedFormSolution, alpha_factors, coefficients, decay_rate, eigenvalue, evaluate, grid_samples, solve
from .exactfield import QuadNumber, quad_arith, quad_is_zero, quad_to_float

__all__ = [
    "ClosedFormSolution",
    "QuadNumber",
    "alpha_factors",
    "coefficients",
    "decay_rate",
    "eigenvalue",
    "evaluate",
    "grid_samples",
    "quad_arith",
    "quad_is_zero",
    "quad_to_float",
    "solve",
]
