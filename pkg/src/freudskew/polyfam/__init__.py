"""Polynomial arithmetic and the polynomial families of the Freud system."""
from .poly import Poly, X
from .families import (
    PolyFamily, apply_nbar, build_P, build_Q, fold_to_laguerre,
    laguerre_three_point_residual, structure_relation_residual,
)
from .closed import (
    closed_even_residual, closed_laguerre_even_residual,
    closed_laguerre_odd_residual, closed_odd_residual,
)
from .hermite import build_hermite, hermite_closed_residuals
from .kernels import biorthogonal_kernel_check, kernel_gram
from .products import cross_gram, laguerre_gram, skew_gram, skew_scale, sym_gram

__all__ = [
    "Poly", "X", "PolyFamily", "apply_nbar", "build_P", "build_Q", "fold_to_laguerre",
    "laguerre_three_point_residual", "structure_relation_residual",
    "closed_even_residual", "closed_laguerre_even_residual",
    "closed_laguerre_odd_residual", "closed_odd_residual",
    "build_hermite", "hermite_closed_residuals", "biorthogonal_kernel_check", "kernel_gram",
    "cross_gram", "laguerre_gram", "skew_gram", "skew_scale", "sym_gram",
]
