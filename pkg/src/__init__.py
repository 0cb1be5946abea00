"""
Tensor GMP - Source Package

Low-complexity power-amplifier behavioral models: full GMP, GMP-CP, GMP-TT
and GMP-Tucker, their identification (ridge, LASSO, ALS, RP-ALS), the
synthetic signal lab and the evaluation suite.
"""

__version__ = "1.0.0"

from .models import get_model_class, list_models
from .identification import get_solver, list_solvers, identify

__all__ = [
    'get_model_class',
    'list_models',
    'get_solver',
    'list_solvers',
    'identify',
]
