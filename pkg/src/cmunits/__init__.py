"""Class invariants of imaginary quadratic fields from Siegel functions.

Values are rigorous ball enclosures; exact algebraic data (forms, matrices,
recognized polynomials) are plain integers.
"""

from .numerics import ComplexBall, PrecisionError, QuadSurd, RealBall
from .quadforms import BQF, class_number, reduced_forms, theta_K
from .siegel import SiegelIndex, eval_gamma2, eval_j, eval_siegel

__version__ = "0.1.0"

__all__ = [
    "ComplexBall",
    "PrecisionError",
    "QuadSurd",
    "RealBall",
    "BQF",
    "class_number",
    "reduced_forms",
    "theta_K",
    "SiegelIndex",
    "eval_gamma2",
    "eval_j",
    "eval_siegel",
]
