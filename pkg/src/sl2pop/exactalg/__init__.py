"""Exact arithmetic over the rationals and over quotient rings Q[t]/(q)."""

from fractions import Fraction as Rat

from .laurent import LaurentSlice, PoleTooHigh, center_modulus, laurent_expand, taylor_coeffs
from .linalg import LinearSolution, NoSolution, bareiss_det, linear_solve, nullspace
from .poly import Poly, X, as_fraction, format_poly
from .quotient import QRE, QuotientRingElement, SplitRequired
from .ratfunc import RationalFunction, logderiv
from .roots import NonConvergence, roots_numeric
from .wronskian import antiderivative, wronskian2, wronskian_n

__all__ = [
    "Rat", "Poly", "X", "as_fraction", "format_poly",
    "RationalFunction", "logderiv",
    "QuotientRingElement", "QRE", "SplitRequired",
    "LaurentSlice", "PoleTooHigh", "laurent_expand", "taylor_coeffs", "center_modulus",
    "LinearSolution", "NoSolution", "linear_solve", "nullspace", "bareiss_det",
    "NonConvergence", "roots_numeric",
    "wronskian2", "wronskian_n", "antiderivative",
]
