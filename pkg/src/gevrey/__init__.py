"""Exact computations around Gevrey series, holonomic operators and q-analogues."""

from .exact import PAdicValue, QContext, legendre_valuation, q_factorial, q_factorial_valuation, valuation
from .poly import Poly, RationalFunction
from .series import FormalSeries, GevreySeries, borel_normalize, divide_linear, laplace_denormalize
from .weyl import DiffOp, apply_op, borel_transfer, newton_polygon, trivial_singularity_check

__all__ = [
    "DiffOp",
    "FormalSeries",
    "GevreySeries",
    "PAdicValue",
    "Poly",
    "QContext",
    "RationalFunction",
    "apply_op",
    "borel_normalize",
    "borel_transfer",
    "divide_linear",
    "laplace_denormalize",
    "legendre_valuation",
    "newton_polygon",
    "q_factorial",
    "q_factorial_valuation",
    "trivial_singularity_check",
    "valuation",
]
