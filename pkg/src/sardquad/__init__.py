"""Sard-optimal quadrature for Fourier integrals in W2^(2,1)[a, b]."""

from .coefficients import (
    CoefficientSet,
    Interval,
    Regime,
    classify,
    coeffs_interval,
    coeffs_unit_generic,
    coeffs_unit_resonant,
    coeffs_unit_zero,
)
from .kernel import KernelContext, lambda1
from .oracle import assemble, compare, solve, solve_interval
from .quadrature import apply, error_R, optimal_coefficients, reference_exact, sweep

__all__ = [
    "CoefficientSet",
    "Interval",
    "KernelContext",
    "Regime",
    "apply",
    "assemble",
    "classify",
    "coeffs_interval",
    "coeffs_unit_generic",
    "coeffs_unit_resonant",
    "coeffs_unit_zero",
    "compare",
    "error_R",
    "lambda1",
    "optimal_coefficients",
    "reference_exact",
    "solve",
    "solve_interval",
    "sweep",
]

__version__ = "0.1.0"
