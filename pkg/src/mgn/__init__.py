"""Exact mixed kappa_1 / psi intersection numbers on moduli spaces of curves."""
from .coefficients import ZetaValue, a_coeff, bernoulli, beta_coeff, double_factorial, f_kernel_value
from .engine import Engine, compute_table, intersection_number, recursion_terms
from .keys import CorrelatorKey, KappaPsiKey, canonicalize, dimension_gap, is_stable, parse_key
from .volumes import PiGradedPoly, generating_function_coeffs, volume_at, volume_polynomial

__all__ = [
    "ZetaValue",
    "a_coeff",
    "bernoulli",
    "beta_coeff",
    "double_factorial",
    "f_kernel_value",
    "Engine",
    "compute_table",
    "intersection_number",
    "recursion_terms",
    "CorrelatorKey",
    "KappaPsiKey",
    "canonicalize",
    "dimension_gap",
    "is_stable",
    "parse_key",
    "PiGradedPoly",
    "generating_function_coeffs",
    "volume_at",
    "volume_polynomial",
]
