"""Optimal polynomial approximants in the Hardy space of the bidisk, in exact arithmetic."""

__version__ = "0.1.0"

from .gaussian import GaussianRational
from .poly2 import BiPoly, W, Z, chi_exponents, chi_index, inner_product, reflect
from .opa import OpaResult, OptimalSystem, build_optimal_system, solve_opa
from .zeros import ClassifyConfig, StabilityReport, Verdict, classify_bidisk

__all__ = [
    "GaussianRational",
    "BiPoly",
    "Z",
    "W",
    "chi_index",
    "chi_exponents",
    "inner_product",
    "reflect",
    "OptimalSystem",
    "OpaResult",
    "build_optimal_system",
    "solve_opa",
    "ClassifyConfig",
    "StabilityReport",
    "Verdict",
    "classify_bidisk",
]
