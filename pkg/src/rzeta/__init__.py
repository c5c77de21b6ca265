"""Riemann zeta and digit-restricted Dirichlet series from moment recurrences."""
from .digitset import DigitSet, parse_digit_spec
from .errors import (
    BoundaryError,
    DigitSpecError,
    DomainError,
    PrecisionError,
    RZetaError,
    UnsupportedConfiguration,
)
from .moments import build_moment_table, moment_closed_form
from .numerics import ComplexParameter, PrecisionContext
from .oracle import restricted_sum_bracket, zeta_reference
from .series import SeriesResult, evaluate_series, plan_terms

__version__ = "0.1.0"

__all__ = [
    "DigitSet",
    "parse_digit_spec",
    "ComplexParameter",
    "PrecisionContext",
    "build_moment_table",
    "moment_closed_form",
    "evaluate_series",
    "plan_terms",
    "SeriesResult",
    "zeta_reference",
    "restricted_sum_bracket",
    "RZetaError",
    "DigitSpecError",
    "DomainError",
    "BoundaryError",
    "UnsupportedConfiguration",
    "PrecisionError",
]
