"""Exact arithmetic: polynomials, rational functions and truncated series."""

from .poly import Polynomial, RationalFunction
from .series import (
    CohomologySeries,
    DifferentialOperator,
    HPoly,
    LogSeries,
    ZLaurent,
    expand_prefactor,
    frac_str,
)

__all__ = [
    "CohomologySeries",
    "DifferentialOperator",
    "HPoly",
    "LogSeries",
    "Polynomial",
    "RationalFunction",
    "ZLaurent",
    "expand_prefactor",
    "frac_str",
]
