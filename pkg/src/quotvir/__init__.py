"""Exact computation of virtual invariants of Quot schemes of surfaces."""

__version__ = "0.1.0"

from .errors import DataError, QuotvirError
from .series import TruncatedSeries, series_compose, series_exp, series_log, series_pow, series_revert
from .polynomial import IntersectionPolynomial, parse_polynomial, register_symbol
from .resultant import UniPoly, resultant
from .invariants import (
    QuotSetup,
    chi_vir_series,
    euler_top_series,
    gottsche_series,
    hilb_virtual_series_r1,
    pairwise_shift_product,
    segre_integral_series,
    segre_line_series,
)
from .chow import Bundle, ProjectiveBundle, quot1_virtual_integral, verify_rank_reduction_l1
from .universal import (
    UniversalSeries,
    collapse_universal_polynomial,
    eliminate_twist_exponent,
    universal_evaluate,
    universal_extract,
)

__all__ = [
    "DataError",
    "QuotvirError",
    "TruncatedSeries",
    "series_compose",
    "series_exp",
    "series_log",
    "series_pow",
    "series_revert",
    "IntersectionPolynomial",
    "parse_polynomial",
    "register_symbol",
    "UniPoly",
    "resultant",
    "QuotSetup",
    "chi_vir_series",
    "euler_top_series",
    "gottsche_series",
    "hilb_virtual_series_r1",
    "pairwise_shift_product",
    "segre_integral_series",
    "segre_line_series",
    "Bundle",
    "ProjectiveBundle",
    "quot1_virtual_integral",
    "verify_rank_reduction_l1",
    "UniversalSeries",
    "collapse_universal_polynomial",
    "eliminate_twist_exponent",
    "universal_evaluate",
    "universal_extract",
]
