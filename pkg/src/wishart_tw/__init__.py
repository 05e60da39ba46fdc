"""Tracy-Widom approximations for extreme eigenvalues of white Wishart matrices."""

from .errors import DomainError, NumericError, TableRangeError
from .scaling import (
    LgFrame,
    ScalePair,
    Variant,
    beta_N,
    delta_N,
    johnstone_constants,
    lg_parameters,
    log_constants,
    rho_factors,
    rmt_constants,
    second_order_constants,
    smallest_log_constants,
)
from .twlimit import largest_pvalue, reflected_cdf, smallest_pvalue, tw_cdf, tw_pdf, tw_quantile

__all__ = [
    "DomainError", "NumericError", "TableRangeError",
    "LgFrame", "ScalePair", "Variant",
    "beta_N", "delta_N", "johnstone_constants", "lg_parameters", "log_constants",
    "rho_factors", "rmt_constants", "second_order_constants", "smallest_log_constants",
    "largest_pvalue", "reflected_cdf", "smallest_pvalue", "tw_cdf", "tw_pdf", "tw_quantile",
]

__version__ = "0.1.0"
