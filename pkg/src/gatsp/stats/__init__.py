from .anova import AnovaRow, AnovaTable, anova, factorial_anova
from .contrasts import TrendRow, orthogonal_polynomial_coefficients, trend_contrasts
from .distributions import (
    f_sf,
    studentized_range_cdf,
    studentized_range_quantile,
)
from .dmrt import DmrtGrouping, assign_letters, dmrt, duncan_ranges

__all__ = [
    "AnovaRow",
    "AnovaTable",
    "anova",
    "factorial_anova",
    "TrendRow",
    "orthogonal_polynomial_coefficients",
    "trend_contrasts",
    "f_sf",
    "studentized_range_cdf",
    "studentized_range_quantile",
    "DmrtGrouping",
    "assign_letters",
    "dmrt",
    "duncan_ranges",
]
