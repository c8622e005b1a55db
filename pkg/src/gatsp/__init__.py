"""gatsp: a permutation-GA experiment lab.

Generates maximization TSP instances with a planted known optimum, runs
factorial sweeps of GA operator/parameter combinations measuring offline
performance, and analyzes the results with factorial ANOVA, trend contrasts
and Duncan's multiple range test.
"""

__version__ = "0.1.0"

from .backend import BACKEND
from .engine import (
    GaConfig,
    NoveltyCounters,
    RunResult,
    cx,
    inversion_mutate,
    offline_performance,
    online_performance,
    pmx,
    rsis_select,
    run_ga,
    sus_select,
)
from .experiment import (
    PRESETS,
    Design,
    RunRecord,
    RunTable,
    build_design,
    read_runs,
    run_sweep,
    write_runs,
)
from .instance import (
    TspInstance,
    brute_force_optimum,
    build_profit_matrix,
    fitness,
    generate_instance,
    read_instance,
    write_instance,
)
from .stats import (
    AnovaTable,
    DmrtGrouping,
    anova,
    dmrt,
    f_sf,
    factorial_anova,
    orthogonal_polynomial_coefficients,
    studentized_range_quantile,
    trend_contrasts,
)

__all__ = [
    "BACKEND",
    "__version__",
    "GaConfig",
    "NoveltyCounters",
    "RunResult",
    "cx",
    "inversion_mutate",
    "offline_performance",
    "online_performance",
    "pmx",
    "rsis_select",
    "run_ga",
    "sus_select",
    "PRESETS",
    "Design",
    "RunRecord",
    "RunTable",
    "build_design",
    "read_runs",
    "run_sweep",
    "write_runs",
    "TspInstance",
    "brute_force_optimum",
    "build_profit_matrix",
    "fitness",
    "generate_instance",
    "read_instance",
    "write_instance",
    "AnovaTable",
    "DmrtGrouping",
    "anova",
    "dmrt",
    "f_sf",
    "factorial_anova",
    "orthogonal_polynomial_coefficients",
    "studentized_range_quantile",
    "trend_contrasts",
]
