"""Change point tests based on weighted L^p functionals of the CUSUM process."""

from ._version import __version__
from .cusum import (
    CusumPath,
    Family,
    StatisticValue,
    as_time_series,
    compute_cusum,
    darling_erdos_statistic,
    lp_statistic,
    renyi_statistic,
)
from .limits import (
    ConstantsPair,
    LimitSample,
    analytic_darling_erdos,
    compute_a,
    compute_b,
    critical_value,
    p_value,
    sample_brownian_bridge,
    sample_fb,
    sample_limit_general,
)
from .simulate import (
    AR1,
    MA,
    BernoulliShiftAR,
    ChangeSpec,
    IIDNormal,
    IIDStudentT,
    StudyConfig,
    generate_series,
    run_study,
    true_lrv,
)
from .variance import Demeaning, Kernel, LrvConfig, auto_bandwidth, estimate_lrv
from .weights import (
    Power,
    TrimmedPower,
    Uniform,
    check_weight_admissible,
    segment_weight_integral,
)

__all__ = [
    "__version__",
    "AR1",
    "BernoulliShiftAR",
    "ChangeSpec",
    "ConstantsPair",
    "CusumPath",
    "Demeaning",
    "Family",
    "IIDNormal",
    "IIDStudentT",
    "Kernel",
    "LimitSample",
    "LrvConfig",
    "MA",
    "Power",
    "StatisticValue",
    "StudyConfig",
    "TrimmedPower",
    "Uniform",
    "analytic_darling_erdos",
    "as_time_series",
    "auto_bandwidth",
    "check_weight_admissible",
    "compute_a",
    "compute_b",
    "compute_cusum",
    "critical_value",
    "darling_erdos_statistic",
    "estimate_lrv",
    "generate_series",
    "lp_statistic",
    "p_value",
    "renyi_statistic",
    "run_study",
    "sample_brownian_bridge",
    "sample_fb",
    "sample_limit_general",
    "segment_weight_integral",
    "true_lrv",
]
