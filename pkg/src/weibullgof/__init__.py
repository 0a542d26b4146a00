"""Goodness-of-fit tests for the Weibull distribution under random right
censoring: weighted L2 statistics from a Stein-type characterization of
the extreme value law, four classical comparators, a parametric bootstrap,
and a warp-speed Monte Carlo power engine."""

from .datasets import BUNDLED_DATASETS, emit, ingest, load_bundled
from .distributions import (
    AlternativeSpec,
    CensoredSample,
    CensoringModel,
    CensoringSpec,
    Family,
    WeibullParams,
    calibrate_censoring,
    ev01_cdf,
    ev01_quantile,
    sample_alternative,
    sample_censored,
    sample_weibull,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateSampleError,
    EstimationError,
    InsufficientEventsError,
    NumericError,
    WeibullGofError,
)
from .estimation import (
    KaplanMeierFit,
    TransformedSample,
    km_cdf,
    km_jumps,
    transform,
    weibull_loglik,
    weibull_mle,
)
from .resampling import (
    BootstrapConfig,
    PowerResult,
    PowerStudyConfig,
    bootstrap_null_statistics,
    bootstrap_null_statistics_multi,
    critical_value,
    null_statistic_pool,
    p_value,
    p_values,
    upper_order_statistic,
    warp_speed_power,
)
from .statistics import (
    DEFAULT_STATISTICS,
    StatisticKind,
    StatisticSpec,
    StatisticValue,
    evaluate,
    evaluate_all,
    stat_cm,
    stat_kr,
    stat_ks,
    stat_ls,
    stat_oracle,
    stat_s1,
    stat_s2,
)

__version__ = "0.1.0"
