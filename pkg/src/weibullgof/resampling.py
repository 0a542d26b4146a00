"""Parametric bootstrap for critical values and p-values, and the
warp-speed Monte Carlo engine behind the power tables.

Every replicate (bootstrap index b, or Monte Carlo index r) owns an RNG
stream derived from (seed, index), so results are bit-identical for any
worker count and any chunking of the replicate range.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    AlternativeSpec,
    CensoredSample,
    CensoringModel,
    CensoringSpec,
    WeibullParams,
    sample_censored,
    sample_weibull,
)
from .errors import ConfigError, NumericError
from .estimation import km_jumps, transform, weibull_mle
from .statistics import StatisticSpec, evaluate_all

__all__ = [
    "BootstrapConfig",
    "PowerStudyConfig",
    "PowerResult",
    "bootstrap_null_statistics",
    "bootstrap_null_statistics_multi",
    "critical_value",
    "p_value",
    "p_values",
    "upper_order_statistic",
    "null_statistic_pool",
    "warp_speed_pools",
    "warp_speed_power",
]

#: Redraw budget per replicate before giving up on a pathological stream.
REPLICATE_ATTEMPT_CAP = 50


def derived_rng(seed: int, index: int) -> np.random.Generator:
    """Independent per-replicate stream, a pure function of (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


@dataclass(frozen=True)
class BootstrapConfig:
    """Settings for a single bootstrap run on one statistic."""

    statistic: StatisticSpec
    replications: int
    alpha: float
    seed: int

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ConfigError("need at least one bootstrap replication")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class PowerStudyConfig:
    """One cell group of a power table: a lifetime law, a censoring
    mechanism, and the statistics to evaluate."""

    lifetime: AlternativeSpec
    censoring: CensoringSpec
    n: int
    reps: int
    alpha: float
    seed: int
    statistics: tuple[StatisticSpec, ...]
    threads: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "statistics", tuple(self.statistics))
        if self.n < 10:
            raise ConfigError(f"sample size must be at least 10, got {self.n}")
        if self.reps < 100:
            raise ConfigError(f"need at least 100 replications, got {self.reps}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if not self.statistics:
            raise ConfigError("no statistics requested")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")


@dataclass(frozen=True)
class PowerResult:
    """Rejection proportions with their Monte Carlo standard errors."""

    config: PowerStudyConfig
    powers: np.ndarray
    std_errors: np.ndarray
    critical_values: np.ndarray
    redraw_rate: float = 0.0

    @property
    def redraw_warning(self) -> bool:
        return self.redraw_rate > 0.01

    def by_label(self) -> dict[str, float]:
        return {s.label: float(p) for s, p in zip(self.config.statistics, self.powers)}


def upper_order_statistic(values: np.ndarray, alpha: float) -> float:
    """The floor(B*(1-alpha))-th order statistic, index clamped to [1, B]."""
    values = np.asarray(values, dtype=float)
    b = values.size
    if b < 1:
        raise ConfigError("empty sample of bootstrap values")
    idx = int(np.floor(b * (1.0 - alpha)))
    idx = min(max(idx, 1), b)
    return float(np.sort(values)[idx - 1])


def _statistic_km(ts):
    # Test statistics are evaluated on the plain product-limit estimate: no
    # mass completion at a censored maximum (matches the comparators' source
    # constructions and the reference p-value tables).  For fully observed
    # samples this coincides with the completed estimate.
    return km_jumps(ts, last_mass="event")


def _censoring_resampler(sample: CensoredSample, params: WeibullParams):
    """Resampling distribution for bootstrap censoring times.

    The observed censoring values, placed on the transformed scale, are
    treated as a complete sample of the censoring law, so the bootstrap
    draws uniformly from them.  Returns the transformed censoring values,
    or None for a fully observed sample (no censoring in the bootstrap).
    """
    if sample.num_events == sample.n:
        return None
    ts = transform(sample, params)
    return ts.y[ts.deltas == 0]


def _one_null_replicate(
    params: WeibullParams,
    resampler,
    n: int,
    specs: tuple[StatisticSpec, ...],
    rng: np.random.Generator,
) -> tuple[np.ndarray, int]:
    """Steps 4-9 of the bootstrap: draw, censor, refit, re-evaluate."""
    for attempt in range(REPLICATE_ATTEMPT_CAP):
        x = sample_weibull(params, n, rng)
        if resampler is None:
            boot = CensoredSample(x, np.ones(n, dtype=np.int64))
        else:
            c_y = rng.choice(resampler, size=n, replace=True)
            c = params.scale * np.exp(c_y / params.shape)
            boot = CensoredSample(np.minimum(x, c), (x <= c).astype(np.int64))
        try:
            refit = weibull_mle(boot)
            ts = transform(boot, refit)
            return evaluate_all(specs, ts, _statistic_km(ts)), attempt
        except NumericError:
            continue
    raise NumericError(f"bootstrap replicate failed {REPLICATE_ATTEMPT_CAP} times in a row")


def _bootstrap_chunk(args) -> tuple[int, np.ndarray, int]:
    params, resampler, n, specs, seed, start, stop = args
    out = np.empty((stop - start, len(specs)), dtype=float)
    redraws = 0
    for b in range(start, stop):
        rng = derived_rng(seed, b)
        out[b - start], extra = _one_null_replicate(params, resampler, n, specs, rng)
        redraws += extra
    return start, out, redraws


def _chunk_ranges(total: int, threads: int) -> list[tuple[int, int]]:
    chunks = max(threads * 4, 1)
    size = max((total + chunks - 1) // chunks, 1)
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _run_chunks(worker, arg_list, threads: int):
    if threads <= 1 or len(arg_list) <= 1:
        return [worker(a) for a in arg_list]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, arg_list))


def bootstrap_null_statistics_multi(
    sample: CensoredSample,
    specs: tuple[StatisticSpec, ...] | list[StatisticSpec],
    B: int,
    seed: int,
    threads: int = 1,
) -> np.ndarray:
    """B parametric-bootstrap null values for each statistic, shape (B, k).

    Fits the Weibull null to the sample, then repeatedly redraws lifetimes
    from the fitted model and censoring times from the Kaplan-Meier
    estimate of the censoring law, refits, and re-evaluates.  The draws do
    not depend on which statistics are requested, so per-statistic columns
    match separate runs with the same seed.
    """
    if B < 1:
        raise ConfigError("need at least one bootstrap replication")
    specs = tuple(specs)
    params = weibull_mle(sample)
    resampler = _censoring_resampler(sample, params)
    args = [
        (params, resampler, sample.n, specs, seed, lo, hi)
        for lo, hi in _chunk_ranges(B, threads)
    ]
    out = np.empty((B, len(specs)), dtype=float)
    for start, vals, _ in _run_chunks(_bootstrap_chunk, args, threads):
        out[start : start + vals.shape[0]] = vals
    return out


def bootstrap_null_statistics(
    sample: CensoredSample,
    spec: StatisticSpec,
    B: int,
    seed: int,
    threads: int = 1,
) -> np.ndarray:
    """B parametric-bootstrap null values of one statistic."""
    return bootstrap_null_statistics_multi(sample, (spec,), B, seed, threads)[:, 0]


def critical_value(
    sample: CensoredSample,
    spec: StatisticSpec,
    B: int,
    alpha: float,
    seed: int,
    threads: int = 1,
) -> float:
    """Bootstrap critical value: the floor(B*(1-alpha)) order statistic."""
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    values = bootstrap_null_statistics(sample, spec, B, seed, threads)
    return upper_order_statistic(values, alpha)


def _observed_values(sample: CensoredSample, specs: tuple[StatisticSpec, ...]) -> np.ndarray:
    params = weibull_mle(sample)
    ts = transform(sample, params)
    return evaluate_all(specs, ts, _statistic_km(ts))


def p_values(
    sample: CensoredSample,
    specs: tuple[StatisticSpec, ...] | list[StatisticSpec],
    B: int,
    seed: int,
    threads: int = 1,
) -> np.ndarray:
    """Bootstrap p-values (1 + #{W* >= W}) / (B + 1) for several statistics
    off one shared set of bootstrap draws."""
    if B < 99:
        raise ConfigError(f"need at least 99 bootstrap replications, got {B}")
    specs = tuple(specs)
    observed = _observed_values(sample, specs)
    null_values = bootstrap_null_statistics_multi(sample, specs, B, seed, threads)
    exceed = (null_values >= observed[None, :]).sum(axis=0)
    return (1.0 + exceed) / (B + 1.0)


def p_value(
    sample: CensoredSample,
    spec: StatisticSpec,
    B: int,
    seed: int,
    threads: int = 1,
) -> float:
    """Bootstrap p-value of one statistic."""
    return float(p_values(sample, (spec,), B, seed, threads)[0])


def _warp_chunk(args) -> tuple[int, np.ndarray, np.ndarray, int]:
    lifetime, censoring, n, specs, seed, start, stop = args
    k = len(specs)
    w = np.empty((stop - start, k), dtype=float)
    w_star = np.empty((stop - start, k), dtype=float)
    redraws = 0
    for r in range(start, stop):
        rng = derived_rng(seed, r)
        for attempt in range(REPLICATE_ATTEMPT_CAP):
            sample = sample_censored(lifetime, censoring, n, rng)
            try:
                params = weibull_mle(sample)
                ts = transform(sample, params)
                w[r - start] = evaluate_all(specs, ts, _statistic_km(ts))
            except NumericError:
                redraws += 1
                continue
            resampler = _censoring_resampler(sample, params)
            w_star[r - start], extra = _one_null_replicate(params, resampler, n, specs, rng)
            redraws += extra
            break
        else:
            raise NumericError(f"Monte Carlo replicate failed {REPLICATE_ATTEMPT_CAP} times in a row")
    return start, w, w_star, redraws


def warp_speed_pools(config: PowerStudyConfig) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-replication statistic values (W) and single-bootstrap values
    (W*), shape (reps, k) each, plus the total redraw count."""
    args = [
        (config.lifetime, config.censoring, config.n, config.statistics, config.seed, lo, hi)
        for lo, hi in _chunk_ranges(config.reps, config.threads)
    ]
    k = len(config.statistics)
    w = np.empty((config.reps, k), dtype=float)
    w_star = np.empty((config.reps, k), dtype=float)
    redraws = 0
    for start, w_part, ws_part, extra in _run_chunks(_warp_chunk, args, config.threads):
        w[start : start + w_part.shape[0]] = w_part
        w_star[start : start + ws_part.shape[0]] = ws_part
        redraws += extra
    return w, w_star, redraws


def warp_speed_power(config: PowerStudyConfig) -> PowerResult:
    """Warp-speed rejection rates: one bootstrap replicate per Monte Carlo
    sample, pooled per statistic into a critical value, then the rejection
    proportion #{W > c} / reps."""
    w, w_star, redraws = warp_speed_pools(config)
    crit = np.array(
        [upper_order_statistic(w_star[:, j], config.alpha) for j in range(w.shape[1])]
    )
    powers = (w > crit[None, :]).mean(axis=0)
    ses = np.sqrt(powers * (1.0 - powers) / config.reps)
    return PowerResult(
        config=config,
        powers=powers,
        std_errors=ses,
        critical_values=crit,
        redraw_rate=redraws / config.reps,
    )


def _null_pool_chunk(args) -> tuple[int, np.ndarray]:
    n, specs, seed, start, stop = args
    out = np.empty((stop - start, len(specs)), dtype=float)
    null_params = WeibullParams(1.0, 1.0)
    for r in range(start, stop):
        rng = derived_rng(seed, r)
        for _ in range(REPLICATE_ATTEMPT_CAP):
            x = sample_weibull(null_params, n, rng)
            sample = CensoredSample(x, np.ones(n, dtype=np.int64))
            try:
                params = weibull_mle(sample)
                ts = transform(sample, params)
                out[r - start] = evaluate_all(specs, ts, _statistic_km(ts))
                break
            except NumericError:
                continue
        else:
            raise NumericError("null replicate failed repeatedly")
    return start, out


def null_statistic_pool(
    n: int,
    specs: tuple[StatisticSpec, ...] | list[StatisticSpec],
    reps: int,
    seed: int,
    threads: int = 1,
) -> np.ndarray:
    """Monte Carlo null values for full samples, shape (reps, k).

    The fitted transform removes location and scale on the log time axis,
    so any Weibull source gives the same law; unit parameters are used.
    """
    if reps < 1:
        raise ConfigError("need at least one replication")
    specs = tuple(specs)
    args = [(n, specs, seed, lo, hi) for lo, hi in _chunk_ranges(reps, threads)]
    out = np.empty((reps, len(specs)), dtype=float)
    for start, vals in _run_chunks(_null_pool_chunk, args, threads):
        out[start : start + vals.shape[0]] = vals
    return out
