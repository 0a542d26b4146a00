"""Lifetime and censoring samplers.

Provides the Weibull null model, six alternative lifetime families, and
three censoring mechanisms (exponential, uniform, Koziol-Green), together
with deterministic calibration of censoring parameters to a target
censoring proportion.  Every sampler takes an explicit numpy Generator;
there is no global RNG anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, special, stats

from .errors import ConfigError

__all__ = [
    "Family",
    "CensoringModel",
    "WeibullParams",
    "AlternativeSpec",
    "CensoringSpec",
    "CensoredSample",
    "ev01_cdf",
    "ev01_quantile",
    "sample_weibull",
    "sample_alternative",
    "lifetime_cdf",
    "lifetime_sf",
    "lifetime_ppf",
    "calibrate_censoring",
    "sample_censored",
]


class Family(str, Enum):
    """Alternative lifetime families available to the power study."""

    WEIBULL = "weibull"
    GAMMA = "gamma"
    LOGNORMAL = "lognormal"
    CHI_SQUARE = "chisquare"
    BETA = "beta"
    LINDLEY = "lindley"


class CensoringModel(str, Enum):
    NONE = "none"
    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"
    KOZIOL_GREEN = "koziol-green"


_PARAM_COUNT = {
    Family.WEIBULL: 1,
    Family.GAMMA: 1,
    Family.LOGNORMAL: 1,
    Family.CHI_SQUARE: 1,
    Family.BETA: 2,
    Family.LINDLEY: 1,
}

_LABEL = {
    Family.WEIBULL: "W",
    Family.GAMMA: "Gamma",
    Family.LOGNORMAL: "LN",
    Family.CHI_SQUARE: "chisq",
    Family.BETA: "beta",
    Family.LINDLEY: "Lind",
}


@dataclass(frozen=True)
class WeibullParams:
    """Null-model parameters: cdf 1 - exp(-(x/scale)**shape) on x > 0."""

    scale: float
    shape: float

    def __post_init__(self) -> None:
        if not (self.scale > 0 and np.isfinite(self.scale)):
            raise ConfigError(f"Weibull scale must be a positive real, got {self.scale}")
        if not (self.shape > 0 and np.isfinite(self.shape)):
            raise ConfigError(f"Weibull shape must be a positive real, got {self.shape}")


@dataclass(frozen=True)
class AlternativeSpec:
    """A lifetime distribution used as the data-generating law."""

    family: Family
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        params = tuple(float(p) for p in np.atleast_1d(self.params))
        object.__setattr__(self, "params", params)
        expected = _PARAM_COUNT[family]
        if len(params) != expected:
            raise ConfigError(
                f"{family.value} takes {expected} parameter(s), got {len(params)}"
            )
        if any(not (p > 0 and np.isfinite(p)) for p in params):
            raise ConfigError(f"{family.value} parameters must be positive reals: {params}")

    @property
    def label(self) -> str:
        inner = ",".join(f"{p:g}" for p in self.params)
        return f"{_LABEL[self.family]}({inner})"


@dataclass(frozen=True)
class CensoringSpec:
    """Censoring mechanism; ``param`` is the rate (exponential), the upper
    endpoint (uniform), or the survival exponent (Koziol-Green)."""

    model: CensoringModel
    param: float | None = None

    def __post_init__(self) -> None:
        model = CensoringModel(self.model)
        object.__setattr__(self, "model", model)
        if model is CensoringModel.NONE:
            if self.param is not None:
                raise ConfigError("censoring model 'none' takes no parameter")
        else:
            if self.param is None or not (self.param > 0 and np.isfinite(self.param)):
                raise ConfigError(
                    f"censoring model {model.value} needs a positive parameter, got {self.param}"
                )
            object.__setattr__(self, "param", float(self.param))

    @property
    def label(self) -> str:
        if self.model is CensoringModel.NONE:
            return "none"
        return f"{self.model.value}({self.param:g})"


@dataclass(frozen=True)
class CensoredSample:
    """Observed pairs (time, event indicator); indicator 0 marks censoring."""

    times: np.ndarray
    deltas: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        deltas = np.asarray(self.deltas, dtype=np.int64)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "deltas", deltas)
        if times.ndim != 1 or deltas.ndim != 1 or times.shape != deltas.shape:
            raise ConfigError("times and deltas must be 1-d sequences of equal length")
        if times.size == 0:
            raise ConfigError("sample is empty")
        if not np.all(times > 0) or not np.all(np.isfinite(times)):
            raise ConfigError("all observed times must be positive and finite")
        if not np.isin(deltas, (0, 1)).all():
            raise ConfigError("event indicators must be 0 or 1")

    @property
    def n(self) -> int:
        return int(self.times.size)

    @property
    def num_events(self) -> int:
        return int(self.deltas.sum())

    @property
    def censoring_fraction(self) -> float:
        return 1.0 - self.num_events / self.n


def ev01_cdf(x):
    """Standard type I extreme value cdf, 1 - exp(-exp(x))."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        out = -np.expm1(-np.exp(x))
    return out if out.ndim else float(out)


def ev01_quantile(p):
    """Inverse of :func:`ev01_cdf` on (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise ConfigError("quantile argument must lie strictly inside (0, 1)")
    out = np.log(-np.log1p(-p))
    return out if out.ndim else float(out)


def sample_weibull(params: WeibullParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. Weibull variates by inverse transform.

    Uses x = scale * (-log U)**(1/shape) with U uniform on (0, 1), so a
    larger U maps to a smaller x for fixed parameters.
    """
    if n < 1:
        raise ConfigError("n must be at least 1")
    u = rng.random(n)
    return params.scale * np.power(-np.log1p(-u), 1.0 / params.shape)


def _lindley_mixture(theta: float, n: int, rng: np.random.Generator) -> np.ndarray:
    # Exact two-component representation: Exp(theta) w.p. theta/(theta+1),
    # Gamma(shape 2, rate theta) otherwise.
    pick_exp = rng.random(n) < theta / (theta + 1.0)
    exp_draws = rng.exponential(scale=1.0 / theta, size=n)
    gamma_draws = rng.gamma(shape=2.0, scale=1.0 / theta, size=n)
    return np.where(pick_exp, exp_draws, gamma_draws)


def sample_alternative(spec: AlternativeSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. lifetimes from the given alternative family."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    family, params = spec.family, spec.params
    if family is Family.WEIBULL:
        return sample_weibull(WeibullParams(1.0, params[0]), n, rng)
    if family is Family.GAMMA:
        return rng.gamma(shape=params[0], scale=1.0, size=n)
    if family is Family.LOGNORMAL:
        return rng.lognormal(mean=0.0, sigma=params[0], size=n)
    if family is Family.CHI_SQUARE:
        return rng.chisquare(df=params[0], size=n)
    if family is Family.BETA:
        return rng.beta(params[0], params[1], size=n)
    if family is Family.LINDLEY:
        return _lindley_mixture(params[0], n, rng)
    raise ConfigError(f"unsupported family {family!r}")


def _lindley_cdf(x: np.ndarray, theta: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    out[pos] = 1.0 - (1.0 + theta * xp / (theta + 1.0)) * np.exp(-theta * xp)
    return out


def _lindley_ppf(q: np.ndarray, theta: float) -> np.ndarray:
    # Closed form through the lower Lambert-W branch.
    q = np.asarray(q, dtype=float)
    arg = (q - 1.0) * (theta + 1.0) * np.exp(-(theta + 1.0))
    w = special.lambertw(arg, k=-1).real
    return -1.0 - 1.0 / theta - w / theta


def lifetime_cdf(lifetime: AlternativeSpec | WeibullParams, x) -> np.ndarray:
    """Distribution function of a lifetime law at x (vectorized)."""
    x = np.asarray(x, dtype=float)
    if isinstance(lifetime, WeibullParams):
        out = np.where(x > 0, -np.expm1(-np.power(np.maximum(x, 0.0) / lifetime.scale, lifetime.shape)), 0.0)
        return out
    family, params = lifetime.family, lifetime.params
    if family is Family.WEIBULL:
        return lifetime_cdf(WeibullParams(1.0, params[0]), x)
    if family is Family.GAMMA:
        return stats.gamma.cdf(x, a=params[0])
    if family is Family.LOGNORMAL:
        return stats.lognorm.cdf(x, s=params[0])
    if family is Family.CHI_SQUARE:
        return stats.chi2.cdf(x, df=params[0])
    if family is Family.BETA:
        return stats.beta.cdf(x, params[0], params[1])
    if family is Family.LINDLEY:
        return _lindley_cdf(x, params[0])
    raise ConfigError(f"unsupported family {family!r}")


def lifetime_sf(lifetime: AlternativeSpec | WeibullParams, x) -> np.ndarray:
    """Survival function of a lifetime law at x (vectorized)."""
    x = np.asarray(x, dtype=float)
    if isinstance(lifetime, WeibullParams):
        return np.where(x > 0, np.exp(-np.power(np.maximum(x, 0.0) / lifetime.scale, lifetime.shape)), 1.0)
    family, params = lifetime.family, lifetime.params
    if family is Family.WEIBULL:
        return lifetime_sf(WeibullParams(1.0, params[0]), x)
    if family is Family.GAMMA:
        return stats.gamma.sf(x, a=params[0])
    if family is Family.LOGNORMAL:
        return stats.lognorm.sf(x, s=params[0])
    if family is Family.CHI_SQUARE:
        return stats.chi2.sf(x, df=params[0])
    if family is Family.BETA:
        return stats.beta.sf(x, params[0], params[1])
    if family is Family.LINDLEY:
        theta = params[0]
        xp = np.maximum(x, 0.0)
        return np.where(x > 0, (1.0 + theta * xp / (theta + 1.0)) * np.exp(-theta * xp), 1.0)
    raise ConfigError(f"unsupported family {family!r}")


def lifetime_ppf(lifetime: AlternativeSpec | WeibullParams, q) -> np.ndarray:
    """Quantile function of a lifetime law on (0, 1) (vectorized)."""
    q = np.asarray(q, dtype=float)
    if isinstance(lifetime, WeibullParams):
        return lifetime.scale * np.power(-np.log1p(-q), 1.0 / lifetime.shape)
    family, params = lifetime.family, lifetime.params
    if family is Family.WEIBULL:
        return lifetime_ppf(WeibullParams(1.0, params[0]), q)
    if family is Family.GAMMA:
        return stats.gamma.ppf(q, a=params[0])
    if family is Family.LOGNORMAL:
        return stats.lognorm.ppf(q, s=params[0])
    if family is Family.CHI_SQUARE:
        return stats.chi2.ppf(q, df=params[0])
    if family is Family.BETA:
        return stats.beta.ppf(q, params[0], params[1])
    if family is Family.LINDLEY:
        return _lindley_ppf(q, params[0])
    raise ConfigError(f"unsupported family {family!r}")


_QUAD_ABS_TOL = 1e-10
_BISECT_STEPS = 100


def _exponential_censoring_prop(rate: float, lifetime) -> float:
    # P(lifetime > C) with C ~ Exp(rate), by adaptive quadrature.
    val, _ = integrate.quad(
        lambda c: float(lifetime_sf(lifetime, c)) * rate * np.exp(-rate * c),
        0.0,
        np.inf,
        epsabs=_QUAD_ABS_TOL,
        limit=200,
    )
    return val


def _uniform_censoring_prop(upper: float, lifetime) -> float:
    # P(lifetime > C) with C ~ U(0, upper).
    val, _ = integrate.quad(
        lambda c: float(lifetime_sf(lifetime, c)),
        0.0,
        upper,
        epsabs=_QUAD_ABS_TOL,
        limit=200,
    )
    return val / upper


def _bisect_increasing(fn, target: float, lo: float, hi: float) -> float:
    # fn monotone increasing; bracket [lo, hi] must straddle target.
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calibrate_censoring(
    model: CensoringModel | str,
    lifetime: AlternativeSpec | WeibullParams,
    target_prop: float,
) -> CensoringSpec:
    """Solve for the censoring parameter giving P(censored) = target_prop.

    Koziol-Green has the closed form exponent p / (1 - p).  The exponential
    rate and the uniform endpoint are found by bisection on the censoring
    probability computed with adaptive quadrature, so calibration is fully
    deterministic.
    """
    model = CensoringModel(model)
    if not 0.0 < target_prop < 1.0:
        raise ConfigError(f"target censoring proportion must be in (0, 1), got {target_prop}")
    if model is CensoringModel.NONE:
        raise ConfigError("cannot calibrate the 'none' censoring model to a nonzero target")

    if model is CensoringModel.KOZIOL_GREEN:
        return CensoringSpec(model, target_prop / (1.0 - target_prop))

    if model is CensoringModel.EXPONENTIAL:
        prop = lambda rate: _exponential_censoring_prop(rate, lifetime)  # noqa: E731
        lo, hi = 1e-8, 1.0
        for _ in range(200):
            if prop(hi) > target_prop:
                break
            hi *= 2.0
        else:
            raise ConfigError("exponential censoring target unreachable")
        for _ in range(200):
            if prop(lo) < target_prop:
                break
            lo /= 2.0
        else:
            raise ConfigError("exponential censoring target unreachable")
        return CensoringSpec(model, _bisect_increasing(prop, target_prop, lo, hi))

    # Uniform endpoint: censoring probability decreases in the endpoint.
    prop = lambda b: -_uniform_censoring_prop(b, lifetime)  # noqa: E731
    lo, hi = 1e-8, 1.0
    for _ in range(200):
        if prop(hi) > -target_prop:
            break
        hi *= 2.0
    else:
        raise ConfigError("uniform censoring target unreachable")
    for _ in range(200):
        if prop(lo) < -target_prop:
            break
        lo /= 2.0
    else:
        raise ConfigError("uniform censoring target unreachable")
    return CensoringSpec(model, _bisect_increasing(prop, -target_prop, lo, hi))


def _sample_censoring_times(
    censor: CensoringSpec,
    lifetime: AlternativeSpec | WeibullParams,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    if censor.model is CensoringModel.EXPONENTIAL:
        return rng.exponential(scale=1.0 / censor.param, size=n)
    if censor.model is CensoringModel.UNIFORM:
        return rng.uniform(0.0, censor.param, size=n)
    if censor.model is CensoringModel.KOZIOL_GREEN:
        # Survival of C is the lifetime survival raised to the exponent.
        u = rng.random(n)
        q = -np.expm1(np.log1p(-u) / censor.param)
        return np.asarray(lifetime_ppf(lifetime, q), dtype=float)
    raise ConfigError(f"cannot sample censoring model {censor.model!r}")


def sample_censored(
    lifetime: AlternativeSpec | WeibullParams,
    censor: CensoringSpec,
    n: int,
    rng: np.random.Generator,
) -> CensoredSample:
    """Draw a right-censored sample: T = min(X, C), delta = 1{X <= C}.

    With the 'none' model the lifetimes pass through untouched and the
    generator state advances exactly as in :func:`sample_alternative`.
    """
    if isinstance(lifetime, WeibullParams):
        x = sample_weibull(lifetime, n, rng)
    else:
        x = sample_alternative(lifetime, n, rng)
    if censor.model is CensoringModel.NONE:
        return CensoredSample(x, np.ones(n, dtype=np.int64))
    c = _sample_censoring_times(censor, lifetime, n, rng)
    deltas = (x <= c).astype(np.int64)
    return CensoredSample(np.minimum(x, c), deltas)
