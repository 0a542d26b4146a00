"""The six goodness-of-fit statistics on the extreme-value scale.

All statistics consume a :class:`~weibullgof.estimation.TransformedSample`
together with its Kaplan-Meier fit.  The two weighted L2 statistics (kinds
``S1`` and ``S2``) have exact double-sum forms; ``stat_oracle`` evaluates
the defining weighted integral by adaptive quadrature and exists purely to
cross-check them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, special

from .distributions import ev01_cdf
from .errors import ConfigError, NumericError
from .estimation import KaplanMeierFit, TransformedSample

__all__ = [
    "StatisticKind",
    "StatisticSpec",
    "StatisticValue",
    "stat_s1",
    "stat_s2",
    "stat_oracle",
    "stat_ks",
    "stat_cm",
    "stat_ls",
    "stat_kr",
    "evaluate",
    "evaluate_all",
    "DEFAULT_STATISTICS",
]


class StatisticKind(str, Enum):
    S1 = "S1"  # Stein characterization, Gaussian weight exp(-a t^2)
    S2 = "S2"  # Stein characterization, Laplace weight exp(-a |t|)
    KS = "KS"  # Kolmogorov-Smirnov
    CM = "CM"  # Cramer-von Mises, product-limit form
    LS = "LS"  # Liao-Shimokawa
    KR = "KR"  # empirical-Laplace-transform distance, Riemann form


@dataclass(frozen=True)
class StatisticSpec:
    """Which statistic to compute plus its tuning parameters.

    ``a`` is required (positive) for S1/S2, optional for KR (default -5,
    any sign), and ignored otherwise.  ``m`` is the Riemann grid size for
    KR (default 100).
    """

    kind: StatisticKind
    a: float | None = None
    m: int | None = None

    def __post_init__(self) -> None:
        kind = StatisticKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (StatisticKind.S1, StatisticKind.S2):
            if self.a is None or not (self.a > 0 and np.isfinite(self.a)):
                raise ConfigError(f"{kind.value} needs a tuning parameter a > 0, got {self.a}")
            if self.m is not None:
                raise ConfigError(f"{kind.value} takes no grid size m")
        elif kind is StatisticKind.KR:
            a = -5.0 if self.a is None else float(self.a)
            if not np.isfinite(a):
                raise ConfigError(f"KR tuning parameter must be finite, got {self.a}")
            m = 100 if self.m is None else int(self.m)
            if m < 1:
                raise ConfigError(f"KR grid size must be at least 1, got {self.m}")
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "m", m)
        else:
            if self.a is not None or self.m is not None:
                raise ConfigError(f"{kind.value} takes no tuning parameters")
        if self.a is not None:
            object.__setattr__(self, "a", float(self.a))

    @property
    def label(self) -> str:
        if self.kind in (StatisticKind.S1, StatisticKind.S2):
            return f"{self.kind.value}(a={self.a:g})"
        return self.kind.value


@dataclass(frozen=True)
class StatisticValue:
    value: float
    spec: StatisticSpec


#: The ten statistics reported throughout: the four comparators and both
#: weighted L2 families at a in {1, 5, 10}.
DEFAULT_STATISTICS: tuple[StatisticSpec, ...] = (
    StatisticSpec(StatisticKind.KS),
    StatisticSpec(StatisticKind.CM),
    StatisticSpec(StatisticKind.LS),
    StatisticSpec(StatisticKind.KR),
    StatisticSpec(StatisticKind.S1, a=1.0),
    StatisticSpec(StatisticKind.S1, a=5.0),
    StatisticSpec(StatisticKind.S1, a=10.0),
    StatisticSpec(StatisticKind.S2, a=1.0),
    StatisticSpec(StatisticKind.S2, a=5.0),
    StatisticSpec(StatisticKind.S2, a=10.0),
)


def _check_weight(a: float) -> None:
    if not (a > 0 and np.isfinite(a)):
        raise ConfigError(f"weight tuning parameter must be positive, got {a}")


def _pairwise(y: np.ndarray):
    # Shared pieces for the S1/S2 double sums.
    diff = y[:, None] - y[None, :]
    b = -np.expm1(y)  # 1 - e^y
    return diff, diff * diff, np.outer(b, b), b[:, None] * diff


def _s1_value(y: np.ndarray, jumps: np.ndarray, a: float, parts=None) -> float:
    n = y.size
    diff, diff2, bb, bdiff = _pairwise(y) if parts is None else parts
    kernel = -(diff2 - 2.0 * a) / (4.0 * a**2) + bdiff / a + bb
    gauss = np.exp(-diff2 / (4.0 * a))
    return float(n * np.sqrt(np.pi / a) * jumps @ (gauss * kernel) @ jumps)


def _s2_value(y: np.ndarray, jumps: np.ndarray, a: float, parts=None) -> float:
    n = y.size
    diff, diff2, bb, bdiff = _pairwise(y) if parts is None else parts
    denom = diff2 + a**2
    kernel = (
        -4.0 * a * (3.0 * diff2 - a**2) / denom**3
        + 8.0 * a * bdiff / denom**2
        + 2.0 * a * bb / denom
    )
    return float(n * jumps @ kernel @ jumps)


def stat_s1(ts: TransformedSample, km: KaplanMeierFit, a: float) -> StatisticValue:
    """Weighted L2 statistic under the Gaussian weight exp(-a t^2)."""
    _check_weight(a)
    value = _s1_value(ts.y, km.jumps, a)
    return StatisticValue(value, StatisticSpec(StatisticKind.S1, a=a))


def stat_s2(ts: TransformedSample, km: KaplanMeierFit, a: float) -> StatisticValue:
    """Weighted L2 statistic under the Laplace weight exp(-a |t|)."""
    _check_weight(a)
    value = _s2_value(ts.y, km.jumps, a)
    return StatisticValue(value, StatisticSpec(StatisticKind.S2, a=a))


def stat_oracle(
    ts: TransformedSample,
    km: KaplanMeierFit,
    weight: str,
    a: float,
) -> StatisticValue:
    """Direct quadrature of the weighted L2 integral behind S1/S2.

    Integrates n * (R(t)^2 + I(t)^2) * w_a(t) over the real line, where
    R and I are the real and imaginary parts of the empirical functional.
    Slow by design; used only to validate the closed forms.
    """
    _check_weight(a)
    if weight not in ("gaussian", "laplace"):
        raise ConfigError(f"weight must be 'gaussian' or 'laplace', got {weight!r}")
    y = ts.y
    jumps = km.jumps
    n = ts.n
    b = -np.expm1(y)

    if weight == "gaussian":
        w = lambda t: np.exp(-a * t * t)  # noqa: E731
        upper = max(10.0, np.sqrt(60.0 / a))
        ref_spec = StatisticSpec(StatisticKind.S1, a=a)
    else:
        w = lambda t: np.exp(-a * abs(t))  # noqa: E731
        upper = max(50.0, 60.0 / a)
        ref_spec = StatisticSpec(StatisticKind.S2, a=a)

    def integrand(t: float) -> float:
        ty = t * y
        real = np.dot(jumps, -t * np.sin(ty) + b * np.cos(ty))
        imag = np.dot(jumps, t * np.cos(ty) + b * np.sin(ty))
        return n * (real * real + imag * imag) * w(t)

    # The integrand is even in t: integrate the half line and double.
    half, err = integrate.quad(integrand, 0.0, upper, epsabs=5e-11, epsrel=1e-11, limit=500)
    if err > 5e-9 * max(1.0, abs(half)):
        raise NumericError(f"oracle quadrature error estimate too large: {err:.3g}")
    return StatisticValue(2.0 * half, ref_spec)


def _fitted_cdf(y: np.ndarray) -> np.ndarray:
    return np.asarray(ev01_cdf(y), dtype=float)


def _ks_value(y: np.ndarray, jumps: np.ndarray) -> float:
    z = _fitted_cdf(y)
    cum = np.cumsum(jumps)
    left = cum - jumps
    return float(max(np.max(cum - z), np.max(z - left)))


def stat_ks(ts: TransformedSample, km: KaplanMeierFit) -> StatisticValue:
    """Kolmogorov-Smirnov distance between the Kaplan-Meier step function
    and the fitted extreme-value cdf, including left-limit gaps."""
    value = _ks_value(ts.y, km.jumps)
    return StatisticValue(value, StatisticSpec(StatisticKind.KS))


def _cm_value(y: np.ndarray, jumps: np.ndarray) -> float:
    # n * integral of (G_n - G)^2 dG, evaluated exactly piece by piece on
    # the probability scale, where the step function is constant.
    n = y.size
    u = _fitted_cdf(y)
    heights = np.concatenate(([0.0], np.cumsum(jumps)))
    lower = np.concatenate(([0.0], u))
    upper = np.concatenate((u, [1.0]))
    pieces = (heights - lower) ** 3 - (heights - upper) ** 3
    return float(n * pieces.sum() / 3.0)


def stat_cm(ts: TransformedSample, km: KaplanMeierFit) -> StatisticValue:
    """Cramer-von Mises distance n * int (G_n - G)^2 dG with G_n the
    Kaplan-Meier estimate and G the fitted extreme-value cdf."""
    value = _cm_value(ts.y, km.jumps)
    return StatisticValue(value, StatisticSpec(StatisticKind.CM))


def _ls_value(y: np.ndarray, jumps: np.ndarray) -> float:
    n = y.size
    z = _fitted_cdf(y)
    if np.any(z <= 0.0) or np.any(z >= 1.0):
        raise NumericError("fitted cdf hit 0 or 1; the standardised gap is undefined")
    cum = np.cumsum(jumps)
    left = cum - jumps
    gaps = np.maximum(cum - z, z - left)
    return float(np.sum(gaps / np.sqrt(z * (1.0 - z))) / np.sqrt(n))


def stat_ls(ts: TransformedSample, km: KaplanMeierFit) -> StatisticValue:
    """Liao-Shimokawa statistic: standardised maximal gaps between the
    Kaplan-Meier plotting positions and the fitted cdf.

    In the full-sample case the plotting positions reduce to j/n and
    (j-1)/n, recovering the classical form.
    """
    value = _ls_value(ts.y, km.jumps)
    return StatisticValue(value, StatisticSpec(StatisticKind.LS))


def _kr_value(y: np.ndarray, jumps: np.ndarray, a: float, m: int) -> float:
    n = y.size
    t = np.arange(-m, 0, dtype=float) / m
    # Empirical Laplace transform sum_j jump_j * exp(-t y_j) in log space.
    with np.errstate(divide="ignore"):
        log_psi = special.logsumexp(-np.outer(t, y), b=jumps[None, :], axis=1)
    if np.any(log_psi > 700.0):
        raise NumericError("empirical Laplace transform overflow")
    psi = np.exp(log_psi)
    target = special.gamma(1.0 - t)
    at = a * t
    weight = np.exp(at - np.exp(at))
    return float(n * np.sum((psi - target) ** 2 * weight))


def stat_kr(ts: TransformedSample, km: KaplanMeierFit, a: float = -5.0, m: int = 100) -> StatisticValue:
    """Riemann-grid distance between the empirical Laplace transform of the
    transformed sample and the extreme-value Laplace transform Gamma(1 - t),
    under the weight exp(a t - exp(a t)) on the grid t = k/m, k = -m..-1."""
    if m < 1:
        raise ConfigError(f"KR grid size must be at least 1, got {m}")
    value = _kr_value(ts.y, km.jumps, float(a), int(m))
    return StatisticValue(value, StatisticSpec(StatisticKind.KR, a=a, m=m))


def evaluate_all(
    specs: tuple[StatisticSpec, ...] | list[StatisticSpec],
    ts: TransformedSample,
    km: KaplanMeierFit,
) -> np.ndarray:
    """Values for several statistics on one sample, sharing setup work."""
    out = np.empty(len(specs), dtype=float)
    parts = None
    for i, spec in enumerate(specs):
        if spec.kind in (StatisticKind.S1, StatisticKind.S2) and parts is None:
            parts = _pairwise(ts.y)
        if spec.kind is StatisticKind.S1:
            out[i] = _s1_value(ts.y, km.jumps, spec.a, parts)
        elif spec.kind is StatisticKind.S2:
            out[i] = _s2_value(ts.y, km.jumps, spec.a, parts)
        elif spec.kind is StatisticKind.KS:
            out[i] = _ks_value(ts.y, km.jumps)
        elif spec.kind is StatisticKind.CM:
            out[i] = _cm_value(ts.y, km.jumps)
        elif spec.kind is StatisticKind.LS:
            out[i] = _ls_value(ts.y, km.jumps)
        elif spec.kind is StatisticKind.KR:
            out[i] = _kr_value(ts.y, km.jumps, spec.a, spec.m)
        else:
            raise ConfigError(f"unknown statistic kind {spec.kind!r}")
    return out


def evaluate(spec: StatisticSpec, ts: TransformedSample, km: KaplanMeierFit) -> StatisticValue:
    """Dispatch a single statistic specification."""
    return StatisticValue(float(evaluate_all([spec], ts, km)[0]), spec)
