"""Censored Weibull maximum likelihood, the extreme-value rescaling, and
the Kaplan-Meier estimator with explicit jump masses.

The Weibull fit profiles out the scale parameter analytically, leaving a
one-dimensional score equation in the shape parameter that is solved by
safeguarded Newton iteration inside a sign-change bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distributions import CensoredSample, WeibullParams
from .errors import (
    ConfigError,
    DegenerateSampleError,
    InsufficientEventsError,
    NumericError,
)

__all__ = [
    "TransformedSample",
    "KaplanMeierFit",
    "weibull_loglik",
    "weibull_mle",
    "transform",
    "km_jumps",
    "km_cdf",
]

SCORE_TOL = 1e-10
MAX_ITER = 200


@dataclass(frozen=True)
class TransformedSample:
    """Sample mapped to shape*(log t - log scale), sorted ascending.

    Ties keep a stable order with censored observations placed after
    uncensored ones at equal values.
    """

    y: np.ndarray
    deltas: np.ndarray
    mle: WeibullParams

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=float)
        deltas = np.asarray(self.deltas, dtype=np.int64)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "deltas", deltas)
        if y.shape != deltas.shape or y.ndim != 1:
            raise ConfigError("y and deltas must be 1-d and equally long")
        if np.any(np.diff(y) < 0):
            raise ConfigError("y must be sorted ascending")

    @property
    def n(self) -> int:
        return int(self.y.size)


@dataclass(frozen=True)
class KaplanMeierFit:
    """Step-function distribution estimate: mass ``jumps[j]`` at ``support[j]``."""

    support: np.ndarray
    jumps: np.ndarray
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        support = np.asarray(self.support, dtype=float)
        jumps = np.asarray(self.jumps, dtype=float)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "jumps", jumps)
        if support.shape != jumps.shape or support.ndim != 1 or support.size == 0:
            raise ConfigError("support and jumps must be 1-d, nonempty, equally long")
        object.__setattr__(self, "_cum", np.cumsum(jumps))

    def cdf(self, t):
        """Right-continuous value: total mass at or below t."""
        idx = np.searchsorted(self.support, t, side="right")
        padded = np.concatenate(([0.0], self._cum))
        out = padded[idx]
        return out if np.ndim(t) else float(out)

    def cdf_left(self, t):
        """Left limit: total mass strictly below t."""
        idx = np.searchsorted(self.support, t, side="left")
        padded = np.concatenate(([0.0], self._cum))
        out = padded[idx]
        return out if np.ndim(t) else float(out)

    @property
    def total_mass(self) -> float:
        return float(self._cum[-1])


def weibull_loglik(sample: CensoredSample, params: WeibullParams) -> float:
    """Censored Weibull log-likelihood.

    With d the number of events: d log(shape) - d shape log(scale)
    + (shape - 1) * sum of log t over events - scale**(-shape) * sum of t**shape.
    """
    t = sample.times
    d = sample.num_events
    shape, scale = params.shape, params.scale
    event_logs = np.log(t[sample.deltas == 1]).sum()
    return float(
        d * np.log(shape)
        - d * shape * np.log(scale)
        + (shape - 1.0) * event_logs
        - np.sum(np.power(t / scale, shape))
    )


def _profile_scale(log_t: np.ndarray, d: int, shape: float) -> float:
    # scale(shape) = (sum t**shape / d)**(1/shape), computed against the
    # largest log to avoid overflow.
    m = log_t.max()
    s = np.exp(shape * (log_t - m))
    return float(np.exp(m + np.log(s.sum() / d) / shape))


def _profile_score(log_t: np.ndarray, mean_event_log: float, d: int, shape: float):
    # Score of the profile log-likelihood in the shape parameter, and its
    # derivative.  Weighted moments of log t under weights t**shape.
    m = log_t.max()
    s = np.exp(shape * (log_t - m))
    w = s / s.sum()
    mu = float(np.dot(w, log_t))
    var = float(np.dot(w, (log_t - mu) ** 2))
    score = d * (1.0 / shape + mean_event_log - mu)
    dscore = -d * (1.0 / shape**2 + var)
    return score, dscore


def weibull_mle(sample: CensoredSample, *, tol: float = SCORE_TOL, max_iter: int = MAX_ITER) -> WeibullParams:
    """Fit (scale, shape) by maximum likelihood under right censoring.

    The scale is profiled out exactly; the remaining score equation in the
    shape is solved by Newton steps safeguarded by bisection inside a
    bracket located by doubling from a moment-based start.

    Raises
    ------
    InsufficientEventsError
        Fewer than two uncensored observations.
    DegenerateSampleError
        All uncensored times coincide (the shape estimate diverges).
    NumericError
        No sign change found or the iteration cap is reached.
    """
    t = sample.times
    deltas = sample.deltas
    d = sample.num_events
    if d < 2:
        raise InsufficientEventsError(f"need at least 2 events, got {d}")
    log_t = np.log(t)
    event_logs = log_t[deltas == 1]
    sd_event = float(event_logs.std())
    if sd_event == 0.0:
        raise DegenerateSampleError("all uncensored times are equal")
    mean_event_log = float(event_logs.mean())

    # Moment start: the transformed sample should have the EV(0,1) spread.
    shape = 1.2826 / sd_event

    def score_at(s: float) -> float:
        return _profile_score(log_t, mean_event_log, d, s)[0]

    # The profile score is strictly decreasing, positive near 0.
    lo, hi = shape, shape
    s0 = score_at(shape)
    if s0 > 0.0:
        for _ in range(200):
            hi *= 2.0
            if score_at(hi) < 0.0:
                break
        else:
            raise NumericError("no sign change while doubling the shape bracket")
    elif s0 < 0.0:
        for _ in range(200):
            lo /= 2.0
            if score_at(lo) > 0.0:
                break
        else:
            raise NumericError("no sign change while halving the shape bracket")

    for _ in range(max_iter):
        score, dscore = _profile_score(log_t, mean_event_log, d, shape)
        if abs(score) < tol:
            break
        if score > 0.0:
            lo = max(lo, shape)
        else:
            hi = min(hi, shape)
        step = shape - score / dscore
        shape = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo < 1e-15 * max(1.0, shape):
            score = score_at(shape)
            break
    else:
        raise NumericError(
            f"shape iteration did not converge in {max_iter} steps "
            f"(|score|={abs(score):.3g}, bracket=[{lo:.6g},{hi:.6g}])"
        )
    if abs(score) >= 1e-8:
        raise NumericError(f"stalled with |score|={abs(score):.3g} >= 1e-8")

    return WeibullParams(scale=_profile_scale(log_t, d, shape), shape=shape)


def transform(sample: CensoredSample, params: WeibullParams) -> TransformedSample:
    """Map times to y = shape*(log t - log scale), sorted with indicators.

    The map is strictly increasing, so the sort order equals the time
    order; at exactly tied values uncensored observations come first.
    """
    y = params.shape * (np.log(sample.times) - np.log(params.scale))
    order = np.lexsort((1 - sample.deltas, y))
    return TransformedSample(y=y[order], deltas=sample.deltas[order], mle=params)


def km_jumps(ts: TransformedSample, *, last_mass: str = "full") -> KaplanMeierFit:
    """Kaplan-Meier jump masses at the ordered transformed values.

    jump[0] = delta_(1)/n and, for 1 <= j <= n-2,
    jump[j] = delta_(j+1)/(n-j) * prod_{k<=j} ((n-k)/(n-k+1))**delta_(k).
    With ``last_mass="full"`` (default) the final point absorbs the
    leftover product so the masses always total one; ``last_mass="event"``
    keeps the plain product-limit mass there instead, which leaves a
    defective estimate when the largest observation is censored.
    """
    if last_mass not in ("full", "event"):
        raise ConfigError(f"last_mass must be 'full' or 'event', got {last_mass!r}")
    n = ts.n
    deltas = ts.deltas
    jumps = np.zeros(n, dtype=float)
    if n == 1:
        jumps[0] = 1.0 if last_mass == "full" else float(deltas[0])
        return KaplanMeierFit(support=ts.y.copy(), jumps=jumps)

    # survival[j] = prod_{k=1..j} ((n-k)/(n-k+1))**delta_(k), j = 1..n-1.
    k = np.arange(1, n, dtype=float)
    factors = np.where(deltas[:-1] == 1, (n - k) / (n - k + 1.0), 1.0)
    survival = np.cumprod(factors)

    jumps[0] = deltas[0] / n
    j = np.arange(2, n)
    jumps[1 : n - 1] = deltas[1 : n - 1] / (n - j + 1.0) * survival[: n - 2]
    jumps[n - 1] = survival[n - 2] if last_mass == "full" else deltas[n - 1] * survival[n - 2]
    return KaplanMeierFit(support=ts.y.copy(), jumps=jumps)


def km_cdf(fit: KaplanMeierFit, t):
    """Right-continuous Kaplan-Meier distribution function at t."""
    return fit.cdf(t)
