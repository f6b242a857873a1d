"""Fock-series weights, certified truncation, and photon-number statistics.

The state's photon distribution over |n+k> is proportional to

    w_n = |alpha|^(2n) * [f^2(n+k)]! * (n+k)! / ((n!)^2 * [f^2(n)]!),

an entire series whose terms span thousands of orders of magnitude, so all
weights are kept as natural logs and every accumulation is a log-sum-exp
pivoted at the running maximum term.  For the Penson-Solomon deformation the
deformed factorial has the closed form [f^2(m)]! = q^(-m(m-1)), giving

    ln w_n = 2n ln|alpha| + lnGamma(n+k+1) - 2 lnGamma(n+1)
             + (k(k-1) + 2nk) ln(1/q).

Successive-term ratios are available exactly (no log round-trip) as

    w_{n+1}/w_n = |alpha|^2 q^(-2k) (n+k+1)/(n+1)^2,

which is strictly decreasing in n, so once it drops below 1 the neglected
tail is bounded by the geometric sum next-term/(1 - ratio).  Adaptive
truncation stops when that certified bound falls below the requested
relative tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import (
    DegenerateAmplitude,
    HardCapExceeded,
    InvalidParameter,
    VacuumUndefined,
)
from .states import StateSpec

DEFAULT_REL_TOL = 1e-14
DEFAULT_HARD_CAP = 2_000_000


@dataclass(frozen=True)
class AdaptiveTruncation:
    """Stop once the certified relative tail bound drops below rel_tol."""

    rel_tol: float = DEFAULT_REL_TOL
    hard_cap: int = DEFAULT_HARD_CAP

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1.0):
            raise InvalidParameter(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if not isinstance(self.hard_cap, int) or self.hard_cap < 1:
            raise InvalidParameter(f"hard_cap must be a positive integer, got {self.hard_cap!r}")


@dataclass(frozen=True)
class FixedTruncation:
    """Keep exactly n_max + 1 terms, whether or not the series has converged."""

    n_max: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_max, int) or isinstance(self.n_max, bool) or self.n_max < 0:
            raise InvalidParameter(f"n_max must be a nonnegative integer, got {self.n_max!r}")


TruncationPolicy = AdaptiveTruncation | FixedTruncation


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Log-weights ln w_n for n = 0..n_max plus a certified relative tail bound.

    ``tail_bound_rel`` is an upper bound on the neglected tail mass relative
    to the retained sum; it is +inf when no geometric bound exists (fixed
    cutoff with term ratio still >= 1).  ``converged`` is False whenever the
    bound fails the policy tolerance, and the flag must propagate into every
    quantity derived from this series.
    """

    spec: StateSpec
    log_weights: np.ndarray
    n_max: int
    tail_bound_rel: float
    converged: bool


@dataclass(frozen=True)
class PhotonStatistics:
    mean_n: float
    mean_n2: float
    variance: float
    mandel_q: float
    tail_bound_rel: float
    converged: bool


def log_weight(spec: StateSpec, n: int) -> float:
    """ln w_n of the normalization series, via log-gamma and the closed-form
    deformed factorial (never by repeated multiplication)."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise InvalidParameter(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    if spec.alpha_abs == 0.0:
        if n > 0:
            raise DegenerateAmplitude(
                "alpha_abs = 0: w_n vanishes for every n > 0; only n = 0 has a finite log-weight")
        return _log_weight_alpha0(spec)
    k = spec.k
    return (2.0 * n * math.log(spec.alpha_abs)
            + math.lgamma(n + k + 1) - 2.0 * math.lgamma(n + 1)
            + (k * (k - 1) + 2 * n * k) * math.log(1.0 / spec.q))


def _log_weight_alpha0(spec: StateSpec) -> float:
    # w_0 = q^(-k(k-1)) * k!, the only surviving term at alpha = 0
    k = spec.k
    return math.lgamma(k + 1) + k * (k - 1) * math.log(1.0 / spec.q)


def weight_ratio(spec: StateSpec, n: int) -> float:
    """Exact successive-term ratio w_{n+1}/w_n = |alpha|^2 q^(-2k) (n+k+1)/(n+1)^2."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise InvalidParameter(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    return _ratio_constant(spec) * (n + spec.k + 1) / ((n + 1) * (n + 1))


def _ratio_constant(spec: StateSpec) -> float:
    return spec.alpha_abs ** 2 * spec.q ** (-2 * spec.k)


def _log_weights_block(spec: StateSpec, n_lo: int, n_hi: int) -> np.ndarray:
    """Vectorized ln w_n for n in [n_lo, n_hi). Requires alpha_abs > 0."""
    n = np.arange(n_lo, n_hi, dtype=np.float64)
    k = spec.k
    return (2.0 * n * math.log(spec.alpha_abs)
            + gammaln(n + k + 1) - 2.0 * gammaln(n + 1)
            + (k * (k - 1) + 2.0 * n * k) * math.log(1.0 / spec.q))


def _first_subunit_ratio_index(spec: StateSpec) -> int:
    """Smallest n with weight_ratio(spec, n) < 1 (0 if already below at n=0)."""
    c = _ratio_constant(spec)
    if c == 0.0:
        return 0
    # (n+1)^2 = c (n+k+1) -> crossing near the positive quadratic root
    disc = (c - 2.0) ** 2 - 4.0 * (1.0 - c * (spec.k + 1))
    n = 0 if disc < 0.0 else max(0, int((c - 2.0 + math.sqrt(disc)) / 2.0))
    while n > 0 and weight_ratio(spec, n - 1) < 1.0:
        n -= 1
    while weight_ratio(spec, n) >= 1.0:
        n += 1
    return n


def _degenerate_series(spec: StateSpec) -> TruncatedSeries:
    return TruncatedSeries(spec=spec,
                           log_weights=np.array([_log_weight_alpha0(spec)]),
                           n_max=0, tail_bound_rel=0.0, converged=True)


def truncate(spec: StateSpec, policy: TruncationPolicy) -> TruncatedSeries:
    """Evaluate log-weights under the given truncation policy.

    Adaptive: accumulate until the term ratio r = w_{n+1}/w_n is below 1 and
    the geometric tail bound w_{n+1}/(1-r) is at most rel_tol times the
    retained sum (valid since the ratio decreases monotonically).  Raises
    HardCapExceeded if the cap is passed first.

    Fixed: store exactly n_max + 1 weights; the series counts as converged
    only if the same certified bound happens to hold at n_max against
    DEFAULT_REL_TOL, otherwise the tail bound is reported as +inf (ratio
    still >= 1) or as the failing finite bound.
    """
    if not isinstance(spec, StateSpec):
        raise InvalidParameter("spec must be a StateSpec")
    if spec.alpha_abs == 0.0:
        # every n >= 1 weight is exactly zero; single-term series, no tail
        return _degenerate_series(spec)
    if isinstance(policy, AdaptiveTruncation):
        return _truncate_adaptive(spec, policy)
    if isinstance(policy, FixedTruncation):
        return _truncate_fixed(spec, policy)
    raise InvalidParameter(f"unknown truncation policy {policy!r}")


def _truncate_adaptive(spec: StateSpec, policy: AdaptiveTruncation) -> TruncatedSeries:
    # ratio at the cap is exact and overflow-safe; if it is still >= 1 there,
    # the peak lies past the cap and no stopping test can ever pass
    if (not math.isfinite(_ratio_constant(spec))
            or weight_ratio(spec, policy.hard_cap) >= 1.0):
        raise HardCapExceeded(
            f"term ratio stays >= 1 at hard_cap={policy.hard_cap}; "
            "the series peak is beyond desk scale")
    n_peak = _first_subunit_ratio_index(spec)

    # Bulk phase: all n < n_peak have ratio >= 1, so the stopping test cannot
    # pass there; evaluate them vectorized.
    lws = list(_log_weights_block(spec, 0, n_peak))
    if lws:
        m = float(np.max(lws))
        scaled_sum = float(np.exp(np.asarray(lws) - m).sum())
    else:
        m = -math.inf
        scaled_sum = 0.0

    # Tail phase: one term at a time with the certified stopping test.
    n = n_peak
    while True:
        lw = log_weight(spec, n)
        if lw > m:
            scaled_sum *= math.exp(m - lw)
            m = lw
        scaled_sum += math.exp(lw - m)
        lws.append(lw)
        r = weight_ratio(spec, n)
        if r < 1.0:
            next_scaled = math.exp(lw - m) * r
            bound = next_scaled / (1.0 - r) / scaled_sum
            if bound <= policy.rel_tol:
                return TruncatedSeries(spec=spec,
                                       log_weights=np.asarray(lws),
                                       n_max=n, tail_bound_rel=bound,
                                       converged=True)
        n += 1
        if n > policy.hard_cap:
            raise HardCapExceeded(
                f"adaptive truncation passed hard_cap={policy.hard_cap} "
                f"without certifying rel_tol={policy.rel_tol}")


def _truncate_fixed(spec: StateSpec, policy: FixedTruncation) -> TruncatedSeries:
    lws = _log_weights_block(spec, 0, policy.n_max + 1)
    r = weight_ratio(spec, policy.n_max)
    if r >= 1.0:
        # no geometric bound exists; the neglected tail may dominate
        return TruncatedSeries(spec=spec, log_weights=lws, n_max=policy.n_max,
                               tail_bound_rel=math.inf, converged=False)
    m = float(lws.max())
    scaled_sum = float(np.exp(lws - m).sum())
    bound = math.exp(float(lws[-1]) - m) * r / (1.0 - r) / scaled_sum
    return TruncatedSeries(spec=spec, log_weights=lws, n_max=policy.n_max,
                           tail_bound_rel=bound,
                           converged=bound <= DEFAULT_REL_TOL)


def _check_series_spec(series: TruncatedSeries, spec: StateSpec | None) -> StateSpec:
    if spec is not None and spec != series.spec:
        raise InvalidParameter("series was built from a different StateSpec")
    return series.spec


def normalization_log(series: TruncatedSeries) -> float:
    """ln N = -(1/2) ln sum_n w_n over the retained weights."""
    return -0.5 * float(logsumexp(series.log_weights))


def photon_distribution(series: TruncatedSeries,
                        spec: StateSpec | None = None) -> list[tuple[int, float]]:
    """Retained photon-number distribution [(k, P(k)), (k+1, P(k+1)), ...].

    Support starts at photon number k; probabilities are normalized over the
    retained terms and therefore sum to 1 up to rounding (the true
    distribution differs by at most tail_bound_rel).
    """
    spec = _check_series_spec(series, spec)
    lws = series.log_weights
    z = np.exp(lws - lws.max())
    p = z / z.sum()
    return [(n + spec.k, float(pn)) for n, pn in enumerate(p)]


def photon_statistics(series: TruncatedSeries,
                      spec: StateSpec | None = None) -> PhotonStatistics:
    """Mean, second moment, variance, and Mandel Q of the retained distribution.

    Two-pass evaluation: the mean first, then the variance in centered form
    sum w_n (n+k-mu)^2 / sum w_n, which avoids the cancellation of
    <n^2> - <n>^2 when the mean is large.  Q = variance/mean - 1.
    """
    spec = _check_series_spec(series, spec)
    lws = series.log_weights
    z = np.exp(lws - lws.max())
    ns = np.arange(lws.size, dtype=np.float64) + spec.k
    total = z.sum()
    mean = float((z * ns).sum() / total)
    if mean == 0.0:
        raise VacuumUndefined("Mandel Q undefined for the vacuum (mean photon number 0)")
    variance = float((z * (ns - mean) ** 2).sum() / total)
    return PhotonStatistics(mean_n=mean,
                            mean_n2=variance + mean * mean,
                            variance=variance,
                            mandel_q=variance / mean - 1.0,
                            tail_bound_rel=series.tail_bound_rel,
                            converged=series.converged)
