"""CUSUM path construction and exact weighted L^p statistics.

For observations x_1..x_N the CUSUM values are

    Z(k) = sum_{i<=k} x_i - (k/N) sum_{i<=N} x_i,  k = 0..N,

with Z(0) = Z(N) = 0.  The rescaled process Z_N(t) = Z(floor((N+1)t)) / sqrt(N)
is a step function, constant on [k/(N+1), (k+1)/(N+1)) and zero outside
[1/(N+1), N/(N+1)].  Every weighted L^p functional of Z_N is therefore an
exact finite sum of segment values times integrals of 1/w, which is how the
statistics below are computed (no grid approximation).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DivergentLimitError,
    InvalidInputError,
    InvalidParameterError,
    InvalidTrimError,
)
from .weights import (
    Power,
    TrimmedPower,
    Weight,
    inv_power_integrals,
    require_admissible,
    segment_integral_table,
)


def as_time_series(values) -> np.ndarray:
    """Validate and convert input to a 1-d float array of length N >= 2."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError(f"expected a 1-d series, got shape {x.shape}")
    if x.size < 2:
        raise InvalidInputError(f"need at least 2 observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("series contains NaN or infinite values")
    return x


class Family(Enum):
    GENERAL_WEIGHTED = "general"
    DARLING_ERDOS = "darling-erdos"
    RENYI = "renyi"


@dataclass(frozen=True)
class CusumPath:
    """Integer-indexed CUSUM values z[k] = Z(k), k = 0..n."""

    z: np.ndarray
    n: int


@dataclass(frozen=True)
class StatisticValue:
    raw: float
    normalized: float
    family: Family
    p: float


def compute_cusum(values) -> CusumPath:
    """Build the CUSUM path of a series; z[0] = z[n] = 0 by construction."""
    x = as_time_series(values)
    n = x.size
    s = np.concatenate(([0.0], np.cumsum(x)))
    z = s - (np.arange(n + 1) / n) * s[-1]
    return CusumPath(z=z, n=n)


def lp_statistic(path: CusumPath, p: float, weight: Weight) -> float:
    """int_0^1 |Z_N(t)|^p / w(t) dt, computed exactly over the constancy
    segments.  For a TrimmedPower weight the integral runs over (t1, t2)
    only (same integral as the raw Renyi statistic)."""
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    require_admissible(p, weight)
    if isinstance(weight, TrimmedPower):
        return _trimmed_raw(path, p, weight.kappa, weight.t1, weight.t2)
    n = path.n
    seg = segment_integral_table(n, weight)
    vals = np.abs(path.z[1:n]) / np.sqrt(n)
    return float(np.dot(vals**p, seg))


def _trimmed_raw(path: CusumPath, p: float, kappa: float, t1: float, t2: float) -> float:
    n = path.n
    k = np.arange(1, n)
    lo = np.maximum(k / (n + 1.0), t1)
    hi = np.minimum((k + 1) / (n + 1.0), t2)
    keep = hi > lo
    if not np.any(keep):
        raise InvalidTrimError(
            f"trimming interval ({t1}, {t2}) contains no CUSUM segment for n={n}"
        )
    seg = inv_power_integrals(lo[keep], hi[keep], kappa)
    vals = np.abs(path.z[1:n][keep]) / np.sqrt(n)
    return float(np.dot(vals**p, seg))


def renyi_statistic(
    path: CusumPath,
    p: float,
    kappa: float,
    t1: float,
    t2: float,
    sigma: float = 1.0,
) -> StatisticValue:
    """Trimmed heavy-weight statistic int_{t1}^{t2} |Z_N(t)|^p / (t(1-t))^kappa dt.

    The normalization multiplies by r^(kappa - p/2 - 1) with r = min(t1, 1-t2)
    and divides by sigma^p; the scaling exponent follows from the Wiener scale
    transformation (substituting t = t1*s pulls out t1^(p/2+1-kappa)).
    """
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    if kappa <= p / 2.0 + 1.0:
        raise DivergentLimitError(
            f"kappa={kappa} must exceed p/2 + 1 = {p / 2.0 + 1.0} for the trimmed limit to exist"
        )
    n = path.n
    if not (1.0 / (n + 1.0) <= t1 < t2 <= n / (n + 1.0)):
        raise InvalidTrimError(
            f"need 1/(n+1) <= t1 < t2 <= n/(n+1); got t1={t1}, t2={t2}, n={n}"
        )
    if sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    raw = _trimmed_raw(path, p, kappa, t1, t2)
    r = min(t1, 1.0 - t2)
    normalized = r ** (kappa - p / 2.0 - 1.0) * raw / sigma**p
    return StatisticValue(raw=raw, normalized=normalized, family=Family.RENYI, p=p)


def darling_erdos_statistic(
    path: CusumPath,
    p: float,
    sigma: float,
    a_p: float,
    b_p: float,
) -> StatisticValue:
    """Heavy-weight statistic with w(t) = (t(1-t))^(1+p/2), centered by
    2 b(p) log N and scaled by (4 a(p) log N)^(-1/2)."""
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    if sigma <= 0 or a_p <= 0:
        raise InvalidParameterError(f"sigma and a_p must be positive, got sigma={sigma}, a_p={a_p}")
    n = path.n
    if n < 3:
        raise InvalidParameterError(f"need n >= 3 for the log-N normalization, got n={n}")
    seg = segment_integral_table(n, Power(1.0 + p / 2.0))
    vals = np.abs(path.z[1:n]) / np.sqrt(n)
    raw = float(np.dot(vals**p, seg))
    logn = np.log(n)
    normalized = (raw / sigma**p - 2.0 * b_p * logn) / np.sqrt(4.0 * a_p * logn)
    return StatisticValue(raw=raw, normalized=float(normalized), family=Family.DARLING_ERDOS, p=p)
