"""Long-run variance estimation for the error sequence.

The limit theorems scale the CUSUM functionals by sigma^p where sigma^2 is
the long-run variance of the errors.  It is estimated here by a standard
kernel (HAC) estimator

    sigma^2_hat = gamma(0) + 2 * sum_{j=1}^{h} K(j/h) * gamma(j)

on the demeaned series.  Demeaning is either by the grand mean (appropriate
under the no-change null) or by separate half-sample means, which removes
most of the contamination a single mean shift induces in the sample
autocovariances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .cusum import as_time_series
from .errors import InsufficientDataError, InvalidParameterError

LRV_FLOOR_REL = 1e-12


class Kernel(Enum):
    BARTLETT = "bartlett"
    PARZEN = "parzen"
    FLAT_TOP = "flat-top"


class Demeaning(Enum):
    FULL_SAMPLE = "full"
    SPLIT_HALF = "split-half"


AUTO = "auto"


@dataclass(frozen=True)
class LrvConfig:
    kernel: Kernel = Kernel.BARTLETT
    bandwidth: Union[float, str] = AUTO
    demeaning: Demeaning = Demeaning.FULL_SAMPLE


@dataclass
class LrvResult:
    value: float
    bandwidth: float
    degenerate: bool = field(default=False)


def kernel_weights(kernel: Kernel, x: np.ndarray) -> np.ndarray:
    """Lag-window weights K(x) for x = j/h in [0, 1]."""
    x = np.asarray(x, dtype=float)
    if kernel is Kernel.BARTLETT:
        return np.clip(1.0 - np.abs(x), 0.0, None)
    if kernel is Kernel.PARZEN:
        ax = np.abs(x)
        w = np.where(ax <= 0.5, 1.0 - 6.0 * ax**2 + 6.0 * ax**3, 2.0 * (1.0 - ax) ** 3)
        return np.where(ax <= 1.0, w, 0.0)
    if kernel is Kernel.FLAT_TOP:
        ax = np.abs(x)
        w = np.where(ax <= 0.5, 1.0, 2.0 * (1.0 - ax))
        return np.clip(np.where(ax <= 1.0, w, 0.0), 0.0, None)
    raise InvalidParameterError(f"unknown kernel {kernel!r}")


def _demean(x: np.ndarray, demeaning: Demeaning) -> np.ndarray:
    n = x.size
    if demeaning is Demeaning.FULL_SAMPLE:
        return x - x.mean()
    half = n // 2
    out = x.copy()
    out[:half] -= x[:half].mean()
    out[half:] -= x[half:].mean()
    return out


def _autocovariances(e: np.ndarray, max_lag: int) -> np.ndarray:
    n = e.size
    gam = np.empty(max_lag + 1)
    for j in range(max_lag + 1):
        gam[j] = np.dot(e[: n - j], e[j:]) / n
    return gam


def auto_bandwidth(series, kernel: Kernel = Kernel.BARTLETT) -> float:
    """Andrews-style plug-in bandwidth with an AR(1) pilot, clamped to
    [1, sqrt(N)]."""
    x = as_time_series(series)
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"need at least 4 observations, got {n}")
    e = x - x.mean()
    denom = np.dot(e[:-1], e[:-1])
    rho = np.dot(e[:-1], e[1:]) / denom if denom > 0 else 0.0
    rho = float(np.clip(rho, -0.97, 0.97))
    alpha = 4.0 * rho**2 / ((1.0 - rho) ** 2 * (1.0 + rho) ** 2)
    h = np.floor(1.1447 * (alpha * n) ** (1.0 / 3.0))
    return float(np.clip(h, 1.0, np.sqrt(n)))


def estimate_lrv(series, config: LrvConfig = LrvConfig()) -> LrvResult:
    """Kernel long-run variance estimate, floored at 1e-12 * gamma(0) so the
    result is always usable as a divisor."""
    x = as_time_series(series)
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"need at least 4 observations, got {n}")
    if config.bandwidth == AUTO:
        h = auto_bandwidth(x, config.kernel)
    else:
        h = float(config.bandwidth)
        if not 1.0 <= h <= n - 1:
            raise InvalidParameterError(f"bandwidth must satisfy 1 <= h <= N-1, got {h}")
    e = _demean(x, config.demeaning)
    max_lag = min(int(np.floor(h)), n - 1)
    gam = _autocovariances(e, max_lag)
    if max_lag >= 1:
        w = kernel_weights(config.kernel, np.arange(1, max_lag + 1) / h)
        value = gam[0] + 2.0 * np.dot(w, gam[1:])
    else:
        value = gam[0]
    floor = LRV_FLOOR_REL * gam[0] if gam[0] > 0 else LRV_FLOOR_REL
    degenerate = value <= floor
    return LrvResult(value=float(max(value, floor)), bandwidth=h, degenerate=bool(degenerate))
