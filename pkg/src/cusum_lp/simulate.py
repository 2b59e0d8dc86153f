"""Synthetic error processes, mean-change injection, and size/power studies."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import signal

from . import limits
from .cusum import Family, compute_cusum, darling_erdos_statistic, lp_statistic, renyi_statistic
from .errors import InvalidInputError, InvalidModelError, InvalidParameterError
from .variance import Demeaning, LrvConfig, estimate_lrv
from .weights import Uniform, Weight

BURN_IN = 1000


@dataclass(frozen=True)
class IIDNormal:
    s: float = 1.0

    def __post_init__(self):
        if self.s <= 0:
            raise InvalidModelError(f"innovation sd must be positive, got {self.s}")


@dataclass(frozen=True)
class IIDStudentT:
    df: float
    scale: float = 1.0

    def __post_init__(self):
        if self.df <= 2:
            raise InvalidModelError(f"need df > 2 for a finite variance, got df={self.df}")
        if self.scale <= 0:
            raise InvalidModelError(f"scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class AR1:
    rho: float
    s: float = 1.0

    def __post_init__(self):
        if not abs(self.rho) < 1:
            raise InvalidModelError(f"AR(1) needs |rho| < 1, got rho={self.rho}")
        if self.s <= 0:
            raise InvalidModelError(f"innovation sd must be positive, got {self.s}")


@dataclass(frozen=True)
class MA:
    coeffs: Tuple[float, ...]
    s: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if self.s <= 0:
            raise InvalidModelError(f"innovation sd must be positive, got {self.s}")


@dataclass(frozen=True)
class BernoulliShiftAR:
    """Stationary solution of e_i = a * tanh(e_{i-1}) + s * eta_i; the
    contraction |a| < 1 gives the decomposable-shift dependence structure."""

    a: float
    s: float = 1.0

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise InvalidModelError(f"contraction needs |a| < 1, got a={self.a}")
        if self.s <= 0:
            raise InvalidModelError(f"innovation sd must be positive, got {self.s}")


NoiseModel = Union[IIDNormal, IIDStudentT, AR1, MA, BernoulliShiftAR]


@dataclass(frozen=True)
class ChangeSpec:
    k_star: Optional[int] = None
    delta: float = 0.0
    mu0: float = 0.0


def _noise(noise: NoiseModel, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(noise, IIDNormal):
        return noise.s * rng.standard_normal(n)
    if isinstance(noise, IIDStudentT):
        return noise.scale * rng.standard_t(noise.df, size=n)
    if isinstance(noise, AR1):
        eta = noise.s * rng.standard_normal(n + BURN_IN)
        eps = signal.lfilter([1.0], [1.0, -noise.rho], eta)
        return eps[BURN_IN:]
    if isinstance(noise, MA):
        q = len(noise.coeffs)
        eta = rng.standard_normal(n + q)
        eps = eta[q:].copy()
        for j, c in enumerate(noise.coeffs, start=1):
            eps += c * eta[q - j : q - j + n]
        return noise.s * eps
    if isinstance(noise, BernoulliShiftAR):
        eta = rng.standard_normal(n + BURN_IN)
        eps = np.empty(n + BURN_IN)
        prev = 0.0
        for i in range(n + BURN_IN):
            prev = noise.a * np.tanh(prev) + noise.s * eta[i]
            eps[i] = prev
        return eps[BURN_IN:]
    raise InvalidModelError(f"unknown noise model {noise!r}")


def generate_series(
    noise: NoiseModel,
    change: ChangeSpec,
    n: int,
    seed_or_rng,
) -> np.ndarray:
    """X_i = mu0 + eps_i up to k_star, then mu0 + delta + eps_i after."""
    if n < 2:
        raise InvalidInputError(f"need n >= 2, got {n}")
    if change.k_star is not None and not 1 <= change.k_star < n:
        raise InvalidModelError(f"change point must satisfy 1 <= k* < n, got {change.k_star}")
    if isinstance(seed_or_rng, np.random.Generator):
        rng = seed_or_rng
    else:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed_or_rng)))
    x = change.mu0 + _noise(noise, n, rng)
    if change.k_star is not None and change.delta != 0.0:
        x[change.k_star :] += change.delta
    return x


def true_lrv(noise: NoiseModel) -> Optional[float]:
    """Analytic long-run variance where available; None for the nonlinear
    Bernoulli shift (validated against a batch-means oracle in the tests)."""
    if isinstance(noise, IIDNormal):
        return noise.s**2
    if isinstance(noise, IIDStudentT):
        return noise.scale**2 * noise.df / (noise.df - 2.0)
    if isinstance(noise, AR1):
        return noise.s**2 / (1.0 - noise.rho) ** 2
    if isinstance(noise, MA):
        return noise.s**2 * (1.0 + sum(noise.coeffs)) ** 2
    if isinstance(noise, BernoulliShiftAR):
        return None
    raise InvalidModelError(f"unknown noise model {noise!r}")


@dataclass(frozen=True)
class StudyConfig:
    noise: NoiseModel
    change: ChangeSpec
    n: int
    family: Family = Family.GENERAL_WEIGHTED
    p: float = 2.0
    weight: Weight = Uniform()
    kappa: float = 3.0
    t1: Optional[float] = None
    t2: Optional[float] = None
    alpha: float = 0.05
    replications: int = 1000
    seed: int = 0
    sigma: Union[float, str] = "auto"  # "auto" -> kernel estimate per replication
    lrv: LrvConfig = LrvConfig(demeaning=Demeaning.SPLIT_HALF)
    limit_grid: int = 2048
    limit_replications: int = 10_000

    def __post_init__(self):
        if self.replications < 100:
            raise InvalidParameterError(f"need >= 100 replications, got {self.replications}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError(f"alpha must be in (0, 1), got {self.alpha}")


@dataclass
class StudyReport:
    config: StudyConfig
    rejection_rate: float
    std_error: float
    critical_value: float
    statistics: np.ndarray

    def to_json(self, include_statistics: bool = False) -> str:
        cfg = {
            "noise": repr(self.config.noise),
            "change": repr(self.config.change),
            "n": self.config.n,
            "family": self.config.family.value,
            "p": self.config.p,
            "weight": repr(self.config.weight),
            "kappa": self.config.kappa,
            "t1": self.config.t1,
            "t2": self.config.t2,
            "alpha": self.config.alpha,
            "replications": self.config.replications,
            "seed": self.config.seed,
            "sigma": self.config.sigma,
        }
        payload = {
            "config": cfg,
            "rejection_rate": self.rejection_rate,
            "std_error": self.std_error,
            "critical_value": self.critical_value,
        }
        if include_statistics:
            payload["statistics"] = list(self.statistics)
        return json.dumps(payload, sort_keys=True)


def _limit_sample_for(config: StudyConfig, seed: int) -> limits.LimitSample:
    if config.family is Family.GENERAL_WEIGHTED:
        return limits.sample_limit_general(
            config.p, config.weight, grid_size=config.limit_grid,
            replications=config.limit_replications, seed=seed,
        )
    if config.family is Family.DARLING_ERDOS:
        return limits.analytic_darling_erdos()
    if config.family is Family.RENYI:
        return limits.sample_fb(
            config.p, config.kappa, replications=config.limit_replications, seed=seed,
        )
    raise InvalidParameterError(f"unknown family {config.family!r}")


def run_study(config: StudyConfig, limit_sample: Optional[limits.LimitSample] = None) -> StudyReport:
    """Monte Carlo size/power study: generate, normalize, test, aggregate.

    Replication i uses the i-th stream spawned from the root seed, so the
    report is a pure, order-independent function of the config.
    """
    root = np.random.SeedSequence(config.seed)
    limit_seed_ss, data_ss = root.spawn(2)
    if limit_sample is None:
        limit_sample = _limit_sample_for(config, int(limit_seed_ss.generate_state(1)[0]))
    cv = limits.critical_value(limit_sample, config.alpha)
    if config.family is Family.DARLING_ERDOS:
        constants = limits.compute_a(config.p)
        a_p, b_p = constants.a_p, constants.b_p
    n = config.n
    if config.family is Family.RENYI:
        t1 = config.t1 if config.t1 is not None else 1.0 / np.sqrt(n)
        t2 = config.t2 if config.t2 is not None else 1.0 - 1.0 / np.sqrt(n)
    stats_out = np.empty(config.replications)
    for i, child in enumerate(data_ss.spawn(config.replications)):
        rng = np.random.Generator(np.random.PCG64(child))
        x = generate_series(config.noise, config.change, n, rng)
        if config.sigma == "auto":
            sigma2 = estimate_lrv(x, config.lrv).value
        else:
            sigma2 = float(config.sigma) ** 2
        sigma = np.sqrt(sigma2)
        path = compute_cusum(x)
        if config.family is Family.GENERAL_WEIGHTED:
            stats_out[i] = lp_statistic(path, config.p, config.weight) / sigma**config.p
        elif config.family is Family.DARLING_ERDOS:
            stats_out[i] = darling_erdos_statistic(path, config.p, sigma, a_p, b_p).normalized
        else:
            stats_out[i] = renyi_statistic(path, config.p, config.kappa, t1, t2, sigma).normalized
    rate = float(np.mean(stats_out > cv))
    se = float(np.sqrt(rate * (1.0 - rate) / config.replications))
    return StudyReport(
        config=config,
        rejection_rate=rate,
        std_error=se,
        critical_value=cv,
        statistics=stats_out,
    )
