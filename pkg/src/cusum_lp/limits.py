"""Limit distributions of the weighted L^p CUSUM statistics.

Three families:

* ``general-weighted``      int_0^1 |B(t)|^p / w(t) dt for a Brownian bridge B
* ``darling-erdos-normal``  a standard normal (after log-N centering/scaling
  with the constants a(p), b(p) computed here)
* ``fraktur-b``             gamma1^e * int_1^inf |W(t)|^p / t^kappa dt
                            + gamma2^e * (independent copy), e = kappa - p/2 - 1

The first and third are simulated by Monte Carlo; the second is analytic.
Samplers derive one independent stream per replication from the root seed,
so the draw for replication i is a pure function of (seed, i).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special, stats

from ._version import __version__
from .errors import (
    DivergentLimitError,
    InvalidParameterError,
    PrecisionError,
    QuadratureAccuracyError,
)
from .weights import (
    Power,
    TrimmedPower,
    Uniform,
    Weight,
    power_moment_integral,
    require_admissible,
)

GENERAL_WEIGHTED = "general-weighted"
DARLING_ERDOS_NORMAL = "darling-erdos-normal"
FRAKTUR_B = "fraktur-b"


@dataclass(frozen=True)
class LimitSample:
    """Monte Carlo draws from one limit distribution, sorted ascending."""

    draws: np.ndarray
    family: str
    params: dict
    grid_size: Optional[int]
    replications: int
    seed: int
    truncation_horizon: Optional[float] = None
    bias_bound: float = 0.0


@dataclass(frozen=True)
class ConstantsPair:
    a_p: float
    b_p: float
    p: float
    quadrature_error_estimate: float
    g_u_mass_deviation: float


# ---------------------------------------------------------------------------
# Constants a(p), b(p)
# ---------------------------------------------------------------------------


def compute_b(p: float) -> float:
    """Absolute p-th moment of a standard normal: 2^(p/2) Gamma((p+1)/2) / sqrt(pi)."""
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    return float(np.exp(0.5 * p * np.log(2.0) + special.gammaln((p + 1) / 2.0) - 0.5 * np.log(np.pi)))


def _folded_moment(rho: float, p: float, n_eta: int, n_xi: int) -> float:
    """int int |xy|^p g(x, y) dx dy for the (unnormalized) density

        g(x,y) = exp(-(x^2 + y^2 - 2 rho |xy|) / (2 (1-rho^2))) / (2 pi sqrt(1-rho^2)).

    g only depends on |x|, |y| and equals the correlation-rho bivariate normal
    density on the positive quadrant, so the integral is 4x the quadrant
    integral.  Rotating to principal axes xi = (x+y)/sqrt(2), eta = (x-y)/sqrt(2)
    separates the Gaussian (variances 1+rho, 1-rho) and maps the quadrant to
    xi > |eta|, with xy = (xi^2 - eta^2)/2.
    """
    s1 = np.sqrt(1.0 + rho)
    s2 = np.sqrt(1.0 - rho)
    x_eta, w_eta = np.polynomial.legendre.leggauss(n_eta)
    x_xi, w_xi = np.polynomial.legendre.leggauss(n_xi)
    # eta in [0, 10 s2]
    eta_half = 5.0 * s2
    eta = eta_half * (x_eta + 1.0)
    w_e = eta_half * w_eta
    # xi in [eta, eta + 12 s1] for each eta
    xi_half = 6.0 * s1
    xi = eta[:, None] + xi_half * (x_xi[None, :] + 1.0)
    w_x = xi_half * w_xi
    dens = (
        np.exp(-0.5 * (xi / s1) ** 2 - 0.5 * (eta[:, None] / s2) ** 2)
        / (2.0 * np.pi * s1 * s2)
    )
    if p == 0.0:
        integrand = dens
    else:
        integrand = (0.5 * (xi**2 - eta[:, None] ** 2)) ** p * dens
    inner = integrand @ w_x
    return float(8.0 * np.dot(w_e, inner))


def _a_quadrature(p: float, bp2: float, u_max: float, n_u: int, n_eta: int, n_xi: int):
    """2 * int_0^{u_max} c(u) du with the substitution u = v^2, plus the mass
    of the printed density at each u node (it is not normalized to 1)."""
    x_v, w_v = np.polynomial.legendre.leggauss(n_u)
    v_half = 0.5 * np.sqrt(u_max)
    v = v_half * (x_v + 1.0)
    w = v_half * w_v
    c_vals = np.empty(n_u)
    mass_dev = 0.0
    for i, vi in enumerate(v):
        u = vi * vi
        rho = np.exp(-u)
        c_vals[i] = _folded_moment(rho, p, n_eta, n_xi) - bp2
        mass_dev = max(mass_dev, abs(_folded_moment(rho, 0.0, n_eta, n_xi) - 1.0))
    a_val = 2.0 * np.dot(w, 2.0 * v * c_vals)
    c_tail = abs(_folded_moment(np.exp(-u_max), p, n_eta, n_xi) - bp2)
    return a_val, c_tail, mass_dev


def compute_a(p: float, u_max: float = 30.0, rel_tol: float = 1e-4) -> ConstantsPair:
    """The outer-integral constant a(p), computed by nested Gauss-Legendre
    quadrature with the integrand taken verbatim (|xy| inside the exponent).

    The error estimate combines node-refinement agreement with the analytic
    exponential tail bound of the outer integral; the mass deviation reports
    how far the printed density is from integrating to one (it is not a
    probability density, which is surfaced rather than corrected).
    """
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    b_p = compute_b(p)
    bp2 = b_p * b_p
    coarse, _, _ = _a_quadrature(p, bp2, u_max, 48, 128, 128)
    fine, c_tail, mass_dev = _a_quadrature(p, bp2, u_max, 72, 192, 192)
    # |c(u)| decays at least like e^-(u - u_max) relative to c(u_max)
    err = abs(fine - coarse) + 2.0 * c_tail
    pair = ConstantsPair(
        a_p=float(fine),
        b_p=b_p,
        p=p,
        quadrature_error_estimate=float(err),
        g_u_mass_deviation=float(mass_dev),
    )
    if abs(fine) > 0 and err / abs(fine) > rel_tol:
        exc = QuadratureAccuracyError(
            f"a({p}) quadrature reached relative error {err / abs(fine):.2e} > {rel_tol}",
            achieved=float(err / abs(fine)),
        )
        exc.partial = pair
        raise exc
    return pair


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def _child_rngs(seed: int, n: int):
    for child in np.random.SeedSequence(seed).spawn(n):
        yield np.random.Generator(np.random.PCG64(child))


def sample_brownian_bridge(grid_size: int, rng) -> np.ndarray:
    """One bridge path on t_j = j/grid_size, j = 0..grid_size, built as
    W(t) - t W(1) from cumulative Gaussian increments (exact joint law)."""
    if grid_size < 2:
        raise InvalidParameterError(f"grid_size must be >= 2, got {grid_size}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng)))
    m = grid_size
    inc = rng.standard_normal(m) * np.sqrt(1.0 / m)
    w = np.concatenate(([0.0], np.cumsum(inc)))
    t = np.arange(m + 1) / m
    b = w - t * w[-1]
    b[0] = 0.0
    b[-1] = 0.0
    return b


def _endpoint_bias(p: float, weight: Weight, grid_size: int) -> float:
    """Expected mass of the two dropped endpoint cells:
    b(p) * int_cell (t(1-t))^{p/2} / w(t) dt (exact via incomplete beta)."""
    h = 1.0 / grid_size
    if isinstance(weight, Uniform):
        r = p / 2.0
    elif isinstance(weight, Power):
        r = p / 2.0 - weight.q
    else:
        return 0.0  # trimmed weights stay away from the endpoints
    b_p = compute_b(p)
    return b_p * (power_moment_integral(0.0, h, r) + power_moment_integral(1.0 - h, 1.0, r))


def sample_limit_general(
    p: float,
    weight: Weight,
    grid_size: int = 4096,
    replications: int = 10_000,
    seed: int = 0,
) -> LimitSample:
    """Draws of int |B(t)|^p / w(t) dt by the trapezoid rule on a uniform grid.

    The first and last grid cells are dropped (the integrand can be singular
    there for power weights) and replaced by their exact expected mass; the
    substitution is recorded as ``bias_bound``.
    """
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    require_admissible(p, weight)
    m = grid_size
    t = np.arange(1, m) / m
    if isinstance(weight, Uniform):
        inv_w = np.ones(m - 1)
    elif isinstance(weight, Power):
        inv_w = (t * (1.0 - t)) ** (-weight.q)
    elif isinstance(weight, TrimmedPower):
        inv_w = np.where((t > weight.t1) & (t < weight.t2), (t * (1.0 - t)) ** (-weight.kappa), 0.0)
    else:
        raise TypeError(f"unknown weight {weight!r}")
    # trapezoid over [1/m, (m-1)/m]: interior nodes weight 1/m, ends 1/(2m)
    quad_w = inv_w / m
    quad_w[0] *= 0.5
    quad_w[-1] *= 0.5
    bias = _endpoint_bias(p, weight, m)
    draws = np.empty(replications)
    for i, rng in enumerate(_child_rngs(seed, replications)):
        b = sample_brownian_bridge(m, rng)
        draws[i] = np.dot(np.abs(b[1:m]) ** p, quad_w) + bias
    draws.sort()
    return LimitSample(
        draws=draws,
        family=GENERAL_WEIGHTED,
        params={"p": p, "weight": _weight_params(weight)},
        grid_size=m,
        replications=replications,
        seed=seed,
        bias_bound=float(bias),
    )


def analytic_darling_erdos() -> LimitSample:
    """Marker sample for the analytic standard-normal limit family."""
    return LimitSample(
        draws=np.empty(0),
        family=DARLING_ERDOS_NORMAL,
        params={},
        grid_size=None,
        replications=0,
        seed=0,
    )


def fb_truncation_horizon(p: float, kappa: float, tail_tol: float) -> float:
    """Smallest T with expected tail b(p) T^(p/2+1-kappa) / (kappa-p/2-1)
    below tail_tol (from E|W(t)|^p = t^{p/2} b(p) and Fubini)."""
    e = kappa - p / 2.0 - 1.0
    if e <= 0:
        raise DivergentLimitError(f"kappa={kappa} must exceed p/2 + 1 = {p / 2.0 + 1.0}")
    return max(float((compute_b(p) / (tail_tol * e)) ** (1.0 / e)), 2.0)


def sample_fb(
    p: float,
    kappa: float,
    gamma1: float = 1.0,
    gamma2: float = 1.0,
    grid_step: float = 0.02,
    replications: int = 10_000,
    tail_tol: float = 1e-3,
    seed: int = 0,
) -> LimitSample:
    """Draws of gamma1^e I1 + gamma2^e I2 with independent truncated integrals
    I = int_1^T |W(t)|^p / t^kappa dt, e = kappa - p/2 - 1."""
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    if gamma1 <= 0 or gamma2 <= 0 or not np.isfinite(gamma1) or not np.isfinite(gamma2):
        raise InvalidParameterError(f"gamma1, gamma2 must be positive finite, got {gamma1}, {gamma2}")
    e = kappa - p / 2.0 - 1.0
    horizon = fb_truncation_horizon(p, kappa, tail_tol)
    h = grid_step
    n = int(np.ceil((horizon - 1.0) / h))
    t = 1.0 + h * np.arange(n + 1)
    quad_w = h * t ** (-kappa)
    quad_w[0] *= 0.5
    quad_w[-1] *= 0.5
    sqrt_h = np.sqrt(h)
    c1 = gamma1**e
    c2 = gamma2**e
    draws = np.empty(replications)
    for i, rng in enumerate(_child_rngs(seed, replications)):
        z = rng.standard_normal(2 * (n + 1))
        steps = z[: n + 1] * sqrt_h
        steps[0] = z[0]  # W(1) ~ N(0, 1)
        w1 = np.cumsum(steps)
        steps = z[n + 1 :] * sqrt_h
        steps[0] = z[n + 1]
        w2 = np.cumsum(steps)
        i1 = np.dot(np.abs(w1) ** p, quad_w)
        i2 = np.dot(np.abs(w2) ** p, quad_w)
        draws[i] = c1 * i1 + c2 * i2
    draws.sort()
    return LimitSample(
        draws=draws,
        family=FRAKTUR_B,
        params={"p": p, "kappa": kappa, "gamma1": gamma1, "gamma2": gamma2, "grid_step": grid_step, "tail_tol": tail_tol},
        grid_size=n,
        replications=replications,
        seed=seed,
        truncation_horizon=float(t[-1]),
    )


# ---------------------------------------------------------------------------
# Critical values and p-values
# ---------------------------------------------------------------------------


def critical_value(sample: LimitSample, alpha: float) -> float:
    """Empirical (1-alpha) quantile (higher interpolation); analytic normal
    quantile for the Darling-Erdos family."""
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must be in (0, 1), got {alpha}")
    if sample.family == DARLING_ERDOS_NORMAL:
        return float(stats.norm.ppf(1.0 - alpha))
    if sample.replications < 100:
        raise PrecisionError(f"need at least 100 replications, got {sample.replications}")
    return float(np.quantile(sample.draws, 1.0 - alpha, method="higher"))


def p_value(sample: LimitSample, observed: float) -> float:
    """(1 + #{draws >= observed}) / (replications + 1); analytic upper tail
    for the Darling-Erdos family."""
    if sample.family == DARLING_ERDOS_NORMAL:
        return float(stats.norm.sf(observed))
    n = sample.replications
    if n == 0:
        raise PrecisionError("empty limit sample")
    count = int(np.sum(sample.draws >= observed))
    return (1 + count) / (n + 1)


# ---------------------------------------------------------------------------
# Table and draw persistence (CSV with a '#'-prefixed JSON header line)
# ---------------------------------------------------------------------------


def _weight_params(weight: Weight) -> dict:
    if isinstance(weight, Uniform):
        return {"kind": "uniform"}
    if isinstance(weight, Power):
        return {"kind": "power", "q": weight.q}
    if isinstance(weight, TrimmedPower):
        return {"kind": "trimmed-power", "kappa": weight.kappa, "t1": weight.t1, "t2": weight.t2}
    raise TypeError(f"unknown weight {weight!r}")


def weight_from_params(params: dict) -> Weight:
    kind = params["kind"]
    if kind == "uniform":
        return Uniform()
    if kind == "power":
        return Power(q=params["q"])
    if kind == "trimmed-power":
        return TrimmedPower(kappa=params["kappa"], t1=params["t1"], t2=params["t2"])
    raise ValueError(f"unknown weight kind {kind!r}")


def _header(sample: LimitSample) -> str:
    meta = {
        "family": sample.family,
        "params": sample.params,
        "grid_size": sample.grid_size,
        "replications": sample.replications,
        "seed": sample.seed,
        "truncation_horizon": sample.truncation_horizon,
        "bias_bound": sample.bias_bound,
        "version": __version__,
    }
    return "#" + json.dumps(meta, sort_keys=True)


def write_table(path, sample: LimitSample, alphas=(0.10, 0.05, 0.025, 0.01)) -> None:
    lines = [_header(sample), "alpha,critical_value"]
    for alpha in alphas:
        lines.append(f"{alpha!r},{critical_value(sample, alpha)!r}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def read_table(path):
    """Returns (metadata dict, list of (alpha, critical_value))."""
    with open(path, encoding="utf-8") as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    meta = json.loads(lines[0][1:])
    rows = []
    for ln in lines[2:]:
        a, cv = ln.split(",")
        rows.append((float(a), float(cv)))
    return meta, rows


def write_draws(path, sample: LimitSample) -> None:
    lines = [_header(sample), "draw"]
    lines.extend(repr(float(d)) for d in sample.draws)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def read_draws(path) -> LimitSample:
    with open(path, encoding="utf-8") as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    meta = json.loads(lines[0][1:])
    draws = np.array([float(x) for x in lines[2:]])
    return LimitSample(
        draws=draws,
        family=meta["family"],
        params=meta["params"],
        grid_size=meta["grid_size"],
        replications=meta["replications"],
        seed=meta["seed"],
        truncation_horizon=meta.get("truncation_horizon"),
        bias_bound=meta.get("bias_bound", 0.0),
    )
